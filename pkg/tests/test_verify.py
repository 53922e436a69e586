"""
Tests for the invariant suite runner
"""

import pytest

from linmap.verify import SUITES, SuiteResult, VerifyContext, run_suite, run_verify


class TestSuiteResult:
    """Test pass/fail bookkeeping"""

    def test_check(self):
        """Test failures are recorded with their labels"""
        res = SuiteResult("demo")
        res.check(True, "fine")
        res.check(False, "broken")
        assert (res.passed, res.failed) == (1, 1)
        assert res.failures == ["broken"]
        assert not res.ok


class TestVerifyContext:
    """Test the shared context"""

    def test_rng_is_reproducible(self):
        """Test each rng access restarts from the seed"""
        vc = VerifyContext(seed=5)
        assert vc.rng.integers(0, 1000, size=5).tolist() == vc.rng.integers(0, 1000, size=5).tolist()

    def test_counts_cached(self):
        """Test B is computed once and A is the partition convolution"""
        vc = VerifyContext(quick=True)
        assert vc.count_A(2, 3) == 13
        assert (2, 3) in vc._b_cache
        assert vc.n_max == 4


class TestRunSuite:
    """Test running suites"""

    def test_exception_is_a_failure(self):
        """Test a crashing suite is reported, not raised"""
        def boom(res, vc):
            raise RuntimeError("kaput")

        res = run_suite("boom", boom, VerifyContext())
        assert res.failed == 1
        assert "kaput" in res.failures[0]

    def test_names_unique(self):
        """Test suite names are distinct"""
        names = [name for name, _ in SUITES]
        assert len(names) == len(set(names))

    @pytest.mark.parametrize("name", [
        "field axioms",
        "rank-nullity",
        "sigma identities",
        "divisor ratios",
        "primorial bound",
        "partition bound",
        "zsigmondy primes",
        "tensor laws",
        "tensor vs digraph",
        "product round-trip",
        "closed form",
        "bijective bounds",
        "monotone B",
        "relabel invariance",
        "cycle-only codes",
    ])
    def test_quick_suite_passes(self, name):
        """Test individual suites pass in quick mode"""
        [res] = run_verify(quick=True, only=[name])
        assert res.name == name
        assert res.ok, res.failures[:5]
        assert res.passed > 0

    def test_zsigmondy_notes_exceptions(self):
        """Test small-j exceptions are noted rather than failed"""
        [res] = run_verify(quick=True, only=["zsigmondy primes"])
        assert "exception q=2, j=6" in res.notes

    @pytest.mark.slow
    def test_full_quick_run(self):
        """Test every suite passes in quick mode"""
        results = run_verify(quick=True)
        assert [r.name for r in results] == [name for name, _ in SUITES]
        assert all(r.ok for r in results), [(r.name, r.failures[:3]) for r in results if not r.ok]

    @pytest.mark.slow
    def test_full_run(self):
        """Test every suite passes at full size, including the F_2^4 oracle scan"""
        results = run_verify(quick=False, workers=2)
        assert all(r.ok for r in results), [(r.name, r.failures[:3]) for r in results if not r.ok]
