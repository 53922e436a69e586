"""
Test CLI commands and exit codes
"""

import json
from unittest.mock import patch

import pytest

from linmap.cli import run
from linmap.numthy import FACTOR_MEMO
from linmap.oracle import OracleReport
from linmap.verify import SuiteResult


@pytest.fixture(autouse=True)
def cache_file(tmp_path, monkeypatch):
    path = tmp_path / "factor-cache.json"
    monkeypatch.setenv("LINMAP_CACHE", str(path))
    return path


def run_json(capsys, *argv):
    code = run(list(argv) + ["--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    return out, json.loads(out)


class TestCensusCommands:
    """Test census-A and census-B"""

    def test_census_a_json(self, capsys):
        """Test the exact JSON of A_2(3)"""
        out, payload = run_json(capsys, "census-A", "-q", "2", "-n", "3")
        assert out.startswith('{"q":"2","n":3,"value":"13"')
        assert out.endswith("\n")
        assert payload["kind"] == "A"

    def test_census_b_inventory(self, capsys):
        """Test the inventory lists each class of B_2(2)"""
        _, payload = run_json(capsys, "census-B", "-q", "2", "-n", "2", "--inventory")
        assert payload["value"] == "3"
        assert len(payload["inventory"]) == 3
        assert payload["inventory"][0] == {"cycles": [["1", "1"], ["3", "1"]], "data": [["3", "1"]], "data_count": "1"}

    def test_text_output(self, capsys):
        """Test the rich table carries the value"""
        assert run(["census-A", "-q", "2", "-n", "3"]) == 0
        assert "13" in capsys.readouterr().out

    def test_deterministic(self, capsys):
        """Test repeated runs print identical bytes"""
        first, _ = run_json(capsys, "census-B", "-q", "3", "-n", "3", "--inventory")
        second, _ = run_json(capsys, "census-B", "-q", "3", "-n", "3", "--inventory")
        assert first == second


class TestNumberCommands:
    """Test bounds, sigma, zsigmondy, order, cycles and factor-product"""

    def test_bounds(self, capsys):
        """Test lower and certified upper bound for q = 2, n = 2"""
        _, payload = run_json(capsys, "bounds", "-q", "2", "-n", "2")
        assert payload == {"q": "2", "n": 2, "lower": "3", "upper_sum": "4", "upper": "202"}

    def test_eq_main(self, capsys):
        """Test the max-term bounds for n = 1"""
        _, payload = run_json(capsys, "eq-main", "-q", "2", "-n", "1")
        assert payload["maxterm_lower"] == "1"
        assert payload["maxterm_upper"] == "32"

    def test_sigma_csv(self, capsys):
        """Test CSV rows with CRLF line ends"""
        assert run(["sigma", "-q", "2", "--i-max", "4", "--format", "csv"]) == 0
        out = capsys.readouterr().out
        assert out == "i,sigma,sigma_star\r\n1,1,1\r\n2,2,1\r\n3,2,1\r\n4,4,2\r\n"

    def test_sigma_alias(self, capsys):
        """Test --imax is accepted"""
        assert run(["sigma", "-q", "3", "--imax", "2", "--format", "csv"]) == 0
        assert capsys.readouterr().out.endswith("2,4,2\r\n")

    def test_zsigmondy_none(self, capsys):
        """Test j = 6 over F_2 has no primitive prime"""
        assert run(["zsigmondy", "-q", "2", "--j-max", "8", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.split("\r\n")
        assert lines[0] == "j,prime"
        assert lines[3] == "3,7"
        assert lines[6] == "6,none"
        assert lines[8] == "8,17"

    def test_order(self, capsys):
        """Test the order of x^4+x+1"""
        _, payload = run_json(capsys, "order", "-q", "2", "--poly", "1,1,0,0,1")
        assert payload == {"q": "2", "poly": "1,1,0,0,1", "order": "15"}

    def test_cycles(self, capsys):
        """Test the structure of a unipotent block next to x^2+x+1"""
        _, payload = run_json(capsys, "cycles", "-q", "2", "--data", "3:1,1:2")
        assert payload["dimension"] == 4
        assert payload["cycles"] == [["1", "2"], ["2", "1"], ["3", "2"], ["6", "1"]]

    def test_factor_product(self, capsys):
        """Test peeling a product"""
        _, payload = run_json(capsys, "factor-product", "--cycles", "1:1,2:1,3:1,6:1")
        assert payload["factors"] == [["2", "1"], ["3", "1"]]

    def test_growth_csv(self, capsys):
        """Test the n = 1 row leaves undefined columns as none"""
        assert run(["growth", "-q", "2", "--n-max", "2", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.split("\r\n")
        assert lines[0] == "n,log_A,n_over_loglog_n,log_lower,log_upper_sum,loglog_A_over_log_n"
        assert lines[1].startswith("1,0.693147,none,0.000000,")
        assert lines[1].endswith(",none")


class TestExitCodes:
    """Test error mapping"""

    def test_not_prime_power(self, capsys):
        """Test q = 6 is a guard error"""
        assert run(["census-A", "-q", "6", "-n", "2"]) == 1
        assert "NotPrimePower" in capsys.readouterr().err

    def test_too_large(self):
        """Test n above the census guard"""
        assert run(["census-B", "-q", "2", "-n", "13"]) == 1

    def test_not_a_product(self):
        """Test a multiset with no product form"""
        assert run(["factor-product", "--cycles", "1:2,2:1"]) == 1

    def test_reducible_order(self, capsys):
        """Test a reducible polynomial is a guard error"""
        assert run(["order", "-q", "2", "--poly", "1,0,1", "--format", "json"]) == 1
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "NotIrreducible" in captured.err

    def test_usage_errors(self):
        """Test missing options, bad choices and unknown commands"""
        assert run(["census-A", "-n", "2"]) == 64
        assert run(["census-A", "-q", "2", "-n", "2", "--format", "xml"]) == 64
        assert run(["census-A", "-q", "1", "-n", "2"]) == 64
        assert run(["no-such-command"]) == 64
        assert run(["verify", "--suite", "no such suite"]) == 64

    def test_oracle_violation(self, capsys):
        """Test a Fitting violation exits with 2"""
        report = OracleReport(q=2, n=1, total_maps=2, distinct_codes=2, invertible_distinct_codes=1,
                              prop1_violations=1, violations=["matrix #0: broken"])
        with patch('linmap.cli.oracle.scan', return_value=report):
            assert run(["oracle", "-q", "2", "-n", "1"]) == 2
        assert "matrix #0: broken" in capsys.readouterr().err

    def test_oracle_ok(self, capsys):
        """Test a clean scan"""
        _, payload = run_json(capsys, "oracle", "-q", "2", "-n", "2")
        assert payload["distinct_codes"] == "6"
        assert payload["prop1_violations"] == 0

    def test_verify_failure(self):
        """Test failed suites exit with 2"""
        failed = SuiteResult("tensor laws", passed=1, failed=1, failures=["x"])
        with patch('linmap.verify.run_verify', return_value=[failed]):
            assert run(["verify", "--quick"]) == 2

    def test_verify_selected_suite(self, capsys):
        """Test a single quick suite passes"""
        assert run(["verify", "--quick", "--suite", "closed form", "--format", "csv"]) == 0
        assert capsys.readouterr().out.splitlines()[1].startswith("closed form,")

    def test_version(self, capsys):
        """Test --version"""
        assert run(["--version"]) == 0
        assert "1.0.0" in capsys.readouterr().out


class TestCacheFile:
    """Test the factor cache is written for large values"""

    def test_cache_written(self, capsys, cache_file):
        """Test sigma over a large range persists factorizations"""
        assert run(["sigma", "-q", "2", "--i-max", "45", "--format", "csv"]) == 0
        data = json.loads(cache_file.read_text())
        assert str(2 ** 45 - 1) in data

    def test_cache_flag(self, capsys, tmp_path):
        """Test --cache overrides the environment"""
        other = tmp_path / "other.json"
        assert run(["sigma", "-q", "2", "--i-max", "45", "--format", "csv", "--cache", str(other)]) == 0
        assert other.exists()

    def test_warm_cache_same_output(self, capsys, cache_file):
        """Test a warm cache prints the same bytes as a cold run"""
        FACTOR_MEMO.clear()
        cold, _ = run_json(capsys, "sigma", "-q", "2", "--i-max", "45")
        assert cache_file.exists()
        FACTOR_MEMO.clear()
        warm, _ = run_json(capsys, "sigma", "-q", "2", "--i-max", "45")
        assert 2 ** 45 - 1 in FACTOR_MEMO.snapshot()
        assert warm == cold
