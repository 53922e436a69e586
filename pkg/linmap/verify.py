"""
Invariant suite runner.
Runs every property check of the library and reports pass/fail counts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn

from . import census, cyclegraph, ffield, numthy, oracle
from .constants import DEFAULT_SEED
from .cyclegraph import BlockSpec, CycleMultiset, ProductForm

console = Console(stderr=True)

# (q, n) pairs checked against the brute-force oracle
ORACLE_GRID = ((2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (4, 1), (4, 2), (5, 1), (5, 2))
SANDWICH_QS = (2, 3, 4, 5)
SANDWICH_N_MAX = 8
QUICK_N_MAX = 4


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def check(self, ok: bool, label: str) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            self.failures.append(label)

    @property
    def ok(self) -> bool:
        return self.failed == 0


@dataclass
class VerifyContext:
    seed: int = DEFAULT_SEED
    workers: int = 1
    quick: bool = False
    _b_cache: dict[tuple[int, int], census.CensusResult] = field(default_factory=dict)

    @property
    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    @property
    def n_max(self) -> int:
        return QUICK_N_MAX if self.quick else SANDWICH_N_MAX

    def count_B(self, q: int, n: int) -> census.CensusResult:
        key = (q, n)
        if key not in self._b_cache:
            self._b_cache[key] = census.count_B(q, n, self.workers)
        return self._b_cache[key]

    def count_A(self, q: int, n: int) -> int:
        return sum(numthy.partitions_count(k) * self.count_B(q, n - k).value for k in range(n + 1))


# ============================================================================
# Finite fields
# ============================================================================

def suite_field_axioms(res: SuiteResult, vc: VerifyContext) -> None:
    for q in (2, 3, 4, 5, 7, 8, 9, 16):
        F = ffield.field_for_q(q)
        elems = range(q)
        for a, b, c in itertools.product(elems, repeat=3):
            res.check(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)), f"F_{q}: ({a}*{b})*{c}")
            res.check(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)), f"F_{q}: {a}*({b}+{c})")
        for a in elems:
            if a:
                res.check(F.mul(a, F.inv(a)) == 1, f"F_{q}: {a} * {a}^-1")


def suite_irreducibles(res: SuiteResult, vc: VerifyContext) -> None:
    for q, t_max in ((2, 5), (3, 4), (4, 3), (5, 3)):
        F = ffield.field_for_q(q)
        for t in range(1, t_max + 1):
            for f in ffield.irreducibles(F, t):
                divisible = any(
                    not ffield.poly_mod(f, g, F)
                    for k in range(1, t // 2 + 1)
                    for g in ffield.monic_polys(F, k)
                )
                res.check(not divisible, f"F_{q}: {ffield.poly_to_str(f, F)} has a small factor")
                if f[0]:
                    one = ffield.poly_mod_pow(ffield.X, q ** t - 1, f, F)
                    res.check(one == ffield.ONE, f"F_{q}: x^(q^t-1) mod {ffield.poly_to_str(f, F)}")


def suite_rank_nullity(res: SuiteResult, vc: VerifyContext) -> None:
    rng = vc.rng
    for q in (2, 3, 4, 5):
        ops = ffield.mat_ops(ffield.field_for_q(q))
        for n in range(1, 6):
            for _ in range(20):
                T = ffield.Matrix.of(rng.integers(0, q, size=(n, n)).tolist())
                res.check(ops.kernel_dim(T) + len(ops.image_basis(T)) == n, f"F_{q} rank-nullity {T.rows}")


# ============================================================================
# Number theory
# ============================================================================

def suite_factor_roundtrip(res: SuiteResult, vc: VerifyContext) -> None:
    from sympy import isprime

    values = [q ** i - 1 for q in (2, 3, 5, 7) for i in range(1, 31)]
    values += [int(x) for x in vc.rng.integers(1, 2 ** 62, size=50)]
    for n in values:
        fact = numthy.factor(n)
        res.check(numthy.factorization_value(fact) == n, f"product of factor({n})")
        res.check(all(isprime(p) for p, _ in fact), f"primes of factor({n})")


def suite_sigma_identities(res: SuiteResult, vc: VerifyContext) -> None:
    for q in (2, 3, 5, 7):
        for i in range(1, 21):
            divs = numthy.divisors(i)
            by_order = sum(numthy.sigma_star(q, j) for j in divs)
            res.check(by_order == numthy.sigma(q, i), f"sum sigma*_j = sigma_i (q={q}, i={i})")
            inverted = sum(numthy.moebius(i // j) * numthy.sigma(q, j) for j in divs)
            res.check(inverted == numthy.sigma_star(q, i), f"moebius inversion (q={q}, i={i})")


def suite_divisor_ratios(res: SuiteResult, vc: VerifyContext) -> None:
    for q in (2, 3, 4, 5, 7):
        for i in range(1, 21):
            s, s_star = numthy.sigma(q, i), numthy.sigma_star(q, i)
            res.check(2 * s_star >= s, f"2 sigma* >= sigma (q={q}, i={i})")
            # sigma >= 2^(tau(i) - 6), compared as integers
            res.check(s * 64 >= 2 ** numthy.tau(i), f"sigma >= 2^(tau(i)-6) (q={q}, i={i})")


def suite_primorial(res: SuiteResult, vc: VerifyContext) -> None:
    for k in range(10, 101):
        res.check(math.log(numthy.primorial(k)) < 2 * k * math.log(k), f"log primorial({k})")


def suite_divisor_growth(res: SuiteResult, vc: VerifyContext) -> None:
    for q in (2, 3, 5):
        for t in range(10, 31):
            bound = 2 * t / math.log(t) * math.log(q)
            res.check(math.log(numthy.sigma(q, t)) < bound, f"sigma_{t} < q^(2t/log t) (q={q})")


def suite_partition_bound(res: SuiteResult, vc: VerifyContext) -> None:
    for n in range(1, 201):
        res.check(numthy.partitions_count(n) <= census.certified_ceil(n, 1), f"P({n}) <= 2^(4 sqrt n)")


def suite_zsigmondy(res: SuiteResult, vc: VerifyContext) -> None:
    for q in (2, 3, 5, 7):
        for j in range(1, 21):
            prime = numthy.zsigmondy_prime(q, j)
            if j >= 7:
                res.check(prime is not None, f"no primitive prime for (q={q}, j={j})")
            elif prime is None:
                res.notes.append(f"exception q={q}, j={j}")
    res.check(numthy.zsigmondy_prime(2, 6) is None, "(2, 6) should have no primitive prime")


# ============================================================================
# Cycle algebra
# ============================================================================

def _random_multiset(rng: np.random.Generator) -> CycleMultiset:
    size = int(rng.integers(1, 4))
    counts = {int(k): int(m) for k, m in zip(rng.integers(1, 13, size=size), rng.integers(1, 4, size=size))}
    return CycleMultiset.from_counts(counts)


def suite_tensor_laws(res: SuiteResult, vc: VerifyContext) -> None:
    rng = vc.rng
    tensor = cyclegraph.tensor
    for _ in range(200):
        a, b, c = (_random_multiset(rng) for _ in range(3))
        res.check(tensor(a, b) == tensor(b, a), f"{a} x {b} commutes")
        res.check(tensor(tensor(a, b), c) == tensor(a, tensor(b, c)), f"({a} x {b}) x {c} associates")
        res.check(tensor(a, cyclegraph.UNIT) == a, f"{a} x C_1")
        res.check(tensor(a, b).total_vertices == a.total_vertices * b.total_vertices, f"|{a} x {b}|")


def suite_tensor_digraph(res: SuiteResult, vc: VerifyContext) -> None:
    for m in range(1, 13):
        for n in range(1, 13):
            graph = oracle.tensor_digraph(oracle.cycle_graph(m), oracle.cycle_graph(n))
            expected = cyclegraph.tensor(CycleMultiset.cycle(m), CycleMultiset.cycle(n))
            res.check(oracle.cycle_multiset(graph) == expected, f"C_{m} x C_{n}")


def suite_elspas(res: SuiteResult, vc: VerifyContext) -> None:
    for q in (2, 3):
        F = ffield.field_for_q(q)
        ops = ffield.mat_ops(F)
        for t in range(1, 4):
            for f in ffield.irreducibles(F, t):
                if f == ffield.X:
                    continue
                m = cyclegraph.poly_order(f, F)
                s = 1
                while q ** (t * s) <= 4096:
                    T = ffield.companion(ffield.poly_pow(f, s, F), F)
                    iterated = oracle.cycle_multiset(oracle.build_graph(T, F))
                    formula = cyclegraph.elspas_structure(BlockSpec(t, m, s), F)
                    res.check(iterated == formula, f"F_{q}: {ffield.poly_to_str(f, F)}^{s}")
                    res.check(formula.total_vertices == q ** (t * s), f"F_{q}: vertices of block {t},{m},{s}")
                    res.check(ops.is_invertible(T), f"F_{q}: companion of {ffield.poly_to_str(f, F)}^{s}")
                    s += 1


def _product_forms_grid():
    for size in range(1, 4):
        for ks in itertools.combinations(range(1, 9), size):
            for alphas in itertools.product(range(1, 4), repeat=size):
                yield ProductForm(tuple(zip(ks, alphas)))


def suite_product_roundtrip(res: SuiteResult, vc: VerifyContext) -> None:
    forms = list(_product_forms_grid())
    rng = vc.rng
    for _ in range(1000):
        size = int(rng.integers(1, 5))
        ks = sorted(int(k) for k in rng.choice(np.arange(1, 13), size=size, replace=False))
        alphas = [int(a) for a in rng.integers(1, 6, size=size)]
        forms.append(ProductForm(tuple(zip(ks, alphas))))
    for pf in forms:
        try:
            back = cyclegraph.factor_product(cyclegraph.product_form_expand(pf))
        except cyclegraph.NotAProduct as e:
            res.check(False, f"{pf}: {e}")
            continue
        res.check(back == pf, f"{pf} -> {back}")


def suite_closed_form(res: SuiteResult, vc: VerifyContext) -> None:
    q = 2
    for a in (3, 5, 7):
        base = cyclegraph.repeated_factor(a, q, 1)
        for times in range(1, 5):
            res.check(
                cyclegraph.tensor_power(base, times) == cyclegraph.repeated_factor(a, q, times),
                f"{times} factors of {base}",
            )


# ============================================================================
# Census
# ============================================================================

def suite_sandwich(res: SuiteResult, vc: VerifyContext) -> None:
    for q in SANDWICH_QS:
        for n in range(1, vc.n_max + 1):
            a = vc.count_A(q, n)
            res.check(census.bound_lower(q, n) <= a <= census.bound_upper(q, n), f"lower <= A <= upper (q={q}, n={n})")
            low, high = census.bound_eq_main(q, n)
            res.check(low <= a <= high, f"max-term sandwich (q={q}, n={n})")


def suite_bijective_bounds(res: SuiteResult, vc: VerifyContext) -> None:
    for q in SANDWICH_QS:
        for n in range(1, vc.n_max + 1):
            b = vc.count_B(q, n).value
            res.check(census.separable_lower_B(q, n) <= b, f"lambda |- n lower bound for B (q={q}, n={n})")
            res.check(b <= census.data_upper_B(q, n), f"lambda |- n upper bound for B (q={q}, n={n})")


def suite_separable_injective(res: SuiteResult, vc: VerifyContext) -> None:
    for q in SANDWICH_QS:
        for n in range(1, min(vc.n_max, 6) + 1):
            res.check(census.separable_collisions(q, n) == 0, f"s = 1 data collide (q={q}, n={n})")


def suite_monotone(res: SuiteResult, vc: VerifyContext) -> None:
    for q in SANDWICH_QS:
        scalar = CycleMultiset.cycle(1, q)
        for n in range(1, vc.n_max + 1):
            previous = {c.structure for c in vc.count_B(q, n - 1).inventory}
            current = {c.structure for c in vc.count_B(q, n).inventory}
            images = {cyclegraph.tensor(s, scalar) for s in previous}
            res.check(len(images) == len(previous), f"adding an identity block is injective (q={q}, n={n})")
            res.check(images <= current, f"B_{q}({n - 1}) embeds in B_{q}({n})")


def suite_growth(res: SuiteResult, vc: VerifyContext) -> None:
    n_top = 6 if vc.quick else 10
    logs = [math.log(vc.count_A(2, n)) for n in range(2, n_top + 1)]
    for n, (a, b) in enumerate(zip(logs, logs[1:]), start=2):
        res.check(a < b, f"log A_2({n}) < log A_2({n + 1})")


# ============================================================================
# Oracle
# ============================================================================

def suite_oracle(res: SuiteResult, vc: VerifyContext) -> None:
    grid = [(q, n) for q, n in ORACLE_GRID if not vc.quick or q ** (n * n) <= 4096]
    for q, n in grid:
        report = oracle.scan(q, n, vc.workers, check_fitting=True)
        res.check(report.distinct_codes == vc.count_A(q, n), f"A_{q}({n}): oracle {report.distinct_codes}")
        res.check(report.invertible_distinct_codes == vc.count_B(q, n).value,
                  f"B_{q}({n}): oracle {report.invertible_distinct_codes}")
        res.check(report.prop1_violations == 0, f"Fitting split (q={q}, n={n}): {report.violations[:3]}")


def suite_nilpotent(res: SuiteResult, vc: VerifyContext) -> None:
    for q in (2, 3):
        for n in range(1, 3 if vc.quick else 5):
            classes = oracle.nilpotent_classes(q, n, vc.seed)
            all_codes = set().union(*classes.values())
            res.check(len(all_codes) == numthy.partitions_count(n), f"nilpotent codes = P({n}) (q={q})")
            res.check(set(classes) == set(numthy.partitions_list(n)), f"every partition of {n} occurs (q={q})")
            res.check(all(len(codes) == 1 for codes in classes.values()), f"one code per partition (q={q}, n={n})")


def suite_relabel(res: SuiteResult, vc: VerifyContext) -> None:
    rng = vc.rng
    for q, n in ((2, 3), (3, 2), (2, 4)):
        F = ffield.field_for_q(q)
        for _ in range(25):
            T = ffield.Matrix.of(rng.integers(0, q, size=(n, n)).tolist())
            g = oracle.build_graph(T, F)
            h = oracle.relabel(g, [int(v) for v in rng.permutation(g.size)])
            res.check(oracle.canonical_code(g) == oracle.canonical_code(h), f"relabel {T.rows} over F_{q}")


def suite_cycle_only_codes(res: SuiteResult, vc: VerifyContext) -> None:
    for q, n in ((2, 3), (3, 2)):
        F = ffield.field_for_q(q)
        ops = ffield.mat_ops(F)
        code_of: dict[CycleMultiset, str] = {}
        for index in range(q ** (n * n)):
            T = oracle.matrix_from_index(index, q, n)
            if not ops.is_invertible(T):
                continue
            g = oracle.build_graph(T, F)
            code = oracle.canonical_code(g)
            structure = oracle.cycle_multiset(g)
            res.check(code_of.setdefault(structure, code) == code, f"code of {structure} (q={q}, n={n})")
        res.check(len(set(code_of.values())) == len(code_of), f"cycle structures share a code (q={q}, n={n})")


SUITES: list[tuple[str, Callable[[SuiteResult, VerifyContext], None]]] = [
    ('field axioms', suite_field_axioms),
    ('irreducibles', suite_irreducibles),
    ('rank-nullity', suite_rank_nullity),
    ('factor round-trip', suite_factor_roundtrip),
    ('sigma identities', suite_sigma_identities),
    ('divisor ratios', suite_divisor_ratios),
    ('primorial bound', suite_primorial),
    ('divisor growth', suite_divisor_growth),
    ('partition bound', suite_partition_bound),
    ('zsigmondy primes', suite_zsigmondy),
    ('tensor laws', suite_tensor_laws),
    ('tensor vs digraph', suite_tensor_digraph),
    ('elspas vs companion', suite_elspas),
    ('product round-trip', suite_product_roundtrip),
    ('closed form', suite_closed_form),
    ('bound sandwich', suite_sandwich),
    ('bijective bounds', suite_bijective_bounds),
    ('separable injectivity', suite_separable_injective),
    ('monotone B', suite_monotone),
    ('growth', suite_growth),
    ('oracle equivalence', suite_oracle),
    ('nilpotent classes', suite_nilpotent),
    ('relabel invariance', suite_relabel),
    ('cycle-only codes', suite_cycle_only_codes),
]


def run_suite(name: str, suite: Callable[[SuiteResult, VerifyContext], None], vc: VerifyContext) -> SuiteResult:
    res = SuiteResult(name)
    try:
        suite(res, vc)
    except Exception as e:
        res.check(False, f"suite error: {e}")
        console.print(f"[red]❌ {name}: {e}[/red]")
    return res


def run_verify(seed: int = DEFAULT_SEED, workers: int = 1, quick: bool = False,
               only: list[str] | None = None) -> list[SuiteResult]:
    """
    Run the named invariant suites in order with a progress spinner

    Args:
        seed: Seed for every random choice the suites make
        workers: Process count passed to census and oracle calls
        quick: Use the reduced size limits
        only: Suite names to run; None runs all of them

    Returns:
        One SuiteResult per suite that ran
    """
    vc = VerifyContext(seed=seed, workers=workers, quick=quick)
    chosen = [(name, fn) for name, fn in SUITES if not only or name in only]
    results = []
    with Progress(SpinnerColumn(), TextColumn("{task.description}"), console=console, transient=True) as progress:
        task = progress.add_task("verify", total=len(chosen))
        for name, suite in chosen:
            progress.update(task, description=f"[cyan]{name}[/cyan]")
            res = run_suite(name, suite, vc)
            results.append(res)
            progress.advance(task)
            mark = "[green]✅[/green]" if res.ok else "[red]❌[/red]"
            console.print(f"{mark} {name}: {res.passed} passed, {res.failed} failed")
            for failure in res.failures[:5]:
                console.print(f"[red]   - {failure}[/red]")
            for note in res.notes:
                console.print(f"[dim]   {note}[/dim]")
    return results
