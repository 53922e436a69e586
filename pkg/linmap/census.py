"""
Exact counts of functional-graph classes of linear maps on F_q^n.

B_q(n) counts the distinct cycle structures of invertible maps: every
invertible map splits into cyclic blocks with minimal polynomial f^s, and
its graph is the tensor product of the blocks' cycle structures, so it is
enough to enumerate multisets of block types (t, m, s) and deduplicate the
resulting CycleMultisets.

A_q(n) adds the nilpotent part: A_q(n) = sum_k P(k) B_q(n - k).

Also here: the lambda-vector bound sums sandwiching A_q(n), the max-term
variants, and the growth report.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from mpmath import mp
from rich.console import Console

from . import numthy
from .constants import CEIL_GUARD_BITS, CEIL_START_PREC, MAX_CENSUS_N
from .cyclegraph import UNIT, BlockSpec, CycleMultiset, elspas_structure, tensor
from .errors import NotCoprime, TooLarge
from .ffield import field_for_q

console = Console(stderr=True)


@dataclass(frozen=True, order=True)
class GraphData:
    """Multiset of block types of an invertible map, kept sorted by (t, m, s)."""
    blocks: tuple[BlockSpec, ...] = ()

    def __post_init__(self):
        if list(self.blocks) != sorted(self.blocks):
            raise ValueError("graph data blocks must be in canonical (t, m, s) order")

    @classmethod
    def of(cls, blocks: Sequence[BlockSpec]) -> GraphData:
        return cls(tuple(sorted(blocks)))

    @classmethod
    def parse(cls, text: str, q: int) -> GraphData:
        """'3:1,1:2' -> blocks (m=3, s=1), (m=1, s=2); t is derived as ord_m q."""
        blocks = []
        for item in filter(None, (part.strip() for part in text.split(','))):
            m_text, _, s_text = item.partition(':')
            m, s = int(m_text), int(s_text or 1)
            if m < 1:
                raise ValueError(f"block order must be positive, got {m}")
            blocks.append(BlockSpec(numthy.mult_order(q, m), m, s))
        return cls.of(blocks)

    @property
    def dimension(self) -> int:
        return sum(b.dimension for b in self.blocks)

    def __str__(self) -> str:
        return ','.join(f"{b.m}:{b.s}" for b in self.blocks)

    def to_json(self) -> list[list[str]]:
        return [[str(b.m), str(b.s)] for b in self.blocks]


@dataclass(frozen=True)
class BijectiveClass:
    """One distinct cycle structure, its first GraphData in canonical order, and how many data hit it."""
    structure: CycleMultiset
    representative: GraphData
    data_count: int

    def to_json(self) -> dict:
        return {
            'cycles': self.structure.to_json(),
            'data': self.representative.to_json(),
            'data_count': str(self.data_count),
        }


@dataclass(frozen=True)
class ClassPair:
    """A class of all maps: nilpotent part (Jordan partition) with a bijective class."""
    nilpotent: tuple[int, ...]
    bijective: CycleMultiset

    def to_json(self) -> dict:
        return {
            'nilpotent': [str(part) for part in self.nilpotent],
            'cycles': self.bijective.to_json(),
        }


@dataclass(frozen=True)
class CensusResult:
    q: int
    n: int
    value: int
    kind: str = 'B'
    collisions: int = 0
    inventory: tuple | None = None

    def to_json(self) -> dict:
        return {
            'q': str(self.q),
            'n': self.n,
            'value': str(self.value),
            'kind': self.kind,
            'collisions': str(self.collisions),
            'inventory': None if self.inventory is None else [e.to_json() for e in self.inventory],
        }


# ============================================================================
# Graph data enumeration
# ============================================================================

def _check_census(q: int, n: int) -> None:
    field_for_q(q)
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n > MAX_CENSUS_N:
        raise TooLarge(f"n = {n} exceeds the census guard n <= {MAX_CENSUS_N}")


@lru_cache(maxsize=None)
def block_types(q: int, k: int) -> tuple[BlockSpec, ...]:
    """Block types of dimension k: t | k, ord_m q = t, s = k / t."""
    return tuple(sorted(
        BlockSpec(t, m, k // t)
        for t in range(1, k + 1) if k % t == 0
        for m in numthy.exact_order_divisors(q, t)
    ))


def _types_up_to(q: int, n: int) -> tuple[BlockSpec, ...]:
    return tuple(sorted(b for k in range(1, n + 1) for b in block_types(q, k)))


def _multisets(types: tuple[BlockSpec, ...], start: int, remaining: int) -> Iterator[tuple[BlockSpec, ...]]:
    if remaining == 0:
        yield ()
        return
    for idx in range(start, len(types)):
        block = types[idx]
        if block.dimension <= remaining:
            for tail in _multisets(types, idx, remaining - block.dimension):
                yield (block,) + tail


def enumerate_graph_data(q: int, n: int) -> Iterator[GraphData]:
    """Every GraphData of dimension n, in canonical lexicographic order."""
    _check_census(q, n)
    for blocks in _multisets(_types_up_to(q, n), 0, n):
        yield GraphData(blocks)


@lru_cache(maxsize=None)
def _block_structure(q: int, block: BlockSpec) -> CycleMultiset:
    return elspas_structure(block, field_for_q(q))


def cycle_structure_of(data: GraphData, q: int) -> CycleMultiset:
    for block in data.blocks:
        if math.gcd(block.m, q) != 1:
            raise NotCoprime(f"block order {block.m} is not coprime to q = {q}")
    result = UNIT
    for block in data.blocks:
        result = tensor(result, _block_structure(q, block))
    return result


# ============================================================================
# Counting
# ============================================================================

# structure -> (first data, number of data)
Inventory = dict[CycleMultiset, tuple[GraphData, int]]


def _walk(q, types, start, remaining, prefix, partial, found: Inventory) -> None:
    if remaining == 0:
        data = GraphData(prefix)
        seen = found.get(partial)
        if seen is None:
            found[partial] = (data, 1)
        else:
            found[partial] = (min(seen[0], data), seen[1] + 1)
        return
    for idx in range(start, len(types)):
        block = types[idx]
        if block.dimension <= remaining:
            _walk(q, types, idx, remaining - block.dimension, prefix + (block,),
                  tensor(partial, _block_structure(q, block)), found)


def _census_chunk(q: int, n: int, lead: int) -> Inventory:
    """All data of dimension n whose first block is types[lead]."""
    types = _types_up_to(q, n)
    block = types[lead]
    found: Inventory = {}
    if block.dimension <= n:
        _walk(q, types, lead, n - block.dimension, (block,), _block_structure(q, block), found)
    return found


def merge_inventories(parts: Sequence[Inventory]) -> Inventory:
    """Associative, order-independent union keeping the canonical-first representative."""
    merged: Inventory = {}
    for part in parts:
        for structure, (data, count) in part.items():
            seen = merged.get(structure)
            merged[structure] = (data, count) if seen is None else (min(seen[0], data), seen[1] + count)
    return merged


def bijective_inventory(q: int, n: int, workers: int = 1) -> Inventory:
    _check_census(q, n)
    if n == 0:
        return {UNIT: (GraphData(), 1)}
    leads = range(len(_types_up_to(q, n)))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_census_chunk, [q] * len(leads), [n] * len(leads), leads))
    else:
        parts = [_census_chunk(q, n, lead) for lead in leads]
    return merge_inventories(parts)


def _sorted_classes(inventory: Inventory) -> tuple[BijectiveClass, ...]:
    return tuple(
        BijectiveClass(structure, data, count)
        for structure, (data, count) in sorted(inventory.items(), key=lambda item: item[0].entries)
    )


def count_B(q: int, n: int, workers: int = 1, with_inventory: bool = True) -> CensusResult:
    """
    B_q(n): distinct cycle structures over all graph data of dimension n

    Args:
        q: Prime power field size
        n: Dimension, 0 <= n <= 12
        workers: Process count for the inventory walk
        with_inventory: Attach the sorted class list to the result

    Returns:
        CensusResult with kind 'B' and the collision count
    """
    inventory = bijective_inventory(q, n, workers)
    total = sum(count for _, count in inventory.values())
    return CensusResult(
        q=q, n=n, value=len(inventory), kind='B',
        collisions=total - len(inventory),
        inventory=_sorted_classes(inventory) if with_inventory else None,
    )


def count_A(q: int, n: int, workers: int = 1, with_inventory: bool = False) -> CensusResult:
    """A_q(n) = sum over k of P(k) * B_q(n - k)."""
    _check_census(q, n)
    value = 0
    collisions = 0
    pairs: list[ClassPair] = []
    for k in range(n + 1):
        b = count_B(q, n - k, workers, with_inventory=with_inventory)
        value += numthy.partitions_count(k) * b.value
        collisions += b.collisions
        if with_inventory:
            for part in numthy.partitions_list(k):
                pairs.extend(ClassPair(part, cls.structure) for cls in b.inventory)
    return CensusResult(
        q=q, n=n, value=value, kind='A', collisions=collisions,
        inventory=tuple(pairs) if with_inventory else None,
    )


def separable_collisions(q: int, n: int) -> int:
    """Collisions among data with every s = 1 (such data should map injectively)."""
    seen: set[CycleMultiset] = set()
    clashes = 0
    for data in enumerate_graph_data(q, n):
        if any(b.s != 1 for b in data.blocks):
            continue
        structure = cycle_structure_of(data, q)
        if structure in seen:
            clashes += 1
        seen.add(structure)
    return clashes


# ============================================================================
# Bounds
# ============================================================================

LambdaVector = tuple[int, ...]


def lambda_vectors(n: int, exact: bool = False) -> list[LambdaVector]:
    """
    Nonzero lambda = (lambda_1, ..., lambda_n) with sum i*lambda_i <= n,
    or = n when exact (then the zero vector is the one vector for n = 0).
    """
    sizes = [n] if exact else range(1, n + 1)
    vectors = []
    for k in sizes:
        for part in numthy.partitions_list(k):
            lam = [0] * n
            for piece in part:
                lam[piece - 1] += 1
            vectors.append(tuple(lam))
    return vectors


def _product_term(lam: LambdaVector, sig: Sequence[int]) -> int:
    return math.prod(math.comb(sig[i] + c - 1, c) for i, c in enumerate(lam) if c)


def _sigmas(q: int, n: int) -> list[int]:
    return [numthy.sigma(q, i) for i in range(1, n + 1)]


def _sigma_stars(q: int, n: int) -> list[int]:
    return [numthy.sigma_star(q, i) for i in range(1, n + 1)]


def certified_ceil(n: int, factor: int) -> int:
    """
    ceil(factor * 2^(4 sqrt n)) for integer factor >= 0. Exact when n is a
    perfect square; otherwise evaluated at rising precision until a margin
    around the value no longer straddles an integer.
    """
    if factor == 0:
        return 0
    root = math.isqrt(16 * n)
    if root * root == 16 * n:
        return factor << root
    prec = CEIL_START_PREC
    while True:
        with mp.workprec(prec):
            value = mp.mpf(factor) * mp.power(2, mp.sqrt(16 * n))
            margin = value * mp.ldexp(1, CEIL_GUARD_BITS - prec)
            low, high = int(mp.ceil(value - margin)), int(mp.ceil(value + margin))
        if low == high:
            return high
        prec *= 2


def _check_bounds(q: int, n: int) -> None:
    _check_census(q, n)
    if n < 1:
        raise ValueError(f"bounds need n >= 1, got {n}")


def bound_lower(q: int, n: int) -> int:
    _check_bounds(q, n)
    sig = _sigma_stars(q, n)
    return sum(_product_term(lam, sig) for lam in lambda_vectors(n))


def upper_sum(q: int, n: int) -> int:
    """The integer sum that bound_upper scales by 2^(4 sqrt n)."""
    _check_bounds(q, n)
    sig = _sigmas(q, n)
    return sum(_product_term(lam, sig) for lam in lambda_vectors(n))


def bound_upper(q: int, n: int) -> int:
    return certified_ceil(n, upper_sum(q, n))


def eq_main_terms(q: int, n: int) -> tuple[int, int]:
    """Largest single lambda-products (sigma* and sigma versions), before any multiplier."""
    _check_bounds(q, n)
    lams = lambda_vectors(n)
    stars, sig = _sigma_stars(q, n), _sigmas(q, n)
    return max(_product_term(lam, stars) for lam in lams), max(_product_term(lam, sig) for lam in lams)


def bound_eq_main(q: int, n: int) -> tuple[int, int]:
    low, high = eq_main_terms(q, n)
    return low, certified_ceil(n, (n + 1) * high)


def separable_lower_B(q: int, n: int) -> int:
    """sum over lambda |- n of prod binom(sigma*_i + lambda_i - 1, lambda_i), a lower bound for B_q(n)."""
    _check_census(q, n)
    sig = _sigma_stars(q, n)
    return sum(_product_term(lam, sig) for lam in lambda_vectors(n, exact=True))


def data_upper_B(q: int, n: int) -> int:
    """Same sum with sigma_i, an upper bound for B_q(n)."""
    _check_census(q, n)
    sig = _sigmas(q, n)
    return sum(_product_term(lam, sig) for lam in lambda_vectors(n, exact=True))


# ============================================================================
# Growth
# ============================================================================

@dataclass(frozen=True)
class GrowthRow:
    n: int
    log_a: float
    n_over_loglog: float | None
    log_lower: float
    log_upper_sum: float
    loglog_ratio: float | None

    def as_tuple(self) -> tuple:
        return (self.n, self.log_a, self.n_over_loglog, self.log_lower, self.log_upper_sum, self.loglog_ratio)


GROWTH_COLUMNS = ('n', 'log_A', 'n_over_loglog_n', 'log_lower', 'log_upper_sum', 'loglog_A_over_log_n')


def growth_report(q: int, n_max: int, workers: int = 1) -> list[GrowthRow]:
    """Natural-log comparison of A_q(n) with bound_lower, upper_sum and the scale n / log log n."""
    _check_census(q, n_max)
    rows = []
    for n in range(1, n_max + 1):
        with console.status(f"[dim]A_{q}({n})...[/dim]"):
            log_a = math.log(count_A(q, n, workers).value)
        rows.append(GrowthRow(
            n=n,
            log_a=log_a,
            n_over_loglog=None if n == 1 else n / math.log(math.log(n)),
            log_lower=math.log(bound_lower(q, n)),
            log_upper_sum=math.log(upper_sum(q, n)),
            loglog_ratio=None if n == 1 else math.log(log_a) / math.log(n),
        ))
    return rows
