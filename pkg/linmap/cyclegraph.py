"""
Cycle-multiset algebra for functional graphs of bijective linear maps.

A bijection's functional graph is a disjoint union of cycles, so up to
isomorphism it is the multiset of its cycle lengths. This module holds that
value type, polynomial orders, the cycle structure of a single invariant
block with minimal polynomial f^s, tensor products of cycle unions, and the
peeling factorization of products of the form (C_1 + a_1 C_k1) x ... .
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import numthy
from .constants import MAX_IRREDUCIBLE_DEGREE, MAX_IRREDUCIBLE_SEARCH
from .errors import NonIntegralCount, NotAProduct, NotCoprimeToX, NotIrreducible
from .ffield import (
    ONE,
    X,
    FieldCtx,
    Poly,
    is_irreducible,
    poly_degree,
    poly_mod_pow,
    poly_monic,
    poly_trim,
)


@dataclass(frozen=True)
class CycleMultiset:
    """
    Cycle length -> multiplicity, stored as (length, mult) pairs sorted by
    length. Zero multiplicities are never stored.
    """
    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        lengths = [length for length, _ in self.entries]
        if lengths != sorted(set(lengths)):
            raise ValueError(f"cycle lengths must be strictly increasing: {lengths}")
        for length, mult in self.entries:
            if length < 1 or mult < 1:
                raise ValueError(f"invalid cycle entry {length}:{mult}")

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> CycleMultiset:
        return cls(tuple(sorted((k, v) for k, v in counts.items() if v)))

    @classmethod
    def cycle(cls, length: int, mult: int = 1) -> CycleMultiset:
        return cls.from_counts({length: mult})

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def count(self, length: int) -> int:
        for k, mult in self.entries:
            if k == length:
                return mult
        return 0

    @property
    def lengths(self) -> list[int]:
        return [k for k, _ in self.entries]

    @property
    def total_vertices(self) -> int:
        return sum(k * mult for k, mult in self.entries)

    @property
    def cycle_count(self) -> int:
        return sum(mult for _, mult in self.entries)

    def __add__(self, other: CycleMultiset) -> CycleMultiset:
        counts = self.as_dict()
        for k, mult in other.entries:
            counts[k] = counts.get(k, 0) + mult
        return CycleMultiset.from_counts(counts)

    def __str__(self) -> str:
        return ','.join(f"{k}:{mult}" for k, mult in self.entries)

    @classmethod
    def parse(cls, text: str) -> CycleMultiset:
        """'1:1,3:1' -> C_1 + C_3."""
        counts: dict[int, int] = {}
        for item in filter(None, (part.strip() for part in text.split(','))):
            length, _, mult = item.partition(':')
            counts[int(length)] = counts.get(int(length), 0) + int(mult or 1)
        return cls.from_counts(counts)

    def to_json(self) -> list[list[str]]:
        return [[str(k), str(mult)] for k, mult in self.entries]

    @classmethod
    def from_json(cls, data: Iterable[Iterable[str]]) -> CycleMultiset:
        counts: dict[int, int] = {}
        for length, mult in data:
            counts[int(length)] = counts.get(int(length), 0) + int(mult)
        return cls.from_counts(counts)


# The graph of the identity on a zero-dimensional space: one loop
UNIT = CycleMultiset(((1, 1),))


@dataclass(frozen=True, order=True)
class BlockSpec:
    """Degree t of the irreducible f, its order m, and the exponent s of f^s."""
    t: int
    m: int
    s: int

    def __post_init__(self):
        if self.t < 1 or self.m < 1 or self.s < 1:
            raise ValueError(f"block fields must be positive: {self}")

    @property
    def dimension(self) -> int:
        return self.t * self.s


@dataclass(frozen=True)
class ProductForm:
    """Factors (k, alpha) of (C_1 + alpha_1 C_k1) x (C_1 + alpha_2 C_k2) x ..., k strictly increasing."""
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        ks = [k for k, _ in self.factors]
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValueError(f"factor lengths must be strictly increasing: {ks}")
        for k, alpha in self.factors:
            if k < 1 or alpha < 1:
                raise ValueError(f"invalid factor ({k}, {alpha})")

    @classmethod
    def of(cls, factors: Iterable[Iterable[int]]) -> ProductForm:
        return cls(tuple((int(k), int(a)) for k, a in factors))

    @classmethod
    def parse(cls, text: str) -> ProductForm:
        """'2:1,3:1' -> (C_1 + C_2) x (C_1 + C_3)."""
        pairs = []
        for item in filter(None, (part.strip() for part in text.split(','))):
            k, _, alpha = item.partition(':')
            pairs.append((int(k), int(alpha or 1)))
        return cls(tuple(pairs))

    def __str__(self) -> str:
        return ','.join(f"{k}:{alpha}" for k, alpha in self.factors)

    def to_json(self) -> list[list[str]]:
        return [[str(k), str(alpha)] for k, alpha in self.factors]


# ============================================================================
# Orders
# ============================================================================

def poly_order(f: Poly, ctx: FieldCtx) -> int:
    """
    Least e > 0 with f | x^e - 1, for irreducible f with f(0) != 0.

    Starts from E = q^t - 1 (the order of F_q[x]/f minus zero) and strips
    each prime r from E while x^(E/r) is still 1 mod f.

    Raises NotIrreducible for a reducible f of degree <= 6 (when q^(t//2)
    is within the irreducible search guard); larger f are not checked.
    """
    f = poly_trim(f)
    if poly_degree(f) < 1:
        raise ValueError("polynomial order needs degree >= 1")
    if f[0] == 0:
        raise NotCoprimeToX("f(0) = 0, so x is not invertible mod f")
    f = poly_monic(f, ctx)
    t = poly_degree(f)
    if t <= MAX_IRREDUCIBLE_DEGREE and ctx.q ** (t // 2) <= MAX_IRREDUCIBLE_SEARCH:
        if not is_irreducible(f, ctx):
            raise NotIrreducible(f"polynomial {f} is reducible over F_{ctx.q}")
    order = ctx.q ** t - 1
    for r, _ in numthy.factor(order):
        while order % r == 0 and poly_mod_pow(X, order // r, f, ctx) == ONE:
            order //= r
    return order


def power_order(m: int, s: int, p: int) -> int:
    """ord(f^s) = m times the least power of p that is >= s."""
    if m < 1 or s < 1:
        raise ValueError(f"power_order needs m, s >= 1, got m={m}, s={s}")
    pk = 1
    while pk < s:
        pk *= p
    return m * pk


# ============================================================================
# Cycle structures
# ============================================================================

def elspas_structure(block: BlockSpec, ctx: FieldCtx) -> CycleMultiset:
    """
    Cycle multiset of x -> T x on a cyclic block with minimal polynomial
    f^s, deg f = t, ord f = m. The zero vector is the single fixed point of
    the bottom layer; layer i (vectors killed by f^i but not f^(i-1))
    splits into cycles of length ord(f^i).
    """
    q, p = ctx.q, ctx.p
    counts = {1: 1}
    for i in range(1, block.s + 1):
        length = power_order(block.m, i, p)
        layer = q ** (block.t * i) - q ** (block.t * (i - 1))
        cycles, rem = divmod(layer, length)
        if rem:
            raise NonIntegralCount(
                f"{layer} vertices do not split into cycles of length {length} for {block} over {ctx}"
            )
        counts[length] = counts.get(length, 0) + cycles
    return CycleMultiset.from_counts(counts)


def tensor(a: CycleMultiset, b: CycleMultiset) -> CycleMultiset:
    """C_m x C_n = gcd(m, n) C_lcm(m, n), extended bilinearly."""
    counts: dict[int, int] = {}
    for m, cm in a.entries:
        for n, cn in b.entries:
            g = math.gcd(m, n)
            length = m // g * n
            counts[length] = counts.get(length, 0) + cm * cn * g
    return CycleMultiset.from_counts(counts)


def tensor_all(parts: Iterable[CycleMultiset]) -> CycleMultiset:
    result = UNIT
    for part in parts:
        result = tensor(result, part)
    return result


def tensor_power(g: CycleMultiset, times: int) -> CycleMultiset:
    return tensor_all([g] * times)


def _factor_cycles(k: int, alpha: int) -> CycleMultiset:
    counts = {1: 1}
    counts[k] = counts.get(k, 0) + alpha
    return CycleMultiset.from_counts(counts)


def product_form_expand(pf: ProductForm) -> CycleMultiset:
    return tensor_all(_factor_cycles(k, alpha) for k, alpha in pf.factors)


def factor_product(g: CycleMultiset) -> ProductForm:
    """
    Recover the unique ProductForm expanding to g by peeling factors off
    from the shortest unexplained cycle length upward.
    """
    partial = UNIT
    factors: list[tuple[int, int]] = []
    previous = 0
    while partial != g:
        if partial.total_vertices >= g.total_vertices:
            raise NotAProduct(f"{g} overshot by the partial product {partial}")
        k = next((length for length in g.lengths if g.count(length) > partial.count(length)), None)
        if k is None:
            raise NotAProduct(f"{g} has fewer cycles than the partial product {partial}")
        if k <= previous:
            raise NotAProduct(f"factor length {k} does not exceed the previous length {previous}")
        weight = sum(e * mult for e, mult in partial.entries if k % e == 0)
        alpha, rem = divmod(g.count(k) - partial.count(k), weight)
        if rem or alpha < 1:
            raise NotAProduct(
                f"cycle count at length {k} needs alpha = {g.count(k) - partial.count(k)}/{weight}"
            )
        factors.append((k, alpha))
        previous = k
        partial = tensor(partial, _factor_cycles(k, alpha))
    return ProductForm(tuple(factors))


def repeated_factor(a: int, q: int, times: int) -> CycleMultiset:
    """
    Closed form of (C_1 + ((q^m - 1)/a) C_a) taken `times` times, m = ord_a q:
    C_1 + ((q^(times*m) - 1)/a) C_a.
    """
    m = numthy.mult_order(q, a)
    return _factor_cycles(a, (q ** (times * m) - 1) // a)
