"""
Arithmetic for F_q, polynomials over F_q and square matrices over F_q.

Field elements travel as integer codes: the element with power-basis
coordinates (c_0, ..., c_{d-1}) has code c_0 + c_1*p + ... + c_{d-1}*p^(d-1).
For a prime field the code is just the residue. FieldElement is the
explicit coordinate view of a code.

Polynomials are tuples of codes, low-degree first, with no trailing zeros;
the zero polynomial is the empty tuple. All serializations use the same
low-degree-first order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

from .constants import (
    FIELD_TABLE_LIMIT,
    MAX_EXTENSION_DEGREE,
    MAX_FIELD_SIZE,
    MAX_IRREDUCIBLE_DEGREE,
    MAX_IRREDUCIBLE_SEARCH,
)
from .errors import DimensionMismatch, NonPrime, NotPrimePower, TooLarge, ZeroModulus

Poly = tuple[int, ...]
Vector = tuple[int, ...]

X: Poly = (0, 1)
ONE: Poly = (1,)


def _is_small_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldElement:
    """Coordinates of an element of F_q w.r.t. the power basis of the modulus."""
    coeffs: tuple[int, ...]


@dataclass(frozen=True)
class FieldCtx:
    """
    The field F_q = F_p[x]/(modulus), q = p^d.

    Immutable; the lazily built tables are pure functions of the fields,
    so a context can be shared freely between workers.
    """
    p: int
    d: int
    modulus: Poly

    @property
    def q(self) -> int:
        """Field size p^d"""
        return self.p ** self.d

    def __str__(self) -> str:
        return f"F_{self.q}"

    # -- codes <-> coordinates --

    def digits(self, a: int) -> list[int]:
        """Base-p coordinates of an element code, lowest first"""
        out = []
        for _ in range(self.d):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, digits: Sequence[int]) -> int:
        """Element code of base-p coordinates"""
        code = 0
        for c in reversed(digits):
            code = code * self.p + c
        return code

    def element(self, code: int) -> FieldElement:
        """FieldElement for a code in [0, q)"""
        if not 0 <= code < self.q:
            raise ValueError(f"{code} is not an element code of {self}")
        return FieldElement(tuple(self.digits(code)))

    def code(self, elem: FieldElement) -> int:
        """Integer code of a FieldElement"""
        if len(elem.coeffs) != self.d or any(not 0 <= c < self.p for c in elem.coeffs):
            raise ValueError(f"{elem} is not an element of {self}")
        return self.from_digits(elem.coeffs)

    def elements(self) -> range:
        return range(self.q)

    # -- scalar arithmetic --

    def _slow_add(self, a: int, b: int) -> int:
        return self.from_digits([(x + y) % self.p for x, y in zip(self.digits(a), self.digits(b))])

    def _slow_mul(self, a: int, b: int) -> int:
        p, d = self.p, self.d
        xa, xb = self.digits(a), self.digits(b)
        prod = [0] * (2 * d - 1)
        for i, u in enumerate(xa):
            if u:
                for j, v in enumerate(xb):
                    prod[i + j] = (prod[i + j] + u * v) % p
        # reduce by the monic modulus, top degree down
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                for j in range(d):
                    prod[k - d + j] = (prod[k - d + j] - c * self.modulus[j]) % p
                prod[k] = 0
        return self.from_digits(prod[:d])

    @cached_property
    def _tables(self) -> tuple[list[list[int]], list[list[int]]] | None:
        if self.q > FIELD_TABLE_LIMIT or self.d == 1:
            return None
        rng = range(self.q)
        add = [[self._slow_add(a, b) for b in rng] for a in rng]
        mul = [[self._slow_mul(a, b) for b in rng] for a in rng]
        return add, mul

    def add(self, a: int, b: int) -> int:
        """Sum of two element codes"""
        if self.p == 2:
            return a ^ b
        if self.d == 1:
            return (a + b) % self.p
        tables = self._tables
        if tables is not None:
            return tables[0][a][b]
        return self._slow_add(a, b)

    def neg(self, a: int) -> int:
        """Additive inverse"""
        if self.p == 2:
            return a
        return self.from_digits([(-c) % self.p for c in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        """Product of two element codes"""
        if self.d == 1:
            return (a * b) % self.p
        tables = self._tables
        if tables is not None:
            return tables[1][a][b]
        return self._slow_mul(a, b)

    def pow(self, a: int, e: int) -> int:
        """a^e by square-and-multiply"""
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        """Multiplicative inverse; ZeroDivisionError for 0"""
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        if self.d == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.q - 2)

    # -- vectorised helpers (numpy) used by the oracle --

    def mul_row(self, a: int) -> np.ndarray:
        """Array of a*x for every code x."""
        row = self._mul_rows.get(a)
        if row is None:
            row = np.fromiter((self.mul(a, x) for x in range(self.q)), dtype=np.int64, count=self.q)
            self._mul_rows[a] = row
        return row

    @cached_property
    def _mul_rows(self) -> dict[int, np.ndarray]:
        return {}

    def add_arrays(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Elementwise sum of two arrays of element codes"""
        if self.p == 2:
            return np.bitwise_xor(x, y)
        if self.d == 1:
            return (x + y) % self.p
        out = np.zeros_like(x)
        scale = 1
        for _ in range(self.d):
            out += ((x // scale % self.p + y // scale % self.p) % self.p) * scale
            scale *= self.p
        return out


# ============================================================================
# Field construction
# ============================================================================

def _check_field_guard(p: int, d: int) -> None:
    if not _is_small_prime(p):
        raise NonPrime(f"{p} is not prime")
    if d < 1:
        raise ValueError(f"extension degree must be positive, got {d}")
    if d > MAX_EXTENSION_DEGREE or p ** d > MAX_FIELD_SIZE:
        raise TooLarge(f"F_{p}^{d} exceeds the field guard (d <= {MAX_EXTENSION_DEGREE}, q <= 2^20)")


@lru_cache(maxsize=None)
def field_ctx(p: int, d: int = 1) -> FieldCtx:
    """
    Build F_{p^d}. The modulus is the smallest monic irreducible of degree d
    over F_p, polynomials ordered by their code sum c_i p^i (equivalently
    lexicographically on the coefficients read from the top degree down).
    """
    _check_field_guard(p, d)
    if d == 1:
        return FieldCtx(p, 1, X)
    prime = field_ctx(p, 1)
    for f in monic_polys(prime, d):
        if is_irreducible(f, prime):
            return FieldCtx(p, d, f)
    raise AssertionError(f"no irreducible of degree {d} over F_{p}")  # pragma: no cover


def prime_power(q: int) -> tuple[int, int]:
    """Decompose q = p^d, raising NotPrimePower otherwise."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    d, rest = 0, q
    while rest % p == 0:
        rest //= p
        d += 1
    if rest != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return p, d


def field_for_q(q: int) -> FieldCtx:
    """F_q for a prime power q, via field_ctx(p, d)."""
    if q > MAX_FIELD_SIZE:
        raise TooLarge(f"q = {q} exceeds the field guard 2^20")
    p, d = prime_power(q)
    return field_ctx(p, d)


# ============================================================================
# Polynomials
# ============================================================================

def poly_trim(coeffs: Sequence[int]) -> Poly:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


def poly_degree(f: Poly) -> int:
    return len(f) - 1


def poly_add(a: Poly, b: Poly, ctx: FieldCtx) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = ctx.add(out[i], c)
    return poly_trim(out)


def poly_scale(a: Poly, c: int, ctx: FieldCtx) -> Poly:
    return poly_trim([ctx.mul(c, x) for x in a])


def poly_mul(a: Poly, b: Poly, ctx: FieldCtx) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                if v:
                    out[i + j] = ctx.add(out[i + j], ctx.mul(u, v))
    return poly_trim(out)


def poly_divmod(a: Poly, b: Poly, ctx: FieldCtx) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroModulus("division by the zero polynomial")
    rem = list(a)
    db = len(b) - 1
    inv_lead = ctx.inv(b[-1])
    quot = [0] * max(len(a) - db, 0)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if not c:
            continue
        factor = ctx.mul(c, inv_lead)
        quot[k - db] = factor
        for j, v in enumerate(b):
            rem[k - db + j] = ctx.sub(rem[k - db + j], ctx.mul(factor, v))
    return poly_trim(quot), poly_trim(rem[:db])


def poly_mod(a: Poly, m: Poly, ctx: FieldCtx) -> Poly:
    return poly_divmod(a, m, ctx)[1]


def poly_pow(base: Poly, e: int, ctx: FieldCtx) -> Poly:
    result: Poly = ONE
    while e:
        if e & 1:
            result = poly_mul(result, base, ctx)
        base = poly_mul(base, base, ctx)
        e >>= 1
    return result


def poly_mod_pow(base: Poly, e: int, modpoly: Poly, ctx: FieldCtx) -> Poly:
    """base^e mod modpoly by square-and-multiply."""
    if len(modpoly) < 2:
        raise ZeroModulus(f"modulus must have degree >= 1, got {modpoly}")
    result = poly_mod(ONE, modpoly, ctx)
    base = poly_mod(base, modpoly, ctx)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, ctx), modpoly, ctx)
        base = poly_mod(poly_mul(base, base, ctx), modpoly, ctx)
        e >>= 1
    return result


def poly_monic(f: Poly, ctx: FieldCtx) -> Poly:
    if not f:
        return f
    return poly_scale(f, ctx.inv(f[-1]), ctx)


def poly_sort_key(f: Poly, q: int) -> int:
    """Sum c_i q^i: the ordering used for moduli and irreducible lists."""
    key = 0
    for c in reversed(f):
        key = key * q + c
    return key


def monic_polys(ctx: FieldCtx, t: int) -> Iterator[Poly]:
    """All monic polynomials of degree t, in poly_sort_key order."""
    q = ctx.q
    for code in range(q ** t):
        lower = []
        for _ in range(t):
            code, r = divmod(code, q)
            lower.append(r)
        yield tuple(lower) + (1,)


@lru_cache(maxsize=None)
def _small_irreducibles(ctx: FieldCtx, k: int) -> tuple[Poly, ...]:
    return tuple(f for f in monic_polys(ctx, k) if is_irreducible(f, ctx))


def is_irreducible(f: Poly, ctx: FieldCtx) -> bool:
    """Trial division by every monic irreducible of degree <= deg(f)/2."""
    deg = poly_degree(f)
    if deg < 1:
        return False
    for k in range(1, deg // 2 + 1):
        for g in _small_irreducibles(ctx, k):
            if not poly_mod(f, g, ctx):
                return False
    return True


def irreducibles(ctx: FieldCtx, t: int) -> list[Poly]:
    """All monic irreducibles of degree t over F_q, sorted."""
    if t < 1:
        raise ValueError(f"degree must be positive, got {t}")
    if t > MAX_IRREDUCIBLE_DEGREE or ctx.q ** t > MAX_IRREDUCIBLE_SEARCH:
        raise TooLarge(f"irreducible search over {ctx} in degree {t} exceeds the guard")
    return list(_small_irreducibles(ctx, t))


# -- text formats --

def _format_coeff(c: int, ctx: FieldCtx) -> str:
    if ctx.p > 36:
        return str(c)
    if c == 0:
        return '0'
    digits = []
    while c:
        c, r = divmod(c, ctx.p)
        digits.append('0123456789abcdefghijklmnopqrstuvwxyz'[r])
    return ''.join(reversed(digits))


def _parse_coeff(text: str, ctx: FieldCtx) -> int:
    text = text.strip()
    value = int(text) if ctx.p > 36 else int(text, ctx.p)
    if not 0 <= value < ctx.q:
        raise ValueError(f"coefficient {text!r} is not an element of {ctx}")
    return value


def parse_poly(text: str, ctx: FieldCtx) -> Poly:
    """'1,1,1' -> x^2+x+1; each coefficient is its code written in base p."""
    text = text.strip()
    if not text:
        return ()
    return poly_trim([_parse_coeff(part, ctx) for part in text.split(',')])


def format_poly(f: Poly, ctx: FieldCtx) -> str:
    return ','.join(_format_coeff(c, ctx) for c in f)


def poly_to_str(f: Poly, ctx: FieldCtx) -> str:
    """Human readable form, e.g. x^3+x+1."""
    if not f:
        return '0'
    terms = []
    for k in range(len(f) - 1, -1, -1):
        c = f[k]
        if not c:
            continue
        coeff = '' if c == 1 and k else _format_coeff(c, ctx)
        if ctx.d > 1 and coeff:
            coeff = f"[{coeff}]"
        power = '' if k == 0 else ('x' if k == 1 else f"x^{k}")
        terms.append(f"{coeff}{power}" if coeff or power else '1')
    return '+'.join(terms)


# ============================================================================
# Matrices
# ============================================================================

@dataclass(frozen=True)
class Matrix:
    """Square matrix over F_q, entries as element codes, acting on column vectors."""
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if any(len(r) != len(self.rows) for r in self.rows):
            raise DimensionMismatch(f"matrix is not square: {len(self.rows)} rows of lengths {[len(r) for r in self.rows]}")

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> Matrix:
        return cls(tuple(tuple(r) for r in rows))

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)


def parse_matrix(text: str, ctx: FieldCtx) -> Matrix:
    """'1,0;0,1' -> identity. Rows separated by ';'."""
    rows = [[_parse_coeff(c, ctx) for c in row.split(',')] for row in text.strip().split(';')]
    return Matrix.of(rows)


def format_matrix(m: Matrix, ctx: FieldCtx) -> str:
    return ';'.join(','.join(_format_coeff(c, ctx) for c in row) for row in m.rows)


def companion(f: Poly, ctx: FieldCtx) -> Matrix:
    """Companion matrix of monic f (ones on the subdiagonal, -coeffs in the last column)."""
    f = poly_monic(f, ctx)
    n = poly_degree(f)
    if n < 1:
        raise ValueError("companion matrix needs degree >= 1")
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = 1
    for i in range(n):
        rows[i][n - 1] = ctx.neg(f[i])
    return Matrix.of(rows)


class MatrixOps:
    """Matrix operations bound to one field."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx

    def identity(self, n: int) -> Matrix:
        return Matrix.of([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def zero(self, n: int) -> Matrix:
        """The n x n zero matrix"""
        return Matrix.of([[0] * n for _ in range(n)])

    def is_zero(self, a: Matrix) -> bool:
        return all(c == 0 for row in a.rows for c in row)

    def mul(self, a: Matrix, b: Matrix) -> Matrix:
        """Matrix product a b"""
        if a.n != b.n:
            raise DimensionMismatch(f"cannot multiply {a.n}x{a.n} by {b.n}x{b.n}")
        F = self.ctx
        cols = [b.column(j) for j in range(b.n)]
        rows = []
        for row in a.rows:
            out = []
            for col in cols:
                acc = 0
                for x, y in zip(row, col):
                    if x and y:
                        acc = F.add(acc, F.mul(x, y))
                out.append(acc)
            rows.append(out)
        return Matrix.of(rows)

    def pow(self, a: Matrix, e: int) -> Matrix:
        """a^e by repeated squaring; a^0 is the identity"""
        result = self.identity(a.n)
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def apply(self, a: Matrix, v: Sequence[int]) -> Vector:
        """The vector a v"""
        if len(v) != a.n:
            raise DimensionMismatch(f"vector of length {len(v)} for a {a.n}x{a.n} matrix")
        F = self.ctx
        out = []
        for row in a.rows:
            acc = 0
            for x, y in zip(row, v):
                if x and y:
                    acc = F.add(acc, F.mul(x, y))
            out.append(acc)
        return tuple(out)

    def rref(self, rows: Sequence[Sequence[int]]) -> tuple[list[Vector], list[int]]:
        """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
        F = self.ctx
        m = [list(r) for r in rows]
        ncols = len(m[0]) if m else 0
        pivots: list[int] = []
        r = 0
        for c in range(ncols):
            if r == len(m):
                break
            pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
            if pivot is None:
                continue
            m[r], m[pivot] = m[pivot], m[r]
            inv = F.inv(m[r][c])
            m[r] = [F.mul(inv, x) for x in m[r]]
            for i in range(len(m)):
                if i != r and m[i][c]:
                    factor = m[i][c]
                    m[i] = [F.sub(x, F.mul(factor, y)) for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return [tuple(row) for row in m[:r]], pivots

    def rank(self, a: Matrix) -> int:
        """Rank via row reduction"""
        return len(self.rref(a.rows)[0])

    def is_invertible(self, a: Matrix) -> bool:
        return self.rank(a) == a.n

    def kernel_basis(self, a: Matrix) -> list[Vector]:
        """Basis of {v : a v = 0}, in reduced echelon form."""
        F = self.ctx
        reduced, pivots = self.rref(a.rows)
        free = [c for c in range(a.n) if c not in pivots]
        basis = []
        for f in free:
            v = [0] * a.n
            v[f] = 1
            for row, pc in zip(reduced, pivots):
                v[pc] = F.neg(row[f])
            basis.append(v)
        return self.rref(basis)[0] if basis else []

    def kernel_dim(self, a: Matrix) -> int:
        """dim ker a = n - rank a"""
        return a.n - self.rank(a)

    def image_basis(self, a: Matrix) -> list[Vector]:
        """Basis of the column space, in reduced echelon form."""
        columns = [a.column(j) for j in range(a.n)]
        return self.rref(columns)[0]

    def block_diag(self, *blocks: Matrix) -> Matrix:
        """Block diagonal matrix with the blocks in the given order"""
        n = sum(b.n for b in blocks)
        rows = [[0] * n for _ in range(n)]
        offset = 0
        for b in blocks:
            for i, row in enumerate(b.rows):
                rows[offset + i][offset:offset + b.n] = row
            offset += b.n
        return Matrix.of(rows)


def mat_ops(ctx: FieldCtx) -> MatrixOps:
    return MatrixOps(ctx)
