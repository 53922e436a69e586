"""
Brute-force ground truth at tiny scale.

Every n x n matrix over F_q is turned into its literal functional graph on
q^n vertices and canonicalized up to digraph isomorphism. Counting distinct
codes reproduces A_q(n) and B_q(n) independently of the census; the same
scan checks the Fitting split of each map.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from rich.console import Console

from .constants import DEFAULT_SEED, MAX_FITTING_N, MAX_GRAPH_VERTICES, MAX_ORACLE_MATRICES, NILPOTENT_SAMPLES_PER_TYPE
from .cyclegraph import CycleMultiset
from .errors import NotNilpotent, TooLarge
from .ffield import FieldCtx, Matrix, MatrixOps, Vector, field_for_q, mat_ops
from .numthy import partitions_list

console = Console(stderr=True)


@dataclass(frozen=True)
class FunctionalGraph:
    """Vertices 0..size-1, succ[v] the image of v."""
    size: int
    succ: tuple[int, ...]

    def __post_init__(self):
        if len(self.succ) != self.size:
            raise ValueError(f"succ has {len(self.succ)} entries for {self.size} vertices")
        if any(not 0 <= w < self.size for w in self.succ):
            raise ValueError("succ maps outside the vertex set")

    @property
    def is_bijective(self) -> bool:
        return len(set(self.succ)) == self.size


@dataclass(frozen=True)
class FittingSplit:
    basis0: tuple[Vector, ...]
    basis1: tuple[Vector, ...]
    nilpotency_index: int


@dataclass
class OracleReport:
    q: int
    n: int
    total_maps: int
    distinct_codes: int
    invertible_distinct_codes: int
    prop1_violations: int = 0
    violations: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            'q': str(self.q),
            'n': self.n,
            'total_maps': str(self.total_maps),
            'distinct_codes': str(self.distinct_codes),
            'invertible_distinct_codes': str(self.invertible_distinct_codes),
            'prop1_violations': self.prop1_violations,
        }


# ============================================================================
# Graphs
# ============================================================================

def build_graph(T: Matrix, ctx: FieldCtx) -> FunctionalGraph:
    """Vertex index = sum v_j q^j (coordinate 0 least significant); succ[v] = index of T v."""
    q, n = ctx.q, T.n
    size = q ** n
    if size > MAX_GRAPH_VERTICES:
        raise TooLarge(f"{size} vertices exceeds the graph guard 2^16")
    idx = np.arange(size, dtype=np.int64)
    coords = [(idx // q ** j) % q for j in range(n)]
    succ = np.zeros(size, dtype=np.int64)
    for i, row in enumerate(T.rows):
        acc = np.zeros(size, dtype=np.int64)
        for j, a in enumerate(row):
            if a:
                acc = ctx.add_arrays(acc, ctx.mul_row(a)[coords[j]])
        succ += acc * q ** i
    return FunctionalGraph(size, tuple(int(w) for w in succ))


def tensor_digraph(g1: FunctionalGraph, g2: FunctionalGraph) -> FunctionalGraph:
    """Product graph, pair (a, b) stored at a * g2.size + b."""
    size = g1.size * g2.size
    if size > MAX_GRAPH_VERTICES:
        raise TooLarge(f"{size} vertices exceeds the graph guard 2^16")
    succ = np.add.outer(np.asarray(g1.succ, dtype=np.int64) * g2.size, np.asarray(g2.succ, dtype=np.int64))
    return FunctionalGraph(size, tuple(int(w) for w in succ.ravel()))


def relabel(g: FunctionalGraph, perm: Sequence[int]) -> FunctionalGraph:
    """The isomorphic graph with vertex v renamed perm[v]."""
    succ = [0] * g.size
    for v, w in enumerate(g.succ):
        succ[perm[v]] = perm[w]
    return FunctionalGraph(g.size, tuple(succ))


def cycle_graph(length: int) -> FunctionalGraph:
    return FunctionalGraph(length, tuple((v + 1) % length for v in range(length)))


def least_rotation(seq: Sequence) -> int:
    """Start index of the lexicographically least rotation (Booth)."""
    s = list(seq) * 2
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def _peel(g: FunctionalGraph) -> tuple[list[int], list[int]]:
    """Kahn peeling: (transient vertices leaves-first, in-degree left over; > 0 exactly on cycles)."""
    indeg = [0] * g.size
    for w in g.succ:
        indeg[w] += 1
    stack = [v for v in range(g.size) if indeg[v] == 0]
    order = []
    while stack:
        v = stack.pop()
        order.append(v)
        w = g.succ[v]
        indeg[w] -= 1
        if indeg[w] == 0:
            stack.append(w)
    return order, indeg


def canonical_code(g: FunctionalGraph) -> str:
    """
    Isomorphism invariant: each in-tree becomes a sorted-children
    parenthesis string, each cycle the least rotation of its tree codes,
    and the graph the sorted concatenation of its component codes.
    """
    order, indeg = _peel(g)
    children: list[list[str]] = [[] for _ in range(g.size)]
    for v in order:
        children[g.succ[v]].append('(' + ''.join(sorted(children[v])) + ')')

    seen = [False] * g.size
    components = []
    for start in range(g.size):
        if indeg[start] == 0 or seen[start]:
            continue
        ring = []
        v = start
        while not seen[v]:
            seen[v] = True
            ring.append('(' + ''.join(sorted(children[v])) + ')')
            v = g.succ[v]
        k = least_rotation(ring)
        components.append('[' + ''.join(ring[k:] + ring[:k]) + ']')
    return ''.join(sorted(components))


def cycle_multiset(g: FunctionalGraph) -> CycleMultiset:
    """Cycle lengths of a bijective graph."""
    if not g.is_bijective:
        raise ValueError("graph is not a permutation")
    seen = [False] * g.size
    counts: dict[int, int] = {}
    for start in range(g.size):
        if seen[start]:
            continue
        length, v = 0, start
        while not seen[v]:
            seen[v] = True
            v = g.succ[v]
            length += 1
        counts[length] = counts.get(length, 0) + 1
    return CycleMultiset.from_counts(counts)


# ============================================================================
# Fitting decomposition
# ============================================================================

def fitting_split(T: Matrix, ctx: FieldCtx) -> FittingSplit:
    """V0 = ker T^n, V1 = im T^n, both in reduced echelon form."""
    n = T.n
    if n > MAX_FITTING_N:
        raise TooLarge(f"fitting split limited to n <= {MAX_FITTING_N}")
    ops = mat_ops(ctx)
    stable = ops.pow(T, n)
    basis0 = ops.kernel_basis(stable)
    basis1 = ops.image_basis(stable)
    index = next(m for m in range(n + 1) if ops.kernel_dim(ops.pow(T, m)) == len(basis0))
    return FittingSplit(tuple(basis0), tuple(basis1), index)


def restrict(T: Matrix, basis: Sequence[Vector], ctx: FieldCtx) -> Matrix:
    """
    Matrix of T on span(basis), basis in reduced echelon form. Column k
    holds the coordinates of T b_k. Raises ValueError if the span is not
    T-invariant.
    """
    ops = mat_ops(ctx)
    pivots = [next(i for i, c in enumerate(b) if c) for b in basis]
    r = len(basis)
    rows = [[0] * r for _ in range(r)]
    for k, b in enumerate(basis):
        image = ops.apply(T, b)
        coords = [image[pc] for pc in pivots]
        rebuilt = [0] * T.n
        for c, vec in zip(coords, basis):
            if c:
                rebuilt = [ctx.add(x, ctx.mul(c, y)) for x, y in zip(rebuilt, vec)]
        if tuple(rebuilt) != tuple(image):
            raise ValueError("subspace is not invariant under T")
        for i, c in enumerate(coords):
            rows[i][k] = c
    return Matrix.of(rows)


def check_fitting(T: Matrix, ctx: FieldCtx) -> list[str]:
    """Violations of the Fitting split for T; empty when everything holds."""
    ops = mat_ops(ctx)
    split = fitting_split(T, ctx)
    problems = []
    if len(split.basis0) + len(split.basis1) != T.n:
        problems.append(f"dimensions {len(split.basis0)} + {len(split.basis1)} != {T.n}")
        return problems
    try:
        t0 = restrict(T, split.basis0, ctx)
        t1 = restrict(T, split.basis1, ctx)
    except ValueError as e:
        problems.append(str(e))
        return problems
    if not ops.is_invertible(t1):
        problems.append("T is not invertible on V1")
    if not ops.is_zero(ops.pow(t0, t0.n)):
        problems.append("T is not nilpotent on V0")
    whole = canonical_code(build_graph(T, ctx))
    split_code = canonical_code(tensor_digraph(build_graph(t0, ctx), build_graph(t1, ctx)))
    if whole != split_code:
        problems.append("graph code differs from the code of the split product graph")
    return problems


def nilpotent_partition(T: Matrix, ctx: FieldCtx) -> tuple[int, ...]:
    """Jordan block lengths of a nilpotent T, weakly decreasing."""
    ops = mat_ops(ctx)
    n = T.n
    if not ops.is_zero(ops.pow(T, n)):
        raise NotNilpotent("T^n != 0")
    kernel_dims = [ops.kernel_dim(ops.pow(T, i)) for i in range(n + 2)]
    # at_least[i] = number of blocks of length >= i
    at_least = [kernel_dims[i] - kernel_dims[i - 1] for i in range(1, n + 2)]
    parts: list[int] = []
    for length in range(n, 0, -1):
        parts.extend([length] * (at_least[length - 1] - at_least[length]))
    return tuple(parts)


# ============================================================================
# Enumeration
# ============================================================================

def matrix_from_index(index: int, q: int, n: int) -> Matrix:
    """Row-major base-q counter; entry (0, 0) is the least significant digit."""
    entries = []
    for _ in range(n * n):
        index, r = divmod(index, q)
        entries.append(r)
    return Matrix.of([entries[i * n:(i + 1) * n] for i in range(n)])


def _check_scan(q: int, n: int) -> FieldCtx:
    ctx = field_for_q(q)
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if q ** (n * n) > MAX_ORACLE_MATRICES:
        raise TooLarge(f"{q}^{n * n} matrices exceeds the oracle guard 2^20")
    return ctx


def _scan_range(q: int, n: int, start: int, stop: int, fitting: bool) -> tuple[set[str], set[str], list[str]]:
    ctx = field_for_q(q)
    codes: set[str] = set()
    invertible: set[str] = set()
    violations: list[str] = []
    for index in range(start, stop):
        T = matrix_from_index(index, q, n)
        g = build_graph(T, ctx)
        code = canonical_code(g)
        codes.add(code)
        if g.is_bijective:
            invertible.add(code)
        if fitting:
            violations.extend(f"matrix #{index}: {p}" for p in check_fitting(T, ctx))
    return codes, invertible, violations


def _chunks(total: int, pieces: int) -> list[tuple[int, int]]:
    step = max(1, -(-total // pieces))
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def scan(q: int, n: int, workers: int = 1, check_fitting: bool = True) -> OracleReport:
    """
    Canonicalize the graph of every n x n matrix over F_q

    Args:
        q: Prime power field size
        n: Dimension; q^(n^2) must stay within the oracle guard
        workers: Process count; matrix indices are split into contiguous ranges
        check_fitting: Also run the Fitting split check on every matrix

    Returns:
        OracleReport with distinct code counts and any Fitting violations
    """
    _check_scan(q, n)
    total = q ** (n * n)
    ranges = _chunks(total, max(1, workers) * 4)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(
                _scan_range,
                [q] * len(ranges), [n] * len(ranges),
                [lo for lo, _ in ranges], [hi for _, hi in ranges],
                [check_fitting] * len(ranges),
            ))
    else:
        parts = [_scan_range(q, n, lo, hi, check_fitting) for lo, hi in ranges]

    codes: set[str] = set()
    invertible: set[str] = set()
    violations: list[str] = []
    for part_codes, part_inv, part_viol in parts:
        codes |= part_codes
        invertible |= part_inv
        violations.extend(part_viol)
    return OracleReport(
        q=q, n=n, total_maps=total,
        distinct_codes=len(codes),
        invertible_distinct_codes=len(invertible),
        prop1_violations=len(violations),
        violations=violations,
    )


def oracle_count_A(q: int, n: int, workers: int = 1) -> int:
    return scan(q, n, workers, check_fitting=False).distinct_codes


def oracle_count_B(q: int, n: int, workers: int = 1) -> int:
    return scan(q, n, workers, check_fitting=False).invertible_distinct_codes


# ============================================================================
# Nilpotent classes
# ============================================================================

def jordan_nilpotent(partition: Iterable[int], ops: MatrixOps) -> Matrix:
    """Block diagonal of nilpotent Jordan blocks (ones on the subdiagonal)."""
    blocks = []
    for size in partition:
        rows = [[0] * size for _ in range(size)]
        for i in range(1, size):
            rows[i][i - 1] = 1
        blocks.append(Matrix.of(rows))
    return ops.block_diag(*blocks)


def inverse(T: Matrix, ctx: FieldCtx) -> Matrix:
    ops = mat_ops(ctx)
    n = T.n
    augmented = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(T.rows)]
    reduced, pivots = ops.rref(augmented)
    if pivots[:n] != list(range(n)) or len(reduced) < n:
        raise ValueError("matrix is singular")
    return Matrix.of([row[n:] for row in reduced])


def _random_invertible(ctx: FieldCtx, n: int, rng: np.random.Generator) -> Matrix:
    ops = mat_ops(ctx)
    while True:
        S = Matrix.of(rng.integers(0, ctx.q, size=(n, n)).tolist())
        if ops.is_invertible(S):
            return S


def nilpotent_classes(q: int, n: int, seed: int = DEFAULT_SEED) -> dict[tuple[int, ...], set[str]]:
    """
    Canonical codes of nilpotent maps grouped by Jordan partition. Every
    matrix is visited when q^(n^2) fits the oracle guard; otherwise each
    Jordan form is joined by seeded random conjugates S J S^-1.
    """
    ctx = field_for_q(q)
    ops = mat_ops(ctx)
    classes: dict[tuple[int, ...], set[str]] = {}

    def record(T: Matrix) -> None:
        classes.setdefault(nilpotent_partition(T, ctx), set()).add(canonical_code(build_graph(T, ctx)))

    if q ** (n * n) <= MAX_ORACLE_MATRICES:
        for index in range(q ** (n * n)):
            T = matrix_from_index(index, q, n)
            if ops.is_zero(ops.pow(T, n)):
                record(T)
        return classes

    rng = np.random.default_rng(seed)
    for part in partitions_list(n):
        J = jordan_nilpotent(part, ops)
        record(J)
        for _ in range(NILPOTENT_SAMPLES_PER_TYPE):
            S = _random_invertible(ctx, n, rng)
            record(ops.mul(ops.mul(S, J), inverse(S, ctx)))
    return classes
