"""Exact graded linear algebra over the rationals.

Everything downstream computes through this module: dense matrices of
`fractions.Fraction`, deterministic echelon forms, graded vector spaces
keyed by integer degree, graded maps, and degreewise homology.  No floats,
no rounding, ever.  All echelon choices (pivoting, free-variable order,
normalisation) are fixed so that every derived basis is reproducible
bit-for-bit across runs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

Scalar = Fraction
Vector = list  # list[Fraction]
Matrix = list  # list[list[Fraction]], rows x cols


class CompositionNotZero(Exception):
    """Two maps expected to compose to zero do not."""


class LinearSolveFailed(Exception):
    """An inhomogeneous linear system expected to be solvable is not."""


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def make_matrix(rows: int, cols: int, entries=None) -> Matrix:
    if entries is None:
        return [[Fraction(0)] * cols for _ in range(rows)]
    m = [[frac(x) for x in row] for row in entries]
    assert len(m) == rows and all(len(row) == cols for row in m)
    return m


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def copy_matrix(m: Matrix) -> Matrix:
    return [row[:] for row in m]


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, m: Matrix) -> Matrix:
    c = frac(c)
    return [[c * x for x in row] for row in m]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    # rows(a) x cols(b); cols(a) must equal rows(b)
    if a and b:
        assert len(a[0]) == len(b), "matrix dimensions do not compose"
    rows, inner = len(a), len(b)
    cols = len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            c = ai[k]
            if c:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        oi[j] += c * bk[j]
    return out


def mat_vec(a: Matrix, v: Vector) -> Vector:
    assert not a or len(a[0]) == len(v)
    return [sum((c * x for c, x in zip(row, v) if c), Fraction(0)) for row in a]


def transpose(a: Matrix) -> Matrix:
    if not a:
        return []
    return [[a[i][j] for i in range(len(a))] for j in range(len(a[0]))]


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def vec_add(u: Vector, v: Vector) -> Vector:
    return [x + y for x, y in zip(u, v)]


def vec_sub(u: Vector, v: Vector) -> Vector:
    return [x - y for x, y in zip(u, v)]


def vec_scale(c, v: Vector) -> Vector:
    c = frac(c)
    return [c * x for x in v]


def is_zero_vector(v: Vector) -> bool:
    return all(x == 0 for x in v)


def rank(m: Matrix) -> int:
    """Exact rank by integer fraction-free (Bareiss) elimination.

    Rows are scaled to integers first (scaling does not change rank); the
    Bareiss interior divisions are then exact in ZZ, which keeps the
    intermediate entries from swelling the way naive integer elimination
    would.
    """
    if not m or not m[0]:
        return 0
    a = []
    for row in m:
        den = lcm(*(x.denominator for x in row)) if row else 1
        a.append([int(x * den) for x in row])
    n_rows, n_cols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(n_cols):
        piv = None
        for i in range(r, n_rows):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, n_rows):
            for j in range(c + 1, n_cols):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == n_rows:
            break
    return r


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and its pivot columns.

    Pivoting is first-nonzero scanning rows top-down, columns left-right,
    so the output is the canonical RREF.
    """
    a = copy_matrix(m)
    if not a or not a[0]:
        return a, []
    n_rows, n_cols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = None
        for i in range(r, n_rows):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return a, pivots


def kernel_basis(m: Matrix, cols: int | None = None) -> list[Vector]:
    """Deterministic basis of the right null space.

    One vector per free column, free columns in increasing order, each
    vector scaled so its first nonzero entry is +1.
    """
    if cols is None:
        cols = len(m[0]) if m else 0
    if cols == 0:
        return []
    if not m:
        return [unit_vector(cols, j) for j in range(cols)]
    red, pivots = rref(m)
    pivot_set = set(pivots)
    free = [j for j in range(cols) if j not in pivot_set]
    basis = []
    for j in free:
        v = [Fraction(0)] * cols
        v[j] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][j]
        for x in v:
            if x != 0:
                if x != 1:
                    v = [y / x for y in v]
                break
        basis.append(v)
    return basis


def unit_vector(n: int, j: int) -> Vector:
    v = [Fraction(0)] * n
    v[j] = Fraction(1)
    return v


def solve(a: Matrix, b: Vector) -> Vector | None:
    """One exact solution of a x = b with free variables set to 0, or None."""
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    assert len(b) == n_rows
    aug = [row[:] + [frac(y)] for row, y in zip(a, b)]
    if not aug:
        return [Fraction(0)] * n_cols
    red, pivots = rref(aug)
    if n_cols in pivots:
        return None
    x = [Fraction(0)] * n_cols
    for r, p in enumerate(pivots):
        x[p] = red[r][n_cols]
    return x


class Subspace:
    """A subspace of QQ^n kept in reduced row-echelon form.

    Insertion order does not affect the stored basis (RREF is canonical),
    which is what makes downstream complement choices reproducible.
    """

    def __init__(self, ambient: int, vectors=()):
        self.ambient = ambient
        self.rows: list[Vector] = []
        self.pivots: list[int] = []
        for v in vectors:
            self.add(v)

    def add(self, v: Vector) -> bool:
        """Insert a vector; return True if the dimension grew."""
        assert len(v) == self.ambient
        v = v[:]
        for row, p in zip(self.rows, self.pivots):
            if v[p] != 0:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        piv = None
        for j, x in enumerate(v):
            if x != 0:
                piv = j
                break
        if piv is None:
            return False
        inv = 1 / v[piv]
        v = [x * inv for x in v]
        for row in self.rows:
            if row[piv] != 0:
                f = row[piv]
                row[:] = [x - f * y for x, y in zip(row, v)]
        at = 0
        while at < len(self.pivots) and self.pivots[at] < piv:
            at += 1
        self.rows.insert(at, v)
        self.pivots.insert(at, piv)
        return True

    def contains(self, v: Vector) -> bool:
        assert len(v) == self.ambient
        v = v[:]
        for row, p in zip(self.rows, self.pivots):
            if v[p] != 0:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        return is_zero_vector(v)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> list[Vector]:
        return [row[:] for row in self.rows]

    def complement_in(self, vectors: list[Vector]) -> list[Vector]:
        """Vectors from the list extending this subspace, greedily in order."""
        probe = Subspace(self.ambient, self.basis())
        out = []
        for v in vectors:
            if probe.add(v):
                out.append(v[:])
        return out


def coordinates(basis: list[Vector], v: Vector) -> Vector | None:
    """Coordinates of v in the given (independent) list, or None."""
    if not basis:
        return [] if is_zero_vector(v) else None
    cols = [[b[i] for b in basis] for i in range(len(v))]
    return solve(cols, v)


@dataclass(frozen=True)
class Window:
    """An inclusive degree range with a certified sub-range.

    Stored data covers [lo, hi]; results are promised exact only on
    [guaranteed_lo, guaranteed_hi].
    """

    lo: int
    hi: int
    guaranteed_lo: int | None = None
    guaranteed_hi: int | None = None

    def __post_init__(self):
        glo = self.lo if self.guaranteed_lo is None else self.guaranteed_lo
        ghi = self.hi if self.guaranteed_hi is None else self.guaranteed_hi
        object.__setattr__(self, "guaranteed_lo", glo)
        object.__setattr__(self, "guaranteed_hi", ghi)
        if not (self.lo <= glo <= ghi <= self.hi):
            raise ValueError(f"bad window {self.lo}..{self.hi} guaranteed {glo}..{ghi}")

    def shift(self, a: int) -> "Window":
        return Window(self.lo + a, self.hi + a,
                      self.guaranteed_lo + a, self.guaranteed_hi + a)

    def shrink(self, below: int = 0, above: int = 0) -> "Window":
        return Window(self.lo, self.hi,
                      min(self.guaranteed_lo + below, self.guaranteed_hi),
                      max(self.guaranteed_hi - above, self.guaranteed_lo))

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def guaranteed(self):
        return range(self.guaranteed_lo, self.guaranteed_hi + 1)

    def __str__(self):
        return f"[{self.lo}..{self.hi}] guaranteed [{self.guaranteed_lo}..{self.guaranteed_hi}]"


@dataclass
class GradedVS:
    """Graded vector space: degree -> finite dimension, optional labels."""

    dims: dict
    labels: dict | None = None

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def degrees(self) -> list[int]:
        return sorted(n for n, d in self.dims.items() if d)

    def total_dim(self) -> int:
        return sum(d for d in self.dims.values())

    def label(self, n: int, i: int) -> str:
        if self.labels and n in self.labels:
            return self.labels[n][i]
        return f"e{n}_{i}"

    def degree_labels(self, n: int) -> list[str]:
        return [self.label(n, i) for i in range(self.dim(n))]

    def same_dims(self, other: "GradedVS") -> bool:
        keys = set(self.dims) | set(other.dims)
        return all(self.dim(n) == other.dim(n) for n in keys)


@dataclass
class GradedMap:
    """Degree-homogeneous linear map between graded vector spaces.

    The block at n sends the source piece in degree n to the target piece in
    degree n + degree; absent blocks are zero.
    """

    source: GradedVS
    target: GradedVS
    degree: int
    blocks: dict = field(default_factory=dict)

    def __post_init__(self):
        for n, m in self.blocks.items():
            r, c = self.target.dim(n + self.degree), self.source.dim(n)
            if len(m) != r or (m and len(m[0]) != c) or (not m and r):
                raise ValueError(f"block at {n} is {len(m)}x? want {r}x{c}")

    def block(self, n: int) -> Matrix:
        if n in self.blocks:
            return self.blocks[n]
        return zeros(self.target.dim(n + self.degree), self.source.dim(n))

    def block_into(self, n: int) -> Matrix:
        return self.block(n - self.degree)

    def apply(self, n: int, v: Vector) -> Vector:
        return mat_vec(self.block(n), v)

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self after other."""
        deg = self.degree + other.degree
        blocks = {}
        for n in set(other.blocks) | {m - other.degree for m in self.blocks}:
            b = mat_mul(self.block(n + other.degree), other.block(n))
            if not is_zero_matrix(b):
                blocks[n] = b
        return GradedMap(other.source, self.target, deg, blocks)

    def add(self, other: "GradedMap") -> "GradedMap":
        assert self.degree == other.degree
        blocks = {}
        for n in set(self.blocks) | set(other.blocks):
            b = mat_add(self.block(n), other.block(n))
            if not is_zero_matrix(b):
                blocks[n] = b
        return GradedMap(self.source, self.target, self.degree, blocks)

    def scale(self, c) -> "GradedMap":
        return GradedMap(self.source, self.target, self.degree,
                         {n: mat_scale(c, b) for n, b in self.blocks.items()})

    def is_zero_on(self, degrees) -> bool:
        return all(is_zero_matrix(self.block(n)) for n in degrees)


@dataclass
class HomologyPiece:
    """Homology at one degree: dimension plus representative cycles."""

    degree: int
    dim: int
    representatives: list
    cycle_basis: list
    boundary_basis: list


def homology_at(d_in: GradedMap, d_out: GradedMap, n: int) -> HomologyPiece:
    """Homology of (d_in into degree n, d_out out of degree n).

    Raises CompositionNotZero unless d_out . d_in = 0 at n.  Representatives
    are kernel-basis vectors completing the boundary subspace, taken in
    kernel-basis order, so the answer is deterministic.
    """
    into = d_in.block_into(n)
    out = d_out.block(n)
    if into and out and not is_zero_matrix(mat_mul(out, into)):
        raise CompositionNotZero(f"d.d != 0 entering degree {n}")
    amb = len(out[0]) if out else (len(into) if into else 0)
    cycles = kernel_basis(out, cols=amb)
    boundaries = []
    span = Subspace(amb)
    cols = transpose(into)
    for col in cols:
        if span.add(col):
            boundaries.append(col)
    reps = span.complement_in(cycles)
    return HomologyPiece(n, len(reps), reps, cycles, boundaries)


class LinearSystem:
    """Sparse exact linear system over QQ keyed by hashable variable names.

    Variables are created on first use; their order is insertion order,
    which keeps kernel bases deterministic.
    """

    def __init__(self):
        self._vars: dict = {}
        self._names: list = []
        self.rows: list[dict] = []
        self.rhs: list[Fraction] = []

    def var(self, key) -> int:
        if key not in self._vars:
            self._vars[key] = len(self._names)
            self._names.append(key)
        return self._vars[key]

    @property
    def num_vars(self) -> int:
        return len(self._names)

    def add_equation(self, coeffs: dict, rhs=0):
        row = {}
        for key, c in coeffs.items():
            c = frac(c)
            if c:
                row[self.var(key)] = row.get(self.var(key), Fraction(0)) + c
        self.rows.append(row)
        self.rhs.append(frac(rhs))

    def _dense(self) -> Matrix:
        n = self.num_vars
        return [[row.get(j, Fraction(0)) for j in range(n)] for row in self.rows]

    def solve(self) -> dict | None:
        """A particular solution as {key: value}, or None."""
        if not self.rows:
            return {name: Fraction(0) for name in self._names}
        sol = solve(self._dense(), self.rhs)
        if sol is None:
            return None
        return {name: sol[i] for i, name in enumerate(self._names)}

    def kernel(self) -> list[dict]:
        """Basis of the homogeneous solution space as dicts."""
        vecs = kernel_basis(self._dense(), cols=self.num_vars)
        return [{name: v[i] for i, name in enumerate(self._names) if v[i]}
                for v in vecs]

    def solution_dim(self) -> int:
        assert all(x == 0 for x in self.rhs), "solution_dim is for homogeneous systems"
        return self.num_vars - rank(self._dense())
