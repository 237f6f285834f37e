"""Exact integer linear algebra: Smith normal form, lattice solving, kernels.

Everything works on Python ints, so there is no overflow no matter how large
intermediate entries get during elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatchError, NotUnimodularError

Vector = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Dense row-major integer matrix."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatchError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )
        for x in self.entries:
            if isinstance(x, bool) or not isinstance(x, int):
                raise TypeError(f"matrix entries must be int, got {type(x).__name__}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionMismatchError("column count is ambiguous for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatchError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [tuple(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise DimensionMismatchError("column length does not match row count")
        return cls(rows, len(columns), tuple(columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> "IntMatrix":
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, x in enumerate(diag):
            out[i][i] = x
        return cls.from_rows(out, cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    @property
    def shape(self):
        return (self.rows, self.cols)

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return self.entries[j::self.cols] if self.cols else ()

    def tolist(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list:
        return [self.col(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_columns([self.row(i) for i in range(self.rows)], self.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def apply(self, x: Sequence[int]) -> Vector:
        if len(x) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(x)} for a {self.rows}x{self.cols} matrix")
        c = self.cols
        e = self.entries
        return tuple(sum(e[i * c + j] * x[j] for j in range(c)) for i in range(self.rows))

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
            cols = [self.apply(other.col(j)) for j in range(other.cols)]
            return IntMatrix.from_columns(cols, self.rows)
        return self.apply(other)

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionMismatchError(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise DimensionMismatchError("hstack needs equal row counts")
        return IntMatrix.from_columns(self.columns() + other.columns(), self.rows)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise DimensionMismatchError("vstack needs equal column counts")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def block_diag(self, other: "IntMatrix") -> "IntMatrix":
        top = [list(self.row(i)) + [0] * other.cols for i in range(self.rows)]
        bottom = [[0] * self.cols + list(other.row(i)) for i in range(other.rows)]
        return IntMatrix.from_rows(top + bottom, self.cols + other.cols)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "IntMatrix":
        rows, cols = list(rows), list(cols)
        return IntMatrix.from_rows([[self[i, j] for j in cols] for i in rows], len(cols))

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise DimensionMismatchError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.tolist()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __str__(self):
        return str(self.tolist())


def as_matrix(a) -> IntMatrix:
    return a if isinstance(a, IntMatrix) else IntMatrix.from_rows(a)


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Inverse of a square integer matrix with determinant +-1."""
    if m.rows != m.cols:
        raise DimensionMismatchError("inverse of a non-square matrix")
    if abs(m.det()) != 1:
        raise NotUnimodularError(f"matrix {m} has determinant {m.det()}")
    n = m.rows
    aug = [[Fraction(x) for x in m.row(i)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        p = next(i for i in range(k, n) if aug[i][k] != 0)
        aug[k], aug[p] = aug[p], aug[k]
        piv = aug[k][k]
        aug[k] = [x / piv for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k] != 0:
                f = aug[i][k]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[k])]
    out = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    assert all(x.denominator == 1 for r in out for x in r)
    return IntMatrix.from_rows([[int(x) for x in r] for r in out], n)


@dataclass(frozen=True)
class SmithDecomposition:
    """``u @ a @ v == d`` with ``u``, ``v`` unimodular and ``d`` in Smith form."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    @property
    def diagonal(self) -> tuple:
        return tuple(self.d[i, i] for i in range(min(self.d.rows, self.d.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def snf(a: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivot rule: the entry of smallest absolute value in the active block,
    ties broken by lowest row and then lowest column. This makes the returned
    transforms a deterministic function of the input.
    """
    a = as_matrix(a)
    m, n = a.rows, a.cols
    d = a.tolist()
    u = IntMatrix.identity(m).tolist()
    v = IntMatrix.identity(n).tolist()

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for r in d:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = d[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    dirty = dirty or d[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p), None)
            if bad is not None:
                add_row(t, bad, 1)
                continue
            if p < 0:
                d[t] = [-x for x in d[t]]
                u[t] = [-x for x in u[t]]
            break
        if best is None:
            break

    return SmithDecomposition(
        IntMatrix.from_rows(u, m) if m else IntMatrix.zeros(0, 0),
        IntMatrix.from_rows(d, n) if m else IntMatrix.zeros(0, n),
        IntMatrix.from_rows(v, n) if n else IntMatrix.zeros(0, 0),
    )


def solve_in_lattice(a: IntMatrix, b: Sequence[int]) -> Optional[Vector]:
    """Integer solution ``x`` of ``a @ x == b``, or None when there is none."""
    a = as_matrix(a)
    b = tuple(b)
    if len(b) != a.rows:
        raise DimensionMismatchError(f"right-hand side of length {len(b)} for {a.rows} rows")
    dec = snf(a)
    ub = dec.u.apply(b)
    diag = dec.diagonal
    y = [0] * a.cols
    for i, x in enumerate(ub):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if x != 0:
                return None
        else:
            if x % di:
                return None
            y[i] = x // di
    return dec.v.apply(y)


def integer_kernel(a: IntMatrix) -> list:
    """A Z-basis of ``{x : a @ x == 0}``."""
    a = as_matrix(a)
    dec = snf(a)
    return [dec.v.col(j) for j in range(dec.rank, a.cols)]
