"""Exact rational linear algebra and the subspace lattice.

Matrices hold :class:`fractions.Fraction` entries. Elimination is done on
integer rows (each row cleared of denominators first) with fraction-free
Bareiss updates, so intermediate values are minors of the input and never
need gcd reductions until the final normalization.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

Vector = tuple  # tuple of Fraction


class DimensionError(ValueError):
    """Raised when operands have incompatible shapes or ambient dimensions."""


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic; pass a string or Fraction")
    return Fraction(x)


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class RationalMatrix:
    """Immutable dense matrix of exact rationals (row-major)."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(to_fraction(x) for x in row) for row in data)
        if cols is None:
            if not rows:
                raise DimensionError("cannot infer column count of an empty matrix; pass cols")
            cols = len(rows[0])
        for row in rows:
            if len(row) != cols:
                raise DimensionError("ragged rows")
        self._data = rows
        self.rows = len(rows)
        self.cols = cols
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple, cols: int) -> "RationalMatrix":
        m = object.__new__(cls)
        m._data = rows
        m.rows = len(rows)
        m.cols = cols
        m._hash = None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        z = Fraction(0)
        return cls._raw(tuple((z,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        one, z = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else z for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RationalMatrix":
        if not columns:
            return cls.zeros(rows, 0)
        return cls(zip(*columns), cols=len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> Vector:
        return self._data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def __iter__(self):
        return iter(self._data)

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.cols == other.cols and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"

    def T(self) -> "RationalMatrix":
        if self.rows == 0:
            return RationalMatrix.zeros(self.cols, 0)
        return RationalMatrix._raw(tuple(zip(*self._data)), self.rows)

    transpose = T

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return RationalMatrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return RationalMatrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols
        )

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix._raw(tuple(tuple(-a for a in r) for r in self._data), self.cols)

    def scale(self, c) -> "RationalMatrix":
        c = to_fraction(c)
        return RationalMatrix._raw(tuple(tuple(c * a for a in r) for r in self._data), self.cols)

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = other.T()._data if other.rows else tuple(() for _ in range(other.cols))
            return RationalMatrix._raw(
                tuple(tuple(_dot(r, c) for c in ocols) for r in self._data), other.cols
            )
        vec = tuple(other)
        if len(vec) != self.cols:
            raise DimensionError(f"cannot apply {self.shape} matrix to vector of length {len(vec)}")
        return tuple(_dot(r, vec) for r in self._data)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def trace(self) -> Fraction:
        return sum((self._data[i][i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def inverse(self) -> "RationalMatrix":
        if not self.is_square():
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        aug = RationalMatrix._raw(
            tuple(r + tuple(Fraction(int(i == j)) for j in range(n)) for i, r in enumerate(self._data)), 2 * n
        )
        red, pivots = rref(aug)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise ZeroDivisionError("matrix is singular")
        return RationalMatrix._raw(tuple(r[n:] for r in red._data[:n]), n)

    def det(self) -> Fraction:
        if not self.is_square():
            raise DimensionError("determinant of a non-square matrix")
        return determinant(self)

    def to_json(self) -> list[list[str]]:
        return [[frac_str(x) for x in r] for r in self._data]

    @classmethod
    def from_json(cls, obj, cols: int | None = None) -> "RationalMatrix":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not obj:
            return cls.zeros(0, cols or 0)
        return cls([[Fraction(x) for x in r] for r in obj])

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self._data], dtype=float).reshape(self.rows, self.cols)


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    s = Fraction(0)
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def matrix(data) -> RationalMatrix:
    """Build a RationalMatrix from nested sequences of ints/Fractions/strings."""
    return data if isinstance(data, RationalMatrix) else RationalMatrix(data)


# ---------------------------------------------------------------------------
# integer kernels
# ---------------------------------------------------------------------------

def integer_row(row: Sequence) -> list[int]:
    """Scale a rational row to a primitive integer row with the same span."""
    fr = [to_fraction(x) for x in row]
    den = reduce(lcm, (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, ints, 0)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def bareiss_echelon(rows: list[list[int]], ncols: int, stop_at: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form of an integer matrix.

    ``rows`` is consumed. Returns the nonzero echelon rows and their pivot
    columns. ``stop_at`` ends elimination once that many pivots are found.
    """
    m = len(rows)
    r = 0
    prev = 1
    pivots: list[int] = []
    for c in range(ncols):
        if r == m or (stop_at is not None and r >= stop_at):
            break
        best = -1
        best_abs = 0
        for i in range(r, m):
            v = rows[i][c]
            if v and (best < 0 or abs(v) < best_abs):
                best, best_abs = i, abs(v)
                if best_abs == 1:
                    break
        if best < 0:
            continue
        if best != r:
            rows[r], rows[best] = rows[best], rows[r]
        prow = rows[r]
        piv = prow[c]
        tail = prow[c:]
        for i in range(r + 1, m):
            row = rows[i]
            a = row[c]
            if a:
                new_tail = [(piv * x - a * y) // prev for x, y in zip(row[c:], tail)]
            elif piv == prev:
                continue
            else:
                new_tail = [(piv * x) // prev for x in row[c:]]
            row[c:] = new_tail
        prev = piv
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def int_rank(rows: list[list[int]], ncols: int) -> int:
    return len(bareiss_echelon([list(r) for r in rows], ncols)[1])


def rref(m: RationalMatrix) -> tuple[RationalMatrix, list[int]]:
    """Reduced row echelon form (zero rows dropped) and pivot columns.

    The rank is ``len(pivots)``; :func:`rref_full` keeps the zero rows.
    """
    if m.rows == 0:
        return RationalMatrix.zeros(0, m.cols), []
    ech, pivots = bareiss_echelon([integer_row(r) for r in m], m.cols)
    return RationalMatrix._raw(_reduce_echelon(ech, pivots), m.cols), pivots


def _reduce_echelon(ech: list[list[int]], pivots: list[int]) -> tuple:
    r = len(ech)
    for i in range(r - 1, -1, -1):
        pi = pivots[i]
        row_i = ech[i]
        p = row_i[pi]
        for j in range(i):
            a = ech[j][pi]
            if a:
                new = [p * x - a * y for x, y in zip(ech[j], row_i)]
                g = reduce(gcd, new, 0)
                if g > 1:
                    new = [v // g for v in new]
                ech[j] = new
    out = []
    for row, pc in zip(ech, pivots):
        p = row[pc]
        out.append(tuple(Fraction(x, p) for x in row))
    return tuple(out)


def rref_full(m: RationalMatrix) -> tuple[RationalMatrix, int]:
    """RREF of the same shape as ``m`` (zero rows kept at the bottom) and its rank."""
    red, pivots = rref(m)
    pad = m.rows - len(pivots)
    z = (Fraction(0),) * m.cols
    return RationalMatrix._raw(red._data + (z,) * pad, m.cols), len(pivots)


def nullspace(m: RationalMatrix) -> list[tuple]:
    """Basis of {x : m x = 0}, one vector per free column."""
    red, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    out = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        out.append(tuple(v))
    return out


def rank(m: RationalMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return int_rank([integer_row(r) for r in m], m.cols)


def determinant(m: RationalMatrix) -> Fraction:
    n = m.rows
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    rows = []
    for r in m:
        den = reduce(lcm, (x.denominator for x in r), 1)
        scale /= den
        rows.append([int(x * den) for x in r])
    # plain Bareiss with sign tracking, no pivot search beyond nonzero
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k]:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pk = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (pk * rows[i][j] - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = pk
    return sign * rows[n - 1][n - 1] * scale


def float_rank(m: RationalMatrix | np.ndarray, tol: float = 1e-9) -> int:
    """Numerical rank from singular values. Never used for certificates."""
    a = m.to_numpy() if isinstance(m, RationalMatrix) else np.asarray(m, dtype=float)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * max(1.0, s[0])))


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------


class Subspace:
    """A linear subspace of Q^n stored by its canonical RREF basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: RationalMatrix, pivots: list[int]):
        # trusted constructor; use subspace_from_rows for arbitrary input
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = tuple(pivots)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> tuple:
        return self.basis._data

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def __le__(self, other: "Subspace") -> bool:
        return is_subspace(self, other)

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "basis": self.basis.to_json()}

    @classmethod
    def from_json(cls, obj) -> "Subspace":
        if isinstance(obj, str):
            obj = json.loads(obj)
        n = int(obj["ambient_dim"])
        rows = obj["basis"]
        if not rows:
            return zero_subspace(n)
        return subspace_from_rows(n, RationalMatrix.from_json(rows))

    def integer_rows(self) -> list[list[int]]:
        return [integer_row(r) for r in self.basis]


def zero_subspace(n: int) -> Subspace:
    return Subspace(n, RationalMatrix.zeros(0, n), [])


def full_space(n: int) -> Subspace:
    return Subspace(n, RationalMatrix.identity(n), list(range(n)))


def subspace_from_rows(ambient_dim: int, rows) -> Subspace:
    """Canonical subspace spanned by the given rows."""
    if isinstance(rows, RationalMatrix):
        if rows.rows == 0:
            return zero_subspace(ambient_dim)
        if rows.cols != ambient_dim:
            raise DimensionError(f"rows have {rows.cols} columns, ambient dimension is {ambient_dim}")
        int_rows = [integer_row(r) for r in rows]
    else:
        rows = list(rows)
        for r in rows:
            if len(r) != ambient_dim:
                raise DimensionError(f"row of length {len(r)} in ambient dimension {ambient_dim}")
        int_rows = [integer_row(r) for r in rows]
    return _from_int_rows(ambient_dim, int_rows)


def _from_int_rows(ambient_dim: int, int_rows: list[list[int]]) -> Subspace:
    int_rows = [r for r in int_rows if any(r)]
    if not int_rows:
        return zero_subspace(ambient_dim)
    ech, pivots = bareiss_echelon(int_rows, ambient_dim)
    return Subspace(ambient_dim, RationalMatrix._raw(_reduce_echelon(ech, pivots), ambient_dim), pivots)


def span(ambient_dim: int, vectors: Iterable[Sequence]) -> Subspace:
    return subspace_from_rows(ambient_dim, list(vectors))


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient mismatch {a.ambient_dim} vs {b.ambient_dim}")


def subspace_sum(*spaces: Subspace) -> Subspace:
    if not spaces:
        raise ValueError("sum of no subspaces")
    n = spaces[0].ambient_dim
    rows = []
    for s in spaces:
        _check_ambient(spaces[0], s)
        rows.extend(s.integer_rows())
    return _from_int_rows(n, rows)


def sum_dim(ambient_dim: int, int_rows: list[list[int]]) -> int:
    """Dimension of the span of integer rows (the hot path of witness search)."""
    if not int_rows:
        return 0
    return int_rank(int_rows, ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Zassenhaus intersection."""
    _check_ambient(a, b)
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return zero_subspace(n)
    rows = [r + r for r in a.integer_rows()] + [r + [0] * n for r in b.integer_rows()]
    ech, pivots = bareiss_echelon(rows, 2 * n)
    inter = [row[n:] for row, p in zip(ech, pivots) if p >= n]
    return _from_int_rows(n, inter)


def reduce_vector(a: Subspace, v: Sequence) -> tuple:
    """Residual of v after eliminating a's pivot coordinates."""
    w = [to_fraction(x) for x in v]
    if len(w) != a.ambient_dim:
        raise DimensionError(f"vector of length {len(w)} in ambient dimension {a.ambient_dim}")
    for row, p in zip(a.basis, a.pivots):
        c = w[p]
        if c:
            w = [x - c * y for x, y in zip(w, row)]
    return tuple(w)


def contains(a: Subspace, v: Sequence) -> bool:
    return not any(reduce_vector(a, v))


def is_subspace(a: Subspace, b: Subspace) -> bool:
    _check_ambient(a, b)
    if a.dim > b.dim:
        return False
    return all(contains(b, v) for v in a.basis)


def equals(a: Subspace, b: Subspace) -> bool:
    return a == b


def dim(a: Subspace) -> int:
    return a.dim


def unit_vector(n: int, i: int) -> tuple:
    return tuple(Fraction(int(j == i)) for j in range(n))


def coordinate_subspace(n: int, indices: Iterable[int]) -> Subspace:
    idx = sorted(set(indices))
    if not idx:
        return zero_subspace(n)
    basis = RationalMatrix._raw(tuple(unit_vector(n, i) for i in idx), n)
    return Subspace(n, basis, idx)


def random_matrix(rng, rows: int, cols: int, entry_range: int = 10) -> RationalMatrix:
    return RationalMatrix._raw(
        tuple(tuple(Fraction(rng.randint(-entry_range, entry_range)) for _ in range(cols)) for _ in range(rows)),
        cols,
    )


def random_subspace(rng, ambient_dim: int, d: int, entry_range: int = 10) -> Subspace:
    """A d-dimensional subspace from random integer rows (redrawn until rank d)."""
    if not 0 <= d <= ambient_dim:
        raise DimensionError(f"cannot draw a {d}-dimensional subspace of Q^{ambient_dim}")
    while True:
        s = subspace_from_rows(ambient_dim, random_matrix(rng, d, ambient_dim, entry_range))
        if s.dim == d:
            return s


def integer_matrix(m: RationalMatrix) -> list[list[int]]:
    """``m`` scaled by the lcm of its denominators (same image, same kernel)."""
    den = reduce(lcm, (x.denominator for r in m for x in r), 1)
    return [[int(x * den) for x in r] for r in m]


def apply_int(op: list[list[int]], rows: list[list[int]]) -> list[list[int]]:
    """Images ``op @ v`` of the integer row vectors ``rows``."""
    out = []
    for v in rows:
        nz = [(j, x) for j, x in enumerate(v) if x]
        out.append([sum(r[j] * x for j, x in nz) for r in op])
    return out
