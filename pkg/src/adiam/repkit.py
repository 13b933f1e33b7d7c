"""Representations used throughout: SL2 irreducibles and conjugation on M_n / sl_n.

Matrix indices in public helpers are 1-based (``E(n, i, j)`` is the matrix
unit with a one in row i, column j) to match the usual E_ij notation.
Coordinates of sl_n list every off-diagonal E_ij in row-major order and then
the diagonal elements E_ii - E_{i+1,i+1} for i = 1..n-1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

from .exactlin import (
    DimensionError,
    RationalMatrix,
    Subspace,
    _from_int_rows,
    apply_int,
    integer_matrix,
    random_matrix,
    to_fraction,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class GroupElement:
    """An invertible matrix carrying its inverse."""

    __slots__ = ("matrix", "inverse", "label")

    def __init__(self, m, inverse: RationalMatrix | None = None, label: str | None = None):
        m = m if isinstance(m, RationalMatrix) else RationalMatrix(m)
        if not m.is_square():
            raise DimensionError("group elements must be square")
        if inverse is None:
            inverse = m.inverse()  # raises ZeroDivisionError when singular
        elif m @ inverse != RationalMatrix.identity(m.rows):
            raise ValueError("supplied inverse does not invert the matrix")
        self.matrix = m
        self.inverse = inverse
        self.label = label

    @property
    def n(self) -> int:
        return self.matrix.rows

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.matrix @ other.matrix, other.inverse @ self.inverse)

    def inv(self) -> "GroupElement":
        return GroupElement(self.inverse, self.matrix, label=f"{self.label}^-1" if self.label else None)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElement) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        tag = f" {self.label}" if self.label else ""
        return f"GroupElement{tag}({self.matrix!r})"


def identity_element(n: int) -> GroupElement:
    i = RationalMatrix.identity(n)
    return GroupElement(i, i, label="I")


def E(n: int, i: int, j: int) -> RationalMatrix:
    """Matrix unit E_ij (1-based)."""
    return RationalMatrix._raw(
        tuple(tuple(ONE if (r == i - 1 and c == j - 1) else ZERO for c in range(n)) for r in range(n)), n
    )


# ---------------------------------------------------------------------------
# named group elements
# ---------------------------------------------------------------------------


def permutation_matrix(perm: Sequence[int]) -> RationalMatrix:
    """P with P e_j = e_{perm[j]} (perm is 1-based, given as the image list)."""
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {list(perm)}")
    rows = [[ZERO] * n for _ in range(n)]
    for j, wj in enumerate(perm):
        rows[wj - 1][j] = ONE
    return RationalMatrix._raw(tuple(tuple(r) for r in rows), n)


def permutation(perm: Sequence[int], label: str | None = None) -> GroupElement:
    p = permutation_matrix(perm)
    return GroupElement(p, p.T(), label=label or "perm" + "".join(f".{x}" for x in perm))


def transposition(n: int, i: int, j: int) -> GroupElement:
    perm = list(range(1, n + 1))
    perm[i - 1], perm[j - 1] = perm[j - 1], perm[i - 1]
    return permutation(perm, label=f"P{i}{j}" if n < 10 else f"P({i},{j})")


def flip_matrix(n: int) -> GroupElement:
    """F = [delta_{i+j=n+1}], the antidiagonal permutation."""
    return permutation([n + 1 - j for j in range(1, n + 1)], label="F")


def long_cycle(n: int) -> GroupElement:
    """Permutation matrix of the cycle (1 2 ... n)."""
    return permutation([j % n + 1 for j in range(1, n + 1)], label="cycle")


def unipotent_shift(k: int, a) -> GroupElement:
    """Lower unipotent (1 0; a 1); under rho_k it sends x^m to (x + a)^m."""
    a = to_fraction(a)
    m = RationalMatrix._raw(((ONE, ZERO), (a, ONE)), 2)
    inv = RationalMatrix._raw(((ONE, ZERO), (-a, ONE)), 2)
    return GroupElement(m, inv, label=f"shift({a})")


def elementary_product(n: int) -> GroupElement:
    """prod_{i<n} (I + E_{i,i+1}) = [delta_{i<=j}]."""
    m = RationalMatrix._raw(tuple(tuple(ONE if i <= j else ZERO for j in range(n)) for i in range(n)), n)
    inv = RationalMatrix._raw(
        tuple(tuple(ONE if i == j else (-ONE if j == i + 1 else ZERO) for j in range(n)) for i in range(n)), n
    )
    return GroupElement(m, inv, label="upper-ones")


def random_group_element(rng: random.Random, n: int, entry_range: int = 10) -> GroupElement:
    while True:
        m = random_matrix(rng, n, n, entry_range)
        if m.det() != 0:
            return GroupElement(m)


# ---------------------------------------------------------------------------
# coordinatizations
# ---------------------------------------------------------------------------


class SlnCoords:
    """Coordinates on sl_n: off-diagonal units row-major, then E_ii - E_{i+1,i+1}."""

    def __init__(self, n: int):
        self.n = n
        self.offdiag = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
        self.index = {pos: c for c, pos in enumerate(self.offdiag)}
        self.dim = n * n - 1
        self.diag_start = len(self.offdiag)

    def vector_of(self, a: RationalMatrix) -> tuple:
        n = self.n
        if a.shape != (n, n):
            raise DimensionError(f"expected {n}x{n} matrix")
        if a.trace() != 0:
            raise ValueError("matrix is not traceless")
        out = [a[i - 1, j - 1] for (i, j) in self.offdiag]
        acc = ZERO
        for i in range(n - 1):
            acc += a[i, i]
            out.append(acc)
        return tuple(out)

    def matrix_of(self, v: Sequence) -> RationalMatrix:
        n = self.n
        v = [to_fraction(x) for x in v]
        if len(v) != self.dim:
            raise DimensionError(f"expected {self.dim} coordinates")
        rows = [[ZERO] * n for _ in range(n)]
        for c, (i, j) in enumerate(self.offdiag):
            rows[i - 1][j - 1] = v[c]
        d = v[self.diag_start:]
        for i in range(n):
            rows[i][i] = (d[i] if i < n - 1 else ZERO) - (d[i - 1] if i > 0 else ZERO)
        return RationalMatrix._raw(tuple(tuple(r) for r in rows), n)

    def unit(self, i: int, j: int) -> tuple:
        """Coordinates of the off-diagonal unit E_ij."""
        v = [ZERO] * self.dim
        v[self.index[(i, j)]] = ONE
        return tuple(v)

    def diag_vector(self, entries: Sequence) -> tuple:
        """Coordinates of diag(entries) (entries must sum to zero)."""
        rows = [[ZERO] * self.n for _ in range(self.n)]
        for i, x in enumerate(entries):
            rows[i][i] = to_fraction(x)
        return self.vector_of(RationalMatrix._raw(tuple(tuple(r) for r in rows), self.n))

    def basis_matrices(self) -> list[RationalMatrix]:
        return [self.matrix_of(tuple(ONE if c == k else ZERO for c in range(self.dim))) for k in range(self.dim)]


class MnCoords:
    """Coordinates on M_n: all matrix units row-major."""

    def __init__(self, n: int):
        self.n = n
        self.dim = n * n
        self.index = {(i, j): (i - 1) * n + (j - 1) for i in range(1, n + 1) for j in range(1, n + 1)}

    def vector_of(self, a: RationalMatrix) -> tuple:
        if a.shape != (self.n, self.n):
            raise DimensionError(f"expected {self.n}x{self.n} matrix")
        return tuple(x for r in a for x in r)

    def matrix_of(self, v: Sequence) -> RationalMatrix:
        v = [to_fraction(x) for x in v]
        if len(v) != self.dim:
            raise DimensionError(f"expected {self.dim} coordinates")
        n = self.n
        return RationalMatrix._raw(tuple(tuple(v[i * n:(i + 1) * n]) for i in range(n)), n)

    def unit(self, i: int, j: int) -> tuple:
        v = [ZERO] * self.dim
        v[self.index[(i, j)]] = ONE
        return tuple(v)

    def basis_matrices(self) -> list[RationalMatrix]:
        n = self.n
        return [E(n, i, j) for i in range(1, n + 1) for j in range(1, n + 1)]


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Representation:
    """A group representation on Q^dim together with its derivative at the identity.

    ``evaluator`` takes a :class:`GroupElement` of size ``group_n``;
    ``lie_evaluator`` takes a ``group_n`` x ``group_n`` matrix.
    ``lie_basis`` spans the Lie algebra acting, ``borel_basis`` generates its
    standard (upper triangular) Borel subalgebra.
    """

    kind: str
    params: tuple
    dim: int
    group_n: int
    evaluator: Callable[[GroupElement], RationalMatrix] = field(repr=False)
    lie_evaluator: Callable[[RationalMatrix], RationalMatrix] = field(repr=False)
    lie_basis: tuple = field(repr=False, default=())
    borel_basis: tuple = field(repr=False, default=())
    coords: object = field(repr=False, default=None)

    @property
    def descriptor(self) -> str:
        if self.kind == "sl2":
            return f"sl2:{self.params[0]}"
        if self.kind == "conj":
            return f"conj:{self.params[0]}:{self.params[1]}"
        if self.kind == "sum":
            inner, m = self.params
            return f"sum:{m}:{inner.descriptor}"
        return f"{self.kind}:{':'.join(map(str, self.params))}"

    def __eq__(self, other) -> bool:
        return isinstance(other, Representation) and self.descriptor == other.descriptor

    def __hash__(self) -> int:
        return hash(self.descriptor)

    def identity(self) -> GroupElement:
        return identity_element(self.group_n)

    @property
    def irreducible(self) -> bool:
        """True for the families known to be irreducible: SL2 irreducibles and conjugation on sl_n."""
        return self.kind in ("sl2", "sym") or (self.kind == "conj" and self.params[0] == "sln")

    def lie_operators(self) -> tuple:
        """lie_evaluator applied to the Lie basis, computed once per descriptor."""
        key = self.descriptor
        if key not in _LIE_OPS:
            _LIE_OPS[key] = tuple(self.lie_evaluator(x) for x in self.lie_basis)
        return _LIE_OPS[key]


_LIE_OPS: dict = {}


def _poly_pow(lin: tuple, e: int) -> list[Fraction]:
    """Coefficients (by power of X) of (p X + q Y)^e as a list of length e+1."""
    p, q = lin
    return [comb(e, m) * p ** m * q ** (e - m) for m in range(e + 1)]


def _poly_mul(a: list, b: list) -> list:
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def sl2_irrep(k: int) -> Representation:
    """rho_k on homogeneous degree-k polynomials, basis e_i = X^i Y^(k-i)."""
    if k < 1:
        raise ValueError("sl2_irrep needs k >= 1")

    def evaluator(g: GroupElement) -> RationalMatrix:
        if g.n != 2:
            raise DimensionError("rho_k acts through 2x2 matrices")
        (a, b), (c, d) = g.matrix
        cols = []
        for i in range(k + 1):
            cols.append(_poly_mul(_poly_pow((a, c), i), _poly_pow((b, d), k - i)))
        return RationalMatrix._raw(tuple(tuple(cols[i][r] for i in range(k + 1)) for r in range(k + 1)), k + 1)

    def lie_evaluator(x: RationalMatrix) -> RationalMatrix:
        if x.shape != (2, 2):
            raise DimensionError("lie elements of gl_2 are 2x2")
        (p, q), (r, s) = x
        rows = [[ZERO] * (k + 1) for _ in range(k + 1)]
        for i in range(k + 1):
            rows[i][i] += i * p + (k - i) * s
            if i > 0:
                rows[i - 1][i] += i * r
            if i < k:
                rows[i + 1][i] += (k - i) * q
        return RationalMatrix._raw(tuple(tuple(r_) for r_ in rows), k + 1)

    e, h, f = sl2_basis()
    return Representation("sl2", (k,), k + 1, 2, evaluator, lie_evaluator, (e, h, f), (e, h))


def sl2_sym(k: int) -> Representation:
    """rho_k in the basis u_i = C(k, i) X^(k-i) Y^i.

    In these coordinates the linear form x X + y Y has k-th power
    (x^k, x^(k-1) y, ..., y^k), and sym:1 is the standard action on (x, y).
    """
    base = sl2_irrep(k)
    # u_i = C(k,i) e_{k-i}: column i of T holds the e-coordinates of u_i
    T = RationalMatrix._raw(
        tuple(tuple(Fraction(comb(k, i)) if r == k - i else ZERO for i in range(k + 1)) for r in range(k + 1)), k + 1
    )
    Tinv = RationalMatrix._raw(
        tuple(tuple(Fraction(1, comb(k, r)) if i == k - r else ZERO for i in range(k + 1)) for r in range(k + 1)), k + 1
    )
    return Representation(
        "sym",
        (k,),
        k + 1,
        2,
        lambda g: Tinv @ base.evaluator(g) @ T,
        lambda x: Tinv @ base.lie_evaluator(x) @ T,
        base.lie_basis,
        base.borel_basis,
    )


def sl2_basis() -> tuple[RationalMatrix, RationalMatrix, RationalMatrix]:
    e = RationalMatrix([[0, 1], [0, 0]])
    h = RationalMatrix([[1, 0], [0, -1]])
    f = RationalMatrix([[0, 0], [1, 0]])
    return e, h, f


def conj_rep(n: int, space: str = "sln") -> Representation:
    """GL_n acting by A -> g A g^-1 on sl_n (``space='sln'``) or M_n (``'Mn'``)."""
    if n < 2:
        raise ValueError("conj_rep needs n >= 2")
    if space not in ("sln", "Mn"):
        raise ValueError(f"unknown space {space!r}")
    coords = SlnCoords(n) if space == "sln" else MnCoords(n)
    basis = coords.basis_matrices()
    # sparse form of the basis: list of (i, j, coeff), 0-based
    sparse = [[(i, j, x) for i, r in enumerate(b) for j, x in enumerate(r) if x] for b in basis]

    def evaluator(g: GroupElement) -> RationalMatrix:
        if g.n != n:
            raise DimensionError(f"expected a {n}x{n} group element")
        gm, gi = g.matrix, g.inverse
        gcols = gm.T()._data
        cols = []
        for terms in sparse:
            acc = [[ZERO] * n for _ in range(n)]
            for i, j, x in terms:
                ci, rj = gcols[i], gi._data[j]
                for a in range(n):
                    if ci[a]:
                        ca = x * ci[a]
                        row = acc[a]
                        for b in range(n):
                            if rj[b]:
                                row[b] += ca * rj[b]
            cols.append(coords.vector_of(RationalMatrix._raw(tuple(tuple(r) for r in acc), n)))
        return RationalMatrix._raw(tuple(zip(*cols)), coords.dim)

    def lie_evaluator(x: RationalMatrix) -> RationalMatrix:
        if x.shape != (n, n):
            raise DimensionError(f"expected an {n}x{n} Lie element")
        cols = [coords.vector_of(x @ b - b @ x) for b in basis]
        return RationalMatrix._raw(tuple(zip(*cols)), coords.dim)

    lie_basis = tuple(E(n, i, j) for i in range(1, n + 1) for j in range(1, n + 1))
    borel = tuple(E(n, i, i + 1) for i in range(1, n)) + tuple(E(n, i, i) for i in range(1, n + 1))
    return Representation("conj", (space, n), coords.dim, n, evaluator, lie_evaluator, lie_basis, borel, coords)


def direct_sum(rep: Representation, m: int) -> Representation:
    """The diagonal action on ``rep``^m (coordinates concatenated)."""
    if m < 1:
        raise ValueError("direct_sum needs m >= 1")
    d = rep.dim

    def block_diag(op: RationalMatrix) -> RationalMatrix:
        rows = []
        for blk in range(m):
            for r in op:
                rows.append((ZERO,) * (blk * d) + tuple(r) + (ZERO,) * ((m - blk - 1) * d))
        return RationalMatrix._raw(tuple(rows), d * m)

    return Representation(
        "sum",
        (rep, m),
        d * m,
        rep.group_n,
        lambda g: block_diag(rep.evaluator(g)),
        lambda x: block_diag(rep.lie_evaluator(x)),
        rep.lie_basis,
        rep.borel_basis,
        rep.coords,
    )


def parse_rep(desc: str) -> Representation:
    """Parse ``sl2:k``, ``sym:k``, ``conj:sln:n``, ``conj:Mn:n`` or ``sum:m:<inner>``."""
    parts = desc.strip().split(":")
    try:
        if parts[0] == "sl2" and len(parts) == 2:
            return sl2_irrep(int(parts[1]))
        if parts[0] == "sym" and len(parts) == 2:
            return sl2_sym(int(parts[1]))
        if parts[0] == "conj" and len(parts) == 3:
            return conj_rep(int(parts[2]), parts[1])
        if parts[0] == "sum" and len(parts) >= 3:
            return direct_sum(parse_rep(":".join(parts[2:])), int(parts[1]))
    except ValueError as exc:
        raise ValueError(f"bad representation descriptor {desc!r}: {exc}") from exc
    raise ValueError(f"bad representation descriptor {desc!r}; expected sl2:k, conj:sln:n or conj:Mn:n")


# ---------------------------------------------------------------------------
# acting on subspaces
# ---------------------------------------------------------------------------


def apply(op: RationalMatrix, U: Subspace) -> Subspace:
    """The image op . U as a canonical subspace."""
    if not op.is_square() or op.rows != U.ambient_dim:
        raise DimensionError(f"operator of shape {op.shape} cannot act on ambient dimension {U.ambient_dim}")
    if U.dim == 0:
        return U
    return _from_int_rows(U.ambient_dim, apply_int(integer_matrix(op), U.integer_rows()))


def image_rows(op: RationalMatrix, U: Subspace) -> list[list[int]]:
    """Integer rows spanning op . U (not reduced)."""
    return apply_int(integer_matrix(op), U.integer_rows())


def permute_positions(perm: Sequence[int], positions):
    """Index map of permutation conjugation: E_ij -> E_{w(i) w(j)} (1-based)."""
    return {(perm[i - 1], perm[j - 1]) for (i, j) in positions}
