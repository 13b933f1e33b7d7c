"""Named subspaces, block-closure predicates and Borel stability."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Iterable

from .exactlin import (
    Subspace,
    _from_int_rows,
    coordinate_subspace,
    full_space,
    integer_row,
    is_subspace,
    random_subspace,
    span,
    subspace_sum,
    zero_subspace,
)
from .repkit import Representation, SlnCoords, image_rows


@dataclass(frozen=True, order=True)
class BlockCorner:
    i: int
    j: int


@dataclass(frozen=True)
class DownSet:
    """Antichain of block corners; the off-diagonal support of a block-closed subspace."""

    n: int
    corners: frozenset

    @classmethod
    def from_positions(cls, n: int, positions: Iterable[tuple[int, int]]) -> "DownSet":
        pos = set(positions)
        maximal = {
            (i, j) for (i, j) in pos
            if not any((a, b) != (i, j) and a >= i and b <= j for (a, b) in pos)
        }
        return cls(n, frozenset(BlockCorner(i, j) for i, j in maximal))

    def positions(self) -> frozenset:
        """Off-diagonal positions covered by the blocks of the corners."""
        out = set()
        for c in self.corners:
            out |= block_positions(self.n, c.i, c.j)
        return frozenset(out)


def _check_index(n: int, *idx: int) -> None:
    for x in idx:
        if not 1 <= x <= n:
            raise ValueError(f"index {x} out of range 1..{n}")


# ---------------------------------------------------------------------------
# SL2 side
# ---------------------------------------------------------------------------


def upper_closed(k: int, j: int) -> Subspace:
    """<e_j, ..., e_k> inside the (k+1)-dimensional space of rho_k."""
    if not 0 <= j <= k:
        raise ValueError(f"need 0 <= j <= k, got j={j}, k={k}")
    return coordinate_subspace(k + 1, range(j, k + 1))


# ---------------------------------------------------------------------------
# sl_n side
# ---------------------------------------------------------------------------


def block_positions(n: int, i: int, j: int) -> set[tuple[int, int]]:
    return {(a, b) for a in range(1, i + 1) for b in range(j, n + 1) if a != b}


def traceless_diag_rows(coords: SlnCoords, indices: Iterable[int]) -> list[tuple]:
    """Spanning vectors of traceless diagonal matrices supported on ``indices``."""
    idx = sorted(set(indices))
    rows = []
    for p, q in zip(idx, idx[1:]):
        d = [0] * coords.n
        d[p - 1], d[q - 1] = 1, -1
        rows.append(coords.diag_vector(d))
    return rows


def block_B(n: int, i: int, j: int) -> Subspace:
    """B_ij: traceless matrices supported on rows <= i and columns >= j."""
    _check_index(n, i, j)
    c = SlnCoords(n)
    rows = [c.unit(a, b) for (a, b) in sorted(block_positions(n, i, j))]
    rows += traceless_diag_rows(c, range(j, i + 1))
    return span(c.dim, rows) if rows else zero_subspace(c.dim)


def offdiag_span(n: int, positions: Iterable[tuple[int, int]]) -> Subspace:
    c = SlnCoords(n)
    return coordinate_subspace(c.dim, (c.index[p] for p in positions))


def borel_b(n: int) -> Subspace:
    c = SlnCoords(n)
    rows = [c.unit(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    rows += traceless_diag_rows(c, range(1, n + 1))
    return span(c.dim, rows)


def _borel_without(n: int, k: int) -> Subspace:
    c = SlnCoords(n)
    rows = [c.unit(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    rows += traceless_diag_rows(c, [m for m in range(1, n + 1) if m != k])
    return span(c.dim, rows)


def zero_diag(n: int) -> Subspace:
    return offdiag_span(n, SlnCoords(n).offdiag)


def counterexample(n: int) -> Subspace:
    """span<E_11 - E_nn> + B_{n-1,2}."""
    if n < 3:
        raise ValueError("the counterexample subspace needs n >= 3")
    c = SlnCoords(n)
    d = [0] * n
    d[0], d[-1] = 1, -1
    return subspace_sum(block_B(n, n - 1, 2), span(c.dim, [c.diag_vector(d)]))


def last_rowcol_zero(n: int) -> Subspace:
    """Traceless matrices with zero last row and last column."""
    c = SlnCoords(n)
    rows = [c.unit(i, j) for i in range(1, n) for j in range(1, n) if i != j]
    rows += traceless_diag_rows(c, range(1, n))
    return span(c.dim, rows) if rows else zero_subspace(c.dim)


def gl2_example() -> Subspace:
    """span<I, E_12> inside M_2 (row-major coordinates)."""
    return span(4, [(1, 0, 0, 1), (0, 1, 0, 0)])


def basic_block(n: int) -> Subspace:
    """B_mm for odd n and B_mm + B_{m+1,m+1} for even n, with m = (n+1)//2."""
    m = (n + 1) // 2
    if n % 2:
        return block_B(n, m, m)
    return subspace_sum(block_B(n, m, m), block_B(n, m + 1, m + 1))


NAMED = {
    "borel_b": borel_b,
    "basic_block": basic_block,
    "b_hat11": lambda n: _borel_without(n, 1),
    "b_hatnn": lambda n: _borel_without(n, n),
    "zero_diag": zero_diag,
    "counterexample": counterexample,
    "last_rowcol_zero": last_rowcol_zero,
}


def named(n: int, which: str) -> Subspace:
    if which == "gl2_example":
        if n != 2:
            raise ValueError("gl2_example lives in M_2; n must be 2")
        return gl2_example()
    if n < 2:
        raise ValueError("named subspaces need n >= 2")
    try:
        return NAMED[which](n)
    except KeyError:
        raise ValueError(f"unknown named subspace {which!r}; choose from {sorted(NAMED) + ['gl2_example']}") from None


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------


def offdiag_support(n: int, U: Subspace) -> set[tuple[int, int]]:
    """Off-diagonal positions (i, j) where some element of U is nonzero."""
    c = SlnCoords(n)
    if U.ambient_dim != c.dim:
        raise ValueError(f"expected a subspace of sl_{n} (dimension {c.dim})")
    return {pos for k, pos in enumerate(c.offdiag) if any(row[k] for row in U.basis)}


def is_upper_right_block_closed(n: int, U: Subspace) -> bool:
    for (i, j) in offdiag_support(n, U):
        if not is_subspace(block_B(n, i, j), U):
            return False
    return True


def is_stable(rep: Representation, U: Subspace, generators) -> bool:
    if U.dim == 0:
        return True
    for x in generators:
        rows = image_rows(rep.lie_evaluator(x), U)
        for r in rows:
            if not U.__contains__(r):
                return False
    return True


def is_borel_stable(rep: Representation, U: Subspace) -> bool:
    """Stability under the upper triangular Borel subalgebra (hence the connected Borel subgroup)."""
    if U.ambient_dim != rep.dim:
        raise ValueError("subspace does not live in the representation space")
    return is_stable(rep, U, rep.borel_basis)


def lie_closure(rep: Representation, U: Subspace, generators=None) -> Subspace:
    """Smallest subspace containing U and stable under the given Lie elements."""
    ops = rep.lie_operators() if generators is None else [rep.lie_evaluator(x) for x in generators]
    W = U
    while True:
        rows = W.integer_rows()
        for op in ops:
            rows = rows + image_rows(op, W)
        W2 = _from_int_rows(W.ambient_dim, rows)
        if W2.dim == W.dim or W2.is_full():
            return W2
        W = W2


# ---------------------------------------------------------------------------
# enumeration of block-closed subspaces
# ---------------------------------------------------------------------------


def _closed_supports(n: int):
    """All off-diagonal supports of upper-right-closed position sets."""
    seen = set()
    # row r holds columns c_r..n, with c_1 <= c_2 <= ... <= c_n
    for cs in combinations_with_replacement(range(1, n + 2), n):
        S = frozenset((r, b) for r, c in enumerate(cs, start=1) for b in range(c, n + 1) if r != b)
        if S not in seen:
            seen.add(S)
            yield S


def _forced_components(n: int, S) -> list[list[int]]:
    """Index groups whose traceless diagonal is forced by the blocks over S."""
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j) in S:
        for m in range(j, i):  # interval [j, i] when i > j
            parent[find(m)] = find(m + 1)
    groups: dict[int, list[int]] = {}
    for m in range(1, n + 1):
        groups.setdefault(find(m), []).append(m)
    return [g for g in groups.values() if len(g) > 1]


def enumerate_block_closed(
    n: int,
    target_dim: int,
    diag_mode: str = "forced_only",
    seed: int = 0,
    trials: int = 3,
) -> list[Subspace]:
    """Upper right block closed subspaces of sl_n of dimension ``target_dim``.

    ``forced_only`` keeps just the diagonal part forced by the blocks;
    ``sampled`` adds ``trials`` random diagonal complements per support.
    """
    if n > 7:
        raise ValueError("enumeration is limited to n <= 7")
    c = SlnCoords(n)
    if not 0 <= target_dim <= c.dim:
        raise ValueError(f"infeasible target dimension {target_dim} for sl_{n}")
    if diag_mode not in ("forced_only", "sampled"):
        raise ValueError(f"unknown diag_mode {diag_mode!r}")
    rng = random.Random(seed)
    out: dict[Subspace, None] = {}
    for S in _closed_supports(n):
        comps = _forced_components(n, S)
        forced = sum(len(g) - 1 for g in comps)
        base = len(S) + forced
        if diag_mode == "forced_only" and base != target_dim:
            continue
        if not base <= target_dim <= len(S) + n - 1:
            continue
        rows = [integer_row(c.unit(*p)) for p in sorted(S)]
        for g in comps:
            rows += [integer_row(r) for r in traceless_diag_rows(c, g)]
        if base == target_dim:
            out[_from_int_rows(c.dim, rows)] = None
            continue
        extra = target_dim - base
        for _ in range(trials):
            for _attempt in range(20):
                diag = [integer_row(c.diag_vector(_random_traceless(rng, n))) for _ in range(extra)]
                U = _from_int_rows(c.dim, rows + diag)
                if U.dim == target_dim:
                    out[U] = None
                    break
    return list(out)


def _random_traceless(rng: random.Random, n: int, h: int = 10) -> list[int]:
    d = [rng.randint(-h, h) for _ in range(n - 1)]
    return d + [-sum(d)]


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


def parse_subspace(desc: str, rep: Representation) -> Subspace:
    """Parse ``upper:k:j``, ``B:n:i:j``, ``named:n:which``, ``random:n:d:seed`` or ``file:path``."""
    kind, _, rest = desc.partition(":")
    parts = rest.split(":") if rest else []
    try:
        if kind == "upper" and len(parts) == 2:
            U = upper_closed(int(parts[0]), int(parts[1]))
        elif kind == "B" and len(parts) == 3:
            U = block_B(*(int(p) for p in parts))
        elif kind == "named" and len(parts) == 2:
            U = named(int(parts[0]), parts[1])
        elif kind == "random" and len(parts) == 3:
            n, d, seed = (int(p) for p in parts)
            if rep.params[-1] != n:
                raise ValueError(f"random:{n}:... does not match representation {rep.descriptor}")
            U = random_subspace(random.Random(seed), rep.dim, d)
        elif kind == "file" and rest:
            obj = json.loads(Path(rest).read_text())
            if isinstance(obj, list):
                obj = {"ambient_dim": rep.dim, "basis": obj}
            U = Subspace.from_json(obj)
        else:
            raise ValueError("unrecognised form")
    except (ValueError, KeyError, OSError) as exc:
        raise ValueError(f"bad subspace descriptor {desc!r}: {exc}") from exc
    if U.ambient_dim != rep.dim:
        raise ValueError(f"subspace {desc!r} has ambient dimension {U.ambient_dim}, representation has {rep.dim}")
    return U


__all__ = [
    "basic_block",
    "BlockCorner",
    "DownSet",
    "block_B",
    "block_positions",
    "borel_b",
    "counterexample",
    "enumerate_block_closed",
    "full_space",
    "gl2_example",
    "is_borel_stable",
    "is_stable",
    "is_upper_right_block_closed",
    "last_rowcol_zero",
    "lie_closure",
    "named",
    "offdiag_span",
    "offdiag_support",
    "parse_subspace",
    "upper_closed",
    "zero_diag",
]
