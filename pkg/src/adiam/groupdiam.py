"""Group-additive diameters: translate sums, witnesses, obstructions, certificates.

A certificate pairs upper evidence (group elements whose translates of U span
V) with lower evidence (an obstruction that no smaller number of translates
can span V). Both halves are replayed from scratch by :func:`verify`.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Callable, Sequence

from .exactlin import (
    DimensionError,
    RationalMatrix,
    Subspace,
    _from_int_rows,
    integer_row,
    nullspace,
    reduce_vector,
    sum_dim,
    zero_subspace,
)
from .repkit import (
    E,
    GroupElement,
    Representation,
    SlnCoords,
    conj_rep,
    elementary_product,
    flip_matrix,
    image_rows,
    long_cycle,
    parse_rep,
    permutation,
    random_group_element,
    transposition,
    unipotent_shift,
)
from .spaces import is_borel_stable, last_rowcol_zero, lie_closure

INFINITE = math.inf
SCHEMA = 1


class PreconditionError(ValueError):
    """A documented precondition of an operation does not hold."""


class NotFound:
    """Search gave up. Not evidence of anything."""

    def __init__(self, reason: str):
        self.reason = reason

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return f"NotFound({self.reason!r})"


# ---------------------------------------------------------------------------
# translate sums
# ---------------------------------------------------------------------------

_OP_CACHE: dict = {}


def _operator(rep: Representation, g: GroupElement) -> RationalMatrix:
    key = (rep.descriptor, g.matrix)
    op = _OP_CACHE.get(key)
    if op is None:
        if len(_OP_CACHE) > 4096:
            _OP_CACHE.clear()
        op = rep.evaluator(g)
        _OP_CACHE[key] = op
    return op


def _check_sizes(rep: Representation, U: Subspace, gs: Sequence[GroupElement]) -> None:
    if U.ambient_dim != rep.dim:
        raise DimensionError(f"subspace ambient dimension {U.ambient_dim} != representation dimension {rep.dim}")
    for g in gs:
        if g.n != rep.group_n:
            raise DimensionError(f"group element of size {g.n} for a representation of GL_{rep.group_n}")


def _translate_rows(rep: Representation, U: Subspace, gs: Sequence[GroupElement]) -> list[list[int]]:
    rows: list[list[int]] = []
    for g in gs:
        rows.extend(image_rows(_operator(rep, g), U))
    return rows


def translate_sum(rep: Representation, U: Subspace, gs: Sequence[GroupElement]) -> Subspace:
    """rho(g_1) U + ... + rho(g_d) U."""
    _check_sizes(rep, U, gs)
    return _from_int_rows(rep.dim, _translate_rows(rep, U, gs))


def spans(rep: Representation, U: Subspace, gs: Sequence[GroupElement]) -> bool:
    _check_sizes(rep, U, gs)
    if U.dim * len(gs) < rep.dim:
        return False
    return sum_dim(rep.dim, _translate_rows(rep, U, gs)) == rep.dim


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass
class Obstruction:
    """Lower-bound evidence. ``bound`` is the diameter lower bound it proves."""

    kind: str
    bound: float | int
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "bound": _value_json(self.bound), "data": self.data}

    @classmethod
    def from_json(cls, obj: dict) -> "Obstruction":
        return cls(obj["kind"], _value_from_json(obj["bound"]), obj.get("data", {}))


def _value_json(v):
    return "Infinite" if v == INFINITE else int(v)


def _value_from_json(v):
    return INFINITE if v == "Infinite" else int(v)


def _digest(obj) -> str:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def _witness_json(g: GroupElement) -> dict:
    out = {"matrix": g.matrix.to_json()}
    if g.label:
        out["label"] = g.label
    return out


def _witness_from_json(obj) -> GroupElement:
    return GroupElement(RationalMatrix.from_json(obj["matrix"]), label=obj.get("label"))


@dataclass
class Certificate:
    """Evidence about diam(rep, U).

    ``kind`` is UpperBound (witnesses only), LowerBound (obstruction only) or
    Exact (both, with matching values).
    """

    kind: str
    value: float | int
    rep: Representation
    subspace: Subspace
    witnesses: list = field(default_factory=list)
    obstruction: Obstruction | None = None

    @property
    def inputs_digest(self) -> str:
        return _digest({"rep": self.rep.descriptor, "subspace": self.subspace.to_json()})

    def body(self) -> dict:
        return {
            "schema": SCHEMA,
            "type": "group",
            "kind": self.kind,
            "value": _value_json(self.value),
            "rep": self.rep.descriptor,
            "subspace": self.subspace.to_json(),
            "witnesses": [_witness_json(g) for g in self.witnesses],
            "obstruction": self.obstruction.to_json() if self.obstruction else None,
            "inputs_digest": self.inputs_digest,
        }

    def to_json(self) -> dict:
        body = self.body()
        body["digest"] = _digest(body)
        return body

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, obj: dict) -> "Certificate":
        rep = parse_rep(obj["rep"])
        return cls(
            obj["kind"],
            _value_from_json(obj["value"]),
            rep,
            Subspace.from_json(obj["subspace"]),
            [_witness_from_json(w) for w in obj.get("witnesses", [])],
            Obstruction.from_json(obj["obstruction"]) if obj.get("obstruction") else None,
        )

    def replay(self) -> bool:
        return verify_certificate(self)[0]


def _upper(rep, U, gs, strategy: str) -> Certificate:
    cert = Certificate("UpperBound", len(gs), rep, U, list(gs))
    # mandatory self-check before anything leaves this module
    if not spans(rep, U, gs):
        raise AssertionError(f"strategy {strategy} produced witnesses that do not replay")
    return cert


def combine(lower: Certificate, upper: Certificate) -> Certificate:
    if lower.value != upper.value:
        raise ValueError(f"lower bound {lower.value} and upper bound {upper.value} differ")
    return Certificate("Exact", upper.value, upper.rep, upper.subspace, upper.witnesses, lower.obstruction)


# ---------------------------------------------------------------------------
# upper bounds
# ---------------------------------------------------------------------------


def sl2_shift_witnesses(k: int, d: int) -> list[GroupElement]:
    """Lower unipotent shifts (1 0; a 1) for a = 0, 1, ..., ceil((k+1)/d) - 1."""
    if not 1 <= d <= k + 1:
        raise ValueError(f"need 1 <= d <= k+1, got d={d}, k={k}")
    count = -(-(k + 1) // d)
    return [unipotent_shift(k, a) for a in range(count)]


def _explicit_witnesses(rep: Representation, U: Subspace) -> dict[str, Callable[[], list]]:
    """Named witness constructions applicable to ``rep``."""
    I = rep.identity()
    out: dict[str, Callable[[], list]] = {"identity": lambda: [I]}
    if rep.kind == "sl2":
        k = rep.params[0]
        if U.dim:
            out["sl2_shift"] = lambda: sl2_shift_witnesses(k, U.dim)
    elif rep.kind == "conj":
        space, n = rep.params
        if space == "sln":
            out["flip"] = lambda: [I, flip_matrix(n)]
            out["zero_diag"] = lambda: [I, elementary_product(n)]
            if n >= 3:
                out["flip_longcycle"] = lambda: [I, flip_matrix(n), long_cycle(n).inv()]
                out["rowcol"] = lambda: [I, transposition(n, 1, n), transposition(n, 2, n)]
        elif n == 2:
            e21 = GroupElement(RationalMatrix([[1, 0], [1, 1]]), RationalMatrix([[1, 0], [-1, 1]]), label="I+E21")
            out["gl2"] = lambda: [I, flip_matrix(2), e21]
    return out


EXPLICIT_STRATEGIES = ("identity", "sl2_shift", "flip", "zero_diag", "flip_longcycle", "rowcol", "gl2")


def certify_upper(
    rep: Representation,
    U: Subspace,
    k: int,
    strategy: str = "random",
    seed: int = 0,
    trials: int = 30,
    entry_range: int = 10,
) -> Certificate | NotFound:
    """Look for at most ``k`` witnesses.

    ``strategy`` is ``"random"`` or the name of an explicit construction
    (see :data:`EXPLICIT_STRATEGIES`).
    """
    _check_sizes(rep, U, [])
    if U.dim == 0:
        return NotFound("zero subspace")
    if strategy != "random":
        table = _explicit_witnesses(rep, U)
        if strategy not in table:
            return NotFound(f"strategy {strategy} does not apply to {rep.descriptor}")
        gs = table[strategy]()
        if len(gs) > k or not spans(rep, U, gs):
            return NotFound(f"strategy {strategy} does not span within {k}")
        return _upper(rep, U, gs, strategy)
    if k * U.dim < rep.dim:
        return NotFound("too few translates for dimension reasons")
    if U.is_full():
        return _upper(rep, U, [rep.identity()], "random")
    rng = random.Random(seed)
    H = entry_range
    for trial in range(trials):
        # translating all witnesses by g_1^{-1} shows g_1 = I loses nothing
        gs = [rep.identity()] + [random_group_element(rng, rep.group_n, H) for _ in range(k - 1)]
        if spans(rep, U, gs):
            return _upper(rep, U, gs, "random")
        if trial % 10 == 9:
            H *= 2
    return NotFound(f"{trials} random trials with {k} witnesses failed")


# ---------------------------------------------------------------------------
# lower bounds
# ---------------------------------------------------------------------------


def lower_ceiling(dim_V: int, dim_U: int) -> int:
    if dim_U <= 0:
        raise ValueError("dimension bound needs dim U >= 1")
    return -(-dim_V // dim_U)


def invariant_core(rep: Representation, U: Subspace) -> Subspace:
    """Largest subspace of U stable under every lie_evaluator(x), x in the Lie basis."""
    ops = rep.lie_operators()
    W = U
    while W.dim:
        vecs = W.vectors()
        # coefficient c keeps sum c_i w_i iff every residual sum c_i r(x w_i) vanishes
        cols = []
        for op in ops:
            residuals = [reduce_vector(W, op @ v) for v in vecs]
            cols.extend(zip(*residuals))
        if not any(any(c) for c in cols):
            return W
        kernel = nullspace(RationalMatrix._raw(tuple(tuple(c) for c in cols), len(vecs)))
        rows = [[sum((c * v[j] for c, v in zip(coeffs, vecs)), Fraction(0)) for j in range(W.ambient_dim)] for coeffs in kernel]
        W_new = _from_int_rows(W.ambient_dim, [integer_row(r) for r in rows])
        if W_new.dim == W.dim:
            return W
        W = W_new
    return W


def lower_invariant_core(rep: Representation, U: Subspace, W: Subspace | None = None):
    """ceil((dim V - dim W) / (dim U - dim W)), or Infinite/1 when U is itself invariant."""
    W = invariant_core(rep, U) if W is None else W
    if W.dim == U.dim:
        return 1 if U.dim == rep.dim else INFINITE
    return -(-(rep.dim - W.dim) // (U.dim - W.dim))


@dataclass(frozen=True)
class Witness:
    perm: tuple


class NoPermutationPair:
    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "NoPermutationPair()"


def weyl_pair_search(n: int, U: Subspace) -> Witness | NoPermutationPair:
    """Scan permutations w for U + wUw^-1 = sl_n.

    For Borel-stable U any pair of translates reduces to such a w (Bruhat
    decomposition), so NoPermutationPair proves the diameter is at least 3.
    """
    if n > 7:
        raise PreconditionError("weyl_pair_search scans n! permutations; n <= 7 required")
    rep = conj_rep(n, "sln")
    if U.ambient_dim != rep.dim:
        raise DimensionError(f"expected a subspace of sl_{n}")
    if not is_borel_stable(rep, U):
        raise PreconditionError("weyl_pair_search requires a Borel-stable subspace (Bruhat reduction)")
    base = U.integer_rows()
    if 2 * U.dim >= rep.dim:
        for perm in permutations(range(1, n + 1)):
            w = permutation(perm)
            if sum_dim(rep.dim, base + image_rows(rep.evaluator(w), U)) == rep.dim:
                return Witness(perm)
    return NoPermutationPair()


# -- pairing families --------------------------------------------------------
#
# For conj on sl_n, U + gUg^-1 != sl_n as soon as some nonzero traceless Z is
# trace-orthogonal to both U and gUg^-1. A pairing family gives Z = Z1(h) as
# a linear function of h = adj(g), together with Z2(h) = g^-1 Z1(h) g, also
# linear in h. Replay checks: Z1, Z2 traceless and orthogonal to U
# coefficientwise, Z1(adj g) g = g Z2(adj g) as a polynomial identity, and one
# full row of h is recoverable from the entries of Z1 (so Z1 != 0 for
# invertible g).


def _lin_json(terms: dict) -> dict:
    return {f"{a},{b}": m.to_json() for (a, b), m in sorted(terms.items())}


def _lin_from_json(obj: dict) -> dict:
    return {tuple(int(x) for x in key.split(",")): RationalMatrix.from_json(m) for key, m in obj.items()}


def rowcol_pairing_family(n: int, r: int) -> dict:
    """Pairing family for subspaces of matrices with zero row r and column r.

    Z1 = e_r (row r of h) - (h_rr/n) I and Z2 = (column r of h) e_r^T - (h_rr/n) I.
    """
    z1: dict = {}
    z2: dict = {}
    for j in range(1, n + 1):
        z1[(r, j)] = E(n, r, j)
        z2[(j, r)] = E(n, j, r)
    scal = RationalMatrix.identity(n).scale(Fraction(-1, n))
    z1[(r, r)] = z1[(r, r)] + scal
    z2[(r, r)] = z2[(r, r)] + scal
    return {"n": n, "z1": _lin_json(z1), "z2": _lin_json(z2), "row": r}


def check_pairing_family(rep: Representation, U: Subspace, data: dict) -> bool:
    """Replay a pairing family; True proves U + gUg^-1 != sl_n for every g."""
    import sympy

    if rep.kind != "conj" or rep.params[0] != "sln":
        return False
    n = rep.params[1]
    if data.get("n") != n or U.ambient_dim != rep.dim or U.is_full():
        return False
    z1 = _lin_from_json(data["z1"])
    z2 = _lin_from_json(data["z2"])
    coords: SlnCoords = rep.coords
    mats = [coords.matrix_of(v) for v in U.vectors()]
    for fam in (z1, z2):
        for (a, b), C in fam.items():
            if not (1 <= a <= n and 1 <= b <= n) or C.shape != (n, n):
                return False
            if C.trace() != 0 or any((C @ A).trace() != 0 for A in mats):
                return False
    # Z1 != 0 whenever row r of h is nonzero
    r = int(data["row"])
    forms = []
    for p in range(n):
        for q in range(n):
            forms.append([z1[(a, b)][p, q] if (a, b) in z1 else Fraction(0) for a in range(1, n + 1) for b in range(1, n + 1)])
    span_forms = _from_int_rows(n * n, [integer_row(f) for f in forms])
    for j in range(1, n + 1):
        unit = [0] * (n * n)
        unit[(r - 1) * n + (j - 1)] = 1
        if any(reduce_vector(span_forms, unit)):
            return False
    g = sympy.Matrix(n, n, lambda i, j: sympy.Symbol(f"g{i}_{j}"))
    h = g.adjugate()

    def evaluate(fam):
        acc = sympy.zeros(n, n)
        for (a, b), C in fam.items():
            acc += h[a - 1, b - 1] * sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in C])
        return acc

    diff = (evaluate(z1) * g - g * evaluate(z2)).applyfunc(sympy.expand)
    return diff == sympy.zeros(n, n)


def pairing_family_for(rep: Representation, U: Subspace) -> dict | None:
    """A pairing family from the built-in library applicable to U, if any."""
    if rep.kind != "conj" or rep.params[0] != "sln" or rep.params[1] > 6:
        return None
    n = rep.params[1]
    for r in (n, *range(1, n)):
        zero_rc = last_rowcol_zero(n) if r == n else _swap(rep, last_rowcol_zero(n), n, r)
        if U.dim and all(not any(reduce_vector(zero_rc, v)) for v in U.vectors()):
            return rowcol_pairing_family(n, r)
    return None


def _swap(rep, U, n, r):
    return translate_sum(rep, U, [transposition(n, r, n)])


# ---------------------------------------------------------------------------
# replay
# ---------------------------------------------------------------------------


def check_obstruction(rep: Representation, U: Subspace, ob: Obstruction) -> bool:
    """Recompute the lower bound claimed by an obstruction from scratch."""
    if U.is_full():
        return ob.bound == 1
    if ob.kind == "CeilingDim":
        return U.dim > 0 and ob.bound == lower_ceiling(rep.dim, U.dim)
    if ob.kind == "InvariantCore":
        W = invariant_core(rep, U)
        if Subspace.from_json(ob.data["W"]) != W:
            return False
        return ob.bound == lower_invariant_core(rep, U, W)
    if ob.kind == "SubrepTrap":
        Z = lie_closure(rep, U)
        return ob.bound == INFINITE and not Z.is_full() and Subspace.from_json(ob.data["Z"]) == Z
    if ob.kind == "WeylExhaustive":
        if rep.kind != "conj" or rep.params[0] != "sln":
            return False
        try:
            res = weyl_pair_search(rep.params[1], U)
        except PreconditionError:
            return False
        return isinstance(res, NoPermutationPair) and ob.bound == 3
    if ob.kind == "PairingFamily":
        return ob.bound == 3 and check_pairing_family(rep, U, ob.data)
    return False


def verify_certificate(cert: Certificate | dict) -> tuple[bool, str]:
    """Replay a certificate (object or JSON dict). Returns (ok, message)."""
    if isinstance(cert, dict):
        obj = cert
        if obj.get("schema") != SCHEMA:
            return False, "unknown schema"
        claimed = obj.get("digest")
        body = {k: v for k, v in obj.items() if k != "digest"}
        if claimed != _digest(body):
            return False, "digest mismatch (certificate was modified)"
        try:
            cert = Certificate.from_json(obj)
        except (ValueError, KeyError, ZeroDivisionError) as exc:
            return False, f"malformed certificate: {exc}"
        if obj.get("inputs_digest") != cert.inputs_digest:
            return False, "inputs digest mismatch"
    rep, U = cert.rep, cert.subspace
    if U.ambient_dim != rep.dim:
        return False, "subspace does not live in the representation space"
    if cert.kind in ("UpperBound", "Exact"):
        if not cert.witnesses or len(cert.witnesses) > cert.value:
            return False, "witness count exceeds the claimed value"
        try:
            ok = spans(rep, U, cert.witnesses)
        except DimensionError as exc:
            return False, str(exc)
        if not ok:
            return False, "witness translates do not span V"
    if cert.kind in ("LowerBound", "Exact"):
        if cert.obstruction is None:
            return False, "missing obstruction"
        if cert.obstruction.bound != cert.value:
            return False, "obstruction bound differs from the claimed value"
        if not check_obstruction(rep, U, cert.obstruction):
            return False, f"obstruction {cert.obstruction.kind} does not replay"
    if cert.kind not in ("UpperBound", "LowerBound", "Exact"):
        return False, f"unknown kind {cert.kind}"
    return True, "ok"


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------


def best_lower(rep: Representation, U: Subspace) -> Certificate:
    """Strongest lower-bound certificate from the available obstructions."""
    if U.is_full():
        return Certificate("LowerBound", 1, rep, U, obstruction=Obstruction("CeilingDim", 1))
    # for an irreducible rep, a nonzero U has full closure and zero invariant core
    skip = rep.irreducible and U.dim > 0
    Z = None if skip else lie_closure(rep, U)
    if Z is not None and not Z.is_full():
        # every translate stays inside the proper subrepresentation Z
        ob = Obstruction("SubrepTrap", INFINITE, {"Z": Z.to_json()})
        return Certificate("LowerBound", INFINITE, rep, U, obstruction=ob)
    W = zero_subspace(rep.dim) if skip else invariant_core(rep, U)
    best = Obstruction("CeilingDim", lower_ceiling(rep.dim, U.dim))
    if W.dim:
        b = lower_invariant_core(rep, U, W)
        if b > best.bound:
            best = Obstruction("InvariantCore", b, {"W": W.to_json()})
    if best.bound < 3 and rep.kind == "conj" and rep.params[0] == "sln":
        n = rep.params[1]
        if n <= 7 and is_borel_stable(rep, U):
            if isinstance(weyl_pair_search(n, U), NoPermutationPair):
                best = Obstruction("WeylExhaustive", 3, {"n": n, "permutations": factorial(n)})
        if best.bound < 3:
            fam = pairing_family_for(rep, U)
            if fam is not None and check_pairing_family(rep, U, fam):
                best = Obstruction("PairingFamily", 3, fam)
    return Certificate("LowerBound", best.bound, rep, U, obstruction=best)


def find_upper(rep, U, k, seed=0, trials=30, entry_range=10) -> Certificate | NotFound:
    """Explicit constructions first, then random witnesses, all with at most k translates."""
    for name in _explicit_witnesses(rep, U):
        res = certify_upper(rep, U, k, strategy=name)
        if res:
            return res
    return certify_upper(rep, U, k, "random", seed=seed, trials=trials, entry_range=entry_range)


def diameter(rep: Representation, U: Subspace, max_k: int = 12, seed: int = 0, trials: int = 30):
    """Exact certificate when the bounds meet, else a (lower, upper-or-None) pair."""
    _check_sizes(rep, U, [])
    lower = best_lower(rep, U)
    if lower.value == INFINITE:
        return lower, None
    upper = None
    for k in range(int(lower.value), max_k + 1):
        res = find_upper(rep, U, k, seed=seed, trials=trials)
        if res:
            upper = res
            break
    if upper is not None and upper.value == lower.value:
        return combine(lower, upper)
    return lower, upper


# ---------------------------------------------------------------------------
# Hermite interpolation matrix
# ---------------------------------------------------------------------------


def confluent_vandermonde(k: int, d: int, nodes: Sequence) -> RationalMatrix:
    """(k+1) x (len(nodes) d) matrix of blocks [d^i/da^i a^j] (rows j = 0..k, block columns i < d)."""
    if len(nodes) != -(-(k + 1) // d):
        raise ValueError(f"need ceil((k+1)/d) = {-(-(k + 1) // d)} nodes, got {len(nodes)}")
    nodes = [Fraction(a) for a in nodes]
    rows = []
    for j in range(k + 1):
        row = []
        for a in nodes:
            for i in range(d):
                row.append(Fraction(math.perm(j, i)) * a ** (j - i) if j >= i else Fraction(0))
        rows.append(tuple(row))
    return RationalMatrix._raw(tuple(rows), len(nodes) * d)


# ---------------------------------------------------------------------------
# tiling by permutation conjugates
# ---------------------------------------------------------------------------


def _positions(n: int, i: int, j: int) -> set:
    """Off-diagonal positions of B_ij (rows <= i, columns >= j)."""
    return {(a, b) for a in range(1, i + 1) for b in range(j, n + 1) if a != b}


def _conj_positions(perm: dict, pos: set) -> set:
    return {(perm.get(a, a), perm.get(b, b)) for a, b in pos}


def _block_swap(left: Sequence[int], right: Sequence[int]) -> dict:
    perm = {}
    for a, b in zip(left, right):
        perm[a], perm[b] = b, a
    return perm


@dataclass
class TilingStep:
    name: str
    target: tuple  # (i, j) of the block B_ij claimed
    diag_size: int
    missing: list

    @property
    def ok(self) -> bool:
        return not self.missing and self.diag_size <= 1


@dataclass
class TilingPlan:
    n: int
    k: int
    ell: int
    m: int
    t: int
    s: int
    sigmas: list
    taus: list
    swaps: list
    steps: list
    extra_taus: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(st.ok for st in self.steps)

    @property
    def witness_count(self) -> int:
        """Conjugates counted as t + s + 2 + 8 (the lemma contributes 8)."""
        return len(self.sigmas) + len(self.taus) + len(self.extra_taus) + len(self.swaps) + 8

    @property
    def nested_translates(self) -> int:
        """U-conjugates actually summed before the lemma step: (t+1)(s+1)*3."""
        return (len(self.sigmas) + 1) * (len(self.taus) + len(self.extra_taus) + 1) * 3

    def permutations(self) -> list[GroupElement]:
        def elem(p):
            return permutation([p.get(i, i) for i in range(1, self.n + 1)])

        return [elem(p) for p in self.sigmas + self.taus + self.extra_taus + self.swaps]


def tiling_plan(n: int, k: int, ell: int | None = None, repair: bool = False) -> TilingPlan:
    """Tile B_{k,ell} up to the basic block by swapping column and row blocks.

    Every containment of the chain is checked on off-diagonal index sets and
    recorded in ``steps``; ``repair`` appends two row swaps that close the
    last row block (see the step named ``rows-final``).
    """
    if k < 1:
        raise PreconditionError("block size k must be positive")
    ell = n - k if ell is None else ell
    m = (n + 1) // 2
    if not k < m - 1 < ell:
        raise PreconditionError(f"degenerate ranges: need k < m-1 < ell (k={k}, m={m}, ell={ell})")
    if n - ell != k:
        raise PreconditionError("the column blocks have k+1 entries, so ell must equal n - k")
    U = _positions(n, k, ell)
    steps: list[TilingStep] = []

    def record(name, i, j, have):
        want = _positions(n, i, j)
        steps.append(TilingStep(name, (i, j), max(0, i - j + 1), sorted(want - have)))

    # columns: B_0 = (n..ell), B_t = (n - t(k+1) .. ell - t(k+1))
    sigmas = []
    V = set(U)
    t = 0
    while ell - t * (k + 1) >= m:
        t += 1
        block0 = [n - r for r in range(k + 1)]
        block_t = [n - t * (k + 1) - r for r in range(k + 1)]
        if min(block_t) <= k:
            raise PreconditionError(f"degenerate ranges: column block {t} meets the first {k} rows")
        sigma = _block_swap(block0, block_t)
        sigmas.append(sigma)
        V |= _conj_positions(sigma, U)
        record(f"columns-{t}", k, ell - t * (k + 1), V)
    record("columns-final", k, m - 1, V)

    # rows: C_0 = (1..k), C_s = (1 + sk .. k + sk), until k + sk >= m - 1
    taus = []
    W = set(V)
    s = 0
    while k + s * k < m - 1:
        s += 1
        block_s = [1 + s * k + r for r in range(k)]
        if max(block_s) > n:
            raise PreconditionError("degenerate ranges: row blocks leave the matrix")
        tau = _block_swap(range(1, k + 1), block_s)
        taus.append(tau)
        W |= _conj_positions(tau, V)
        if k + s * k < m - 1:
            record(f"rows-{s}", k + s * k, m - 1, W)
    extra = []
    if repair:
        for block in ([m - k + r for r in range(k)], [m - 1 - k + r for r in range(k)]):
            if min(block) <= k:
                raise PreconditionError("degenerate ranges: repair block meets the first rows")
            tau = _block_swap(range(1, k + 1), block)
            extra.append(tau)
            W |= _conj_positions(tau, V)
    record("rows-final", m - 1, m - 1, W)

    swap1 = {1: m, m: 1}
    swap2 = {1: m + 1, m + 1: 1}
    X = W | _conj_positions(swap1, W)
    record("swap-m", m, m, X)
    X |= _conj_positions(swap2, W)
    record("swap-m+1", m + 1, m + 1, X)
    target = _positions(n, m, m) | (_positions(n, m + 1, m + 1) if n % 2 == 0 else set())
    steps.append(TilingStep("basic-block", (m, m), 1, sorted(target - X)))
    return TilingPlan(n, k, ell, m, t, s, sigmas, taus, [swap1, swap2], steps, extra)


def tiling_witnesses(n: int, k_block: int, ell: int | None = None) -> list[GroupElement]:
    """sigma family, tau family, then the swaps e_1<->e_m and e_1<->e_{m+1}."""
    return tiling_plan(n, k_block, ell).permutations()
