"""Lie-additive diameters: elementary, monomial and associative translates.

Counting conventions: an elementary witness r_1..r_d certifies d + 1 (the
untranslated U is always a summand); a monomial or associative witness with d
entries certifies d.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .exactlin import (
    DimensionError,
    RationalMatrix,
    Subspace,
    _from_int_rows,
    integer_row,
    nullspace,
    reduce_vector,
    span,
    sum_dim,
)
from .groupdiam import INFINITE, SCHEMA, NotFound, Obstruction, _digest, _value_from_json, _value_json, lower_ceiling
from .repkit import E, Representation, SlnCoords, flip_matrix, image_rows, parse_rep
from .spaces import lie_closure

VARIANTS = ("elem", "mon", "ass")


@dataclass
class LieWitness:
    """``items``: Lie elements (elem), lists of Lie elements (mon) or operators on V (ass)."""

    variant: str
    items: list

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")

    @property
    def count(self) -> int:
        return len(self.items) + 1 if self.variant == "elem" else len(self.items)

    def to_json(self) -> dict:
        if self.variant == "mon":
            items = [[x.to_json() for x in mono] for mono in self.items]
        else:
            items = [x.to_json() for x in self.items]
        return {"variant": self.variant, "items": items}

    @classmethod
    def from_json(cls, obj: dict) -> "LieWitness":
        if obj["variant"] == "mon":
            items = [[RationalMatrix.from_json(x) for x in mono] for mono in obj["items"]]
        else:
            items = [RationalMatrix.from_json(x) for x in obj["items"]]
        return cls(obj["variant"], items)


def _ops(rep: Representation, w: LieWitness) -> list[RationalMatrix]:
    n = rep.group_n
    if w.variant == "ass":
        for a in w.items:
            if a.shape != (rep.dim, rep.dim):
                raise DimensionError(f"associative witnesses act on V (dimension {rep.dim})")
        return list(w.items)

    def lie_op(x: RationalMatrix) -> RationalMatrix:
        if x.shape != (n, n):
            raise DimensionError(f"Lie elements of gl_{n} are {n}x{n}")
        return rep.lie_evaluator(x)

    if w.variant == "elem":
        return [RationalMatrix.identity(rep.dim)] + [lie_op(x) for x in w.items]
    out = []
    for mono in w.items:
        op = RationalMatrix.identity(rep.dim)
        for x in mono:  # x_1 x_2 ... x_k acts right to left
            op = op @ lie_op(x)
        out.append(op)
    return out


def _sum_rows(rep, U, ops) -> list[list[int]]:
    rows = []
    for op in ops:
        rows.extend(image_rows(op, U))
    return rows


def lie_translate_sum(rep: Representation, U: Subspace, w: LieWitness) -> Subspace:
    if U.ambient_dim != rep.dim:
        raise DimensionError("subspace does not live in the representation space")
    if w.variant == "elem" and not w.items:
        return U
    return _from_int_rows(rep.dim, _sum_rows(rep, U, _ops(rep, w)))


def _spans(rep, U, w) -> bool:
    if U.dim * w.count < rep.dim:
        return False
    return sum_dim(rep.dim, _sum_rows(rep, U, _ops(rep, w))) == rep.dim


def elementary_reach(rep: Representation, U: Subspace) -> Subspace:
    """R = U + span{x u}: every elementary sum lies in R."""
    rows = U.integer_rows()
    for op in rep.lie_operators():
        rows += image_rows(op, U)
    return _from_int_rows(rep.dim, rows)


def elementary_infinity_check(rep: Representation, U: Subspace) -> str:
    return "Finite_possible" if elementary_reach(rep, U).is_full() else "Infinite"


def stable_kernel(rep: Representation, U: Subspace) -> Subspace:
    """K = {u in U : x u in U for every Lie basis element x}."""
    vecs = U.vectors()
    if not vecs:
        return U
    cols = []
    for op in rep.lie_operators():
        cols.extend(zip(*[reduce_vector(U, op @ v) for v in vecs]))
    if not any(any(c) for c in cols):
        return U
    ker = nullspace(RationalMatrix._raw(tuple(tuple(c) for c in cols), len(vecs)))
    rows = [[sum((c * v[j] for c, v in zip(coeffs, vecs)), Fraction(0)) for j in range(U.ambient_dim)] for coeffs in ker]
    return _from_int_rows(U.ambient_dim, [integer_row(r) for r in rows])


def elementary_cap_bound(dim_V: int, dim_U: int, dim_K: int) -> int:
    """Least summand count allowed by dim(U + sum_i x_i U) <= dim U + d (dim U - dim K)."""
    if dim_U == dim_K:
        return INFINITE if dim_U < dim_V else 1
    return 1 + max(0, -(-(dim_V - dim_U) // (dim_U - dim_K)))


def associative_closure(rep: Representation) -> Subspace:
    """Span of all products of lie_evaluator images (operators flattened row-major)."""
    gens = list(rep.lie_operators())
    d = rep.dim

    def flat(m):
        return [x for r in m for x in r]

    def unflat(v):
        return RationalMatrix._raw(tuple(tuple(v[i * d:(i + 1) * d]) for i in range(d)), d)

    ident = RationalMatrix.identity(d)
    S = _from_int_rows(d * d, [integer_row(flat(g)) for g in gens] + [integer_row(flat(ident))])
    while True:
        basis = [unflat(v) for v in S.vectors()]
        rows = S.integer_rows() + [integer_row(flat(g @ b)) for g in gens for b in basis]
        S2 = _from_int_rows(d * d, rows)
        if S2.dim == S.dim:
            return S
        S = S2


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass
class LieCertificate:
    kind: str
    variant: str
    value: float | int
    rep: Representation
    subspace: Subspace
    witness: LieWitness | None = None
    obstruction: Obstruction | None = None

    @property
    def inputs_digest(self) -> str:
        return _digest({"rep": self.rep.descriptor, "subspace": self.subspace.to_json()})

    def to_json(self) -> dict:
        body = {
            "schema": SCHEMA,
            "type": "lie",
            "kind": self.kind,
            "variant": self.variant,
            "value": _value_json(self.value),
            "rep": self.rep.descriptor,
            "subspace": self.subspace.to_json(),
            "witness": self.witness.to_json() if self.witness else None,
            "obstruction": self.obstruction.to_json() if self.obstruction else None,
            "inputs_digest": self.inputs_digest,
        }
        body["digest"] = _digest(body)
        return body

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, obj: dict) -> "LieCertificate":
        return cls(
            obj["kind"],
            obj["variant"],
            _value_from_json(obj["value"]),
            parse_rep(obj["rep"]),
            Subspace.from_json(obj["subspace"]),
            LieWitness.from_json(obj["witness"]) if obj.get("witness") else None,
            Obstruction.from_json(obj["obstruction"]) if obj.get("obstruction") else None,
        )


def _check_lie_obstruction(rep, U, variant, ob: Obstruction) -> bool:
    if U.is_full():
        return ob.bound == 1
    if ob.kind == "CeilingDim":
        return U.dim > 0 and ob.bound == lower_ceiling(rep.dim, U.dim)
    if ob.kind == "LieClosure":
        return ob.bound == INFINITE and not lie_closure(rep, U).is_full()
    if ob.kind == "ElementaryReach":
        return variant == "elem" and ob.bound == INFINITE and not elementary_reach(rep, U).is_full()
    if ob.kind == "RankCap":
        if variant != "elem":
            return False
        K = stable_kernel(rep, U)
        if Subspace.from_json(ob.data["K"]) != K:
            return False
        return ob.bound == elementary_cap_bound(rep.dim, U.dim, K.dim)
    return False


def verify_lie_certificate(cert: LieCertificate | dict) -> tuple[bool, str]:
    if isinstance(cert, dict):
        obj = cert
        body = {k: v for k, v in obj.items() if k != "digest"}
        if obj.get("digest") != _digest(body):
            return False, "digest mismatch (certificate was modified)"
        try:
            cert = LieCertificate.from_json(obj)
        except (ValueError, KeyError) as exc:
            return False, f"malformed certificate: {exc}"
    rep, U = cert.rep, cert.subspace
    if cert.kind in ("UpperBound", "Exact"):
        w = cert.witness
        if w is None or w.variant != cert.variant or w.count > cert.value:
            return False, "witness missing or too large"
        if w.variant == "ass":
            closure = associative_closure(rep)
            for a in w.items:
                if any(reduce_vector(closure, [x for r in a for x in r])):
                    return False, "associative witness outside the generated algebra"
        try:
            if not _spans(rep, U, w):
                return False, "witness translates do not span V"
        except DimensionError as exc:
            return False, str(exc)
    if cert.kind in ("LowerBound", "Exact"):
        ob = cert.obstruction
        if ob is None or ob.bound != cert.value:
            return False, "obstruction missing or inconsistent"
        if not _check_lie_obstruction(rep, U, cert.variant, ob):
            return False, f"obstruction {ob.kind} does not replay"
    return True, "ok"


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------


def _random_lie(rng: random.Random, rep: Representation, H: int = 5) -> RationalMatrix:
    n = rep.group_n
    acc = RationalMatrix.zeros(n, n)
    for x in rep.lie_basis:
        acc = acc + x.scale(rng.randint(-H, H))
    return acc


def structured_monomials(rep: Representation, U: Subspace) -> list[LieWitness]:
    out = []
    if rep.kind == "sl2" and U.dim:
        k = rep.params[0]
        f = RationalMatrix([[0, 0], [1, 0]])
        d = U.dim
        count = -(-(k + 1) // d)
        out.append(LieWitness("mon", [[f] * (d * i) for i in range(count)]))
    if rep.kind == "conj":
        F = flip_matrix(rep.group_n).matrix
        out.append(LieWitness("mon", [[], [F]]))
    return out


def lower_lie(rep: Representation, U: Subspace, variant: str) -> LieCertificate:
    def cert(ob):
        return LieCertificate("LowerBound", variant, ob.bound, rep, U, obstruction=ob)

    if U.is_full():
        return cert(Obstruction("CeilingDim", 1))
    if not lie_closure(rep, U).is_full():
        return cert(Obstruction("LieClosure", INFINITE))
    if variant == "elem":
        if not elementary_reach(rep, U).is_full():
            return cert(Obstruction("ElementaryReach", INFINITE))
        K = stable_kernel(rep, U)
        cap = elementary_cap_bound(rep.dim, U.dim, K.dim)
        if cap > lower_ceiling(rep.dim, U.dim):
            return cert(Obstruction("RankCap", cap, {"K": K.to_json()}))
    return cert(Obstruction("CeilingDim", lower_ceiling(rep.dim, U.dim)))


def certify_lie_upper(rep, U, variant, k, seed=0, trials=30, max_degree=3) -> LieCertificate | NotFound:
    """At most ``k`` summands: structured candidates, then random ones."""
    rng = random.Random(seed)
    candidates: list[LieWitness] = []
    if variant == "mon":
        candidates += [w for w in structured_monomials(rep, U) if w.count <= k]
    for _ in range(trials):
        if variant == "elem":
            candidates.append(LieWitness("elem", [_random_lie(rng, rep) for _ in range(k - 1)]))
        elif variant == "mon":
            monos = [[]] + [[_random_lie(rng, rep) for _ in range(rng.randint(1, max_degree))] for _ in range(k - 1)]
            candidates.append(LieWitness("mon", monos))
        else:
            candidates.append(LieWitness("ass", _random_associative(rng, rep, k)))
    for w in candidates:
        if _spans(rep, U, w):
            return LieCertificate("UpperBound", variant, w.count, rep, U, witness=w)
    return NotFound(f"no {variant} witness with {k} summands")


_CLOSURE_CACHE: dict = {}


def _random_associative(rng, rep, k) -> list[RationalMatrix]:
    key = rep.descriptor
    if key not in _CLOSURE_CACHE:
        _CLOSURE_CACHE[key] = associative_closure(rep)
    S = _CLOSURE_CACHE[key]
    d = rep.dim
    ops = [RationalMatrix.identity(d)]
    for _ in range(k - 1):
        v = [Fraction(0)] * (d * d)
        for b in S.vectors():
            c = rng.randint(-5, 5)
            if c:
                v = [x + c * y for x, y in zip(v, b)]
        ops.append(RationalMatrix._raw(tuple(tuple(v[i * d:(i + 1) * d]) for i in range(d)), d))
    return ops


def diameter_lie(rep: Representation, U: Subspace, variant: str, max_k: int = 12, seed: int = 0, trials: int = 30,
                 max_degree: int = 3):
    """Exact LieCertificate when bounds meet, else (lower, upper-or-None)."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    lower = lower_lie(rep, U, variant)
    if lower.value == INFINITE:
        return lower, None
    for k in range(int(lower.value), max_k + 1):
        up = certify_lie_upper(rep, U, variant, k, seed=seed, trials=trials, max_degree=max_degree)
        if up:
            if up.value == lower.value:
                return LieCertificate("Exact", variant, up.value, rep, U, up.witness, lower.obstruction)
            return lower, up
    return lower, None


# ---------------------------------------------------------------------------
# the sl_3 example and the square-zero identity
# ---------------------------------------------------------------------------


def sl3_example_subspace() -> Subspace:
    """span{E11 - E33, E12, E13, E23} in sl_3."""
    c = SlnCoords(3)
    return span(8, [c.diag_vector([1, 0, -1]), c.unit(1, 2), c.unit(1, 3), c.unit(2, 3)])


def sl3_example_witnesses() -> dict:
    a = E(3, 2, 2) - E(3, 3, 3) + E(3, 2, 1)
    b = E(3, 2, 1) + E(3, 3, 1) + E(3, 3, 2)
    return {
        "monomial": LieWitness("mon", [[], [a, b]]),
        # the monomial above reaches only dimension 7; flipping the sign of E21 in a repairs it
        "monomial_sign_corrected": LieWitness("mon", [[], [E(3, 2, 2) - E(3, 3, 3) - E(3, 2, 1), b]]),
        "elementary": LieWitness("elem", [E(3, 2, 1), E(3, 3, 1)]),
        # ad_x(E13) stays in U for every x, so dim ad_r U <= 3 and dim(U + ad_r U) <= 7
        "cap_element": E(3, 1, 3),
    }


def square_zero_translate_identity(u: RationalMatrix, x: RationalMatrix) -> bool:
    """2[u, x] == (I+x)^-1 u (I+x) - (I-x)^-1 u (I-x) for square-zero x."""
    n = x.rows
    if not (x @ x).is_zero():
        raise ValueError("x must satisfy x^2 = 0")
    I = RationalMatrix.identity(n)
    # (I + x)^-1 = I - x when x^2 = 0; computed independently anyway
    lhs = (u @ x - x @ u).scale(2)
    rhs = (I + x).inverse() @ u @ (I + x) - (I - x).inverse() @ u @ (I - x)
    return lhs == rhs
