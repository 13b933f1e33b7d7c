"""Equivariant polynomial maps f: W -> V and Waring-type covering bounds.

Coordinates of f are sparse polynomials over QQ (sympy ``PolyElement``).
Exact evaluation walks the term list with :class:`fractions.Fraction`;
the Newton solver evaluates the same terms in floating point.
"""

from __future__ import annotations

import ast
import json
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from .exactlin import (
    DimensionError,
    RationalMatrix,
    Subspace,
    _from_int_rows,
    integer_row,
    rank,
    reduce_vector,
    subspace_from_rows,
    to_fraction,
)
from .groupdiam import (
    INFINITE,
    SCHEMA,
    Certificate,
    _digest,
    diameter,
    verify_certificate,
)
from .repkit import (
    GroupElement,
    Representation,
    conj_rep,
    direct_sum,
    random_group_element,
    sl2_sym,
)
from .spaces import lie_closure


class EquivarianceError(ValueError):
    """The polynomial map failed the sampled equivariance test."""


class SubrepTrapError(ValueError):
    """The derivative image lies in a proper subrepresentation; no finite bound."""

    def __init__(self, Z: Subspace):
        super().__init__(f"derivative image trapped in a proper subrepresentation of dimension {Z.dim}")
        self.Z = Z


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _qq(x) -> object:
    x = to_fraction(x)
    return QQ(x.numerator, x.denominator)


class PolyMap:
    """Polynomial map with ``dim_V`` coordinates in ``dim_W`` variables.

    Construction samples 20 pairs (g, w) and requires
    f(lambda(g) w) = rho(g) f(w) exactly.
    """

    def __init__(self, coords, source_rep: Representation, target_rep: Representation, name: str = "f",
                 check: bool = True, seed: int = 0):
        coords = list(coords)
        if not coords:
            raise DimensionError("a polynomial map needs at least one coordinate")
        self.ring = coords[0].ring
        self.coords = tuple(coords)
        self.dim_W = self.ring.ngens
        self.dim_V = len(coords)
        self.source_rep = source_rep
        self.target_rep = target_rep
        self.name = name
        if source_rep.dim != self.dim_W or target_rep.dim != self.dim_V:
            raise DimensionError(
                f"map {name}: W has {self.dim_W} variables but source rep has dimension {source_rep.dim}, "
                f"V has {self.dim_V} coordinates but target rep has dimension {target_rep.dim}"
            )
        if source_rep.group_n != target_rep.group_n:
            raise DimensionError("source and target representations belong to different groups")
        self._terms = [[(e, _frac(c)) for e, c in p.terms()] for p in coords]
        self._dterms = None
        self._float = None
        if check:
            self.check_equivariance(samples=20, seed=seed)

    # -- evaluation ---------------------------------------------------------

    def _check_point(self, w) -> list[Fraction]:
        w = [to_fraction(x) for x in w]
        if len(w) != self.dim_W:
            raise DimensionError(f"map {self.name} takes {self.dim_W} coordinates, got {len(w)}")
        return w

    @staticmethod
    def _eval_terms(terms, w) -> Fraction:
        acc = Fraction(0)
        for exps, c in terms:
            t = c
            for x, e in zip(w, exps):
                if e:
                    t *= x ** e
                    if not t:
                        break
            acc += t
        return acc

    def eval(self, w: Sequence) -> tuple:
        w = self._check_point(w)
        return tuple(self._eval_terms(t, w) for t in self._terms)

    def _derivative_terms(self):
        if self._dterms is None:
            gens = self.ring.gens
            self._dterms = [
                [[(e, _frac(c)) for e, c in p.diff(x).terms()] for x in gens] for p in self.coords
            ]
        return self._dterms

    def jacobian(self, w: Sequence) -> RationalMatrix:
        """dim_V x dim_W matrix of partial derivatives at w."""
        w = self._check_point(w)
        rows = tuple(tuple(self._eval_terms(t, w) for t in row) for row in self._derivative_terms())
        return RationalMatrix._raw(rows, self.dim_W)

    def check_equivariance(self, samples: int = 20, seed: int = 0) -> None:
        rng = random.Random(seed)
        for _ in range(samples):
            g = random_group_element(rng, self.source_rep.group_n, 3)
            w = [Fraction(rng.randint(-3, 3)) for _ in range(self.dim_W)]
            lhs = self.eval(self.source_rep.evaluator(g) @ tuple(w))
            rhs = self.target_rep.evaluator(g) @ self.eval(w)
            if tuple(lhs) != tuple(rhs):
                raise EquivarianceError(f"map {self.name} is not equivariant (sample g={g.matrix!r})")

    def compose_affine(self, A: RationalMatrix, b: Sequence) -> "PolyMap":
        """w -> f(A w + b) as a plain polynomial map (no equivariance claimed)."""
        gens = self.ring.gens
        subs = []
        for i in range(self.dim_W):
            expr = self.ring(_qq(b[i]))
            for j in range(self.dim_W):
                if A[i, j]:
                    expr += _qq(A[i, j]) * gens[j]
            subs.append(expr)
        new = [p.compose(list(zip(gens, subs))) for p in self.coords]
        return PolyMap(new, self.source_rep, self.target_rep, f"{self.name}o(affine)", check=False)

    # -- floating point -----------------------------------------------------

    def _float_tables(self):
        if self._float is None:
            def table(terms):
                if not terms:
                    return np.zeros((0, self.dim_W)), np.zeros(0)
                return (np.array([e for e, _ in terms], dtype=float), np.array([float(c) for _, c in terms]))

            vals = [table(t) for t in self._terms]
            ders = [[table(t) for t in row] for row in self._derivative_terms()]
            self._float = (vals, ders)
        return self._float

    def eval_float(self, w: np.ndarray) -> np.ndarray:
        vals, _ = self._float_tables()
        return np.array([c @ np.prod(w ** E, axis=1) if len(c) else 0.0 for E, c in vals])

    def jacobian_float(self, w: np.ndarray) -> np.ndarray:
        _, ders = self._float_tables()
        return np.array([[c @ np.prod(w ** E, axis=1) if len(c) else 0.0 for E, c in row] for row in ders])


# ---------------------------------------------------------------------------
# derivative images
# ---------------------------------------------------------------------------


def jacobian(f: PolyMap, w: Sequence) -> RationalMatrix:
    return f.jacobian(w)


def evaluate(f: PolyMap, w: Sequence) -> tuple:
    return f.eval(w)


def derivative_image(f: PolyMap, w: Sequence) -> Subspace:
    J = f.jacobian(w)
    return subspace_from_rows(f.dim_V, J.T())


def orbit_tangent(f: PolyMap, w: Sequence) -> Subspace:
    """span{x . f(w)} over the Lie basis."""
    fw = f.eval(w)
    rep = f.target_rep
    return subspace_from_rows(f.dim_V, [rep.lie_evaluator(x) @ fw for x in rep.lie_basis])


def derivative_containment_check(f: PolyMap, w: Sequence, g: GroupElement | None = None) -> bool:
    """rho(g^-1) (D_g rho)(T_g G) f(w) is contained in im(D_w f).

    The tangent space at g is g.Lie, and D_g rho(g x) = rho(g) d rho(x), so the
    left side is computed literally as rho(g^-1) rho(g) d rho(x) f(w).
    """
    rep = f.target_rep
    g = g or rep.identity()
    fw = f.eval(w)
    rg, rgi = rep.evaluator(g), rep.evaluator(g.inv())
    vecs = [rgi @ (rg @ (rep.lie_evaluator(x) @ fw)) for x in rep.lie_basis]
    image = derivative_image(f, w)
    return all(not any(reduce_vector(image, v)) for v in vecs)


def equivariance_identity(f: PolyMap, w: Sequence, g: GroupElement) -> bool:
    """D_{lambda(g) w} f . lambda(g) == rho(g) . D_w f."""
    lam = f.source_rep.evaluator(g)
    lhs = f.jacobian(lam @ tuple(to_fraction(x) for x in w)) @ lam
    rhs = f.target_rep.evaluator(g) @ f.jacobian(w)
    return lhs == rhs


def stacked_jacobian(f: PolyMap, points: Sequence[Sequence]) -> RationalMatrix:
    """[D_{p_1} f | ... | D_{p_k} f], the derivative of (w_i) -> sum f(w_i)."""
    blocks = [f.jacobian(p) for p in points]
    rows = tuple(tuple(x for b in blocks for x in b.row(r)) for r in range(f.dim_V))
    return RationalMatrix._raw(rows, f.dim_W * len(points))


# ---------------------------------------------------------------------------
# Waring bounds
# ---------------------------------------------------------------------------


@dataclass
class WaringCertificate:
    """bound = 2 * k where k translates of im(D_w f) span V."""

    map_descriptor: str
    w: tuple
    inner: Certificate
    k_jacobian: int
    bound: int

    def points(self, f: PolyMap) -> list[tuple]:
        lam = f.source_rep
        return [lam.evaluator(g) @ self.w for g in self.inner.witnesses]

    def to_json(self) -> dict:
        body = {
            "schema": SCHEMA,
            "type": "waring",
            "map": self.map_descriptor,
            "w": [f"{x.numerator}/{x.denominator}" for x in self.w],
            "k_jacobian": self.k_jacobian,
            "bound": self.bound,
            "inner": self.inner.to_json(),
        }
        body["digest"] = _digest(body)
        return body

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, obj: dict) -> "WaringCertificate":
        return cls(obj["map"], tuple(Fraction(x) for x in obj["w"]), Certificate.from_json(obj["inner"]),
                   int(obj["k_jacobian"]), int(obj["bound"]))


def waring_bound(f: PolyMap, w: Sequence, seed: int = 0, max_k: int = 12, descriptor: str | None = None) -> WaringCertificate:
    w = tuple(to_fraction(x) for x in w)
    U = derivative_image(f, w)
    if U.dim == 0:
        raise ValueError("the derivative image at w is zero; pick another base point")
    res = diameter(f.target_rep, U, max_k=max_k, seed=seed)
    if isinstance(res, tuple):
        lower, upper = res
        if lower.value == INFINITE:
            raise SubrepTrapError(Subspace.from_json(lower.obstruction.data.get("Z") or lower.obstruction.data["W"]))
        if upper is None:
            raise RuntimeError(f"no translate witnesses found up to {max_k}")
        inner = upper
    else:
        inner = res
    k = len(inner.witnesses)
    cert = WaringCertificate(descriptor or f.name, w, inner, k, 2 * k)
    if rank(stacked_jacobian(f, cert.points(f))) != f.dim_V:
        raise AssertionError("stacked Jacobian does not have full rank; inner certificate inconsistent")
    return cert


def verify_waring(obj: dict | WaringCertificate) -> tuple[bool, str]:
    if isinstance(obj, dict):
        body = {k: v for k, v in obj.items() if k != "digest"}
        if obj.get("digest") != _digest(body):
            return False, "digest mismatch (certificate was modified)"
        try:
            cert = WaringCertificate.from_json(obj)
        except (ValueError, KeyError, ZeroDivisionError) as exc:
            return False, f"malformed certificate: {exc}"
        inner_ok = verify_certificate(obj["inner"])
    else:
        cert = obj
        inner_ok = verify_certificate(cert.inner)
    if not inner_ok[0]:
        return False, f"inner certificate: {inner_ok[1]}"
    try:
        f = parse_map(cert.map_descriptor)
    except ValueError as exc:
        return False, str(exc)
    if cert.inner.subspace != derivative_image(f, cert.w):
        return False, "inner certificate is not about im(D_w f)"
    if cert.k_jacobian != len(cert.inner.witnesses) or cert.bound != 2 * cert.k_jacobian:
        return False, "bound is not twice the witness count"
    if rank(stacked_jacobian(f, cert.points(f))) != f.dim_V:
        return False, "stacked Jacobian is not of full rank"
    return True, "ok"


@dataclass
class Clear:
    span_dim: int


@dataclass
class Trapped:
    Z: Subspace


def subrep_obstruction(f: PolyMap, samples: int | None = None, seed: int = 0) -> Clear | Trapped:
    """Span of f(w_i) - f(0) over random w_i: Clear is a certificate, Trapped is evidence."""
    samples = f.dim_V + 5 if samples is None else samples
    rng = random.Random(seed)
    f0 = f.eval([0] * f.dim_W)
    rows = []
    for _ in range(samples):
        w = [Fraction(rng.randint(-5, 5)) for _ in range(f.dim_W)]
        rows.append(integer_row([a - b for a, b in zip(f.eval(w), f0)]))
    S = _from_int_rows(f.dim_V, rows)
    if S.is_full():
        return Clear(S.dim)
    return Trapped(lie_closure(f.target_rep, S))


# ---------------------------------------------------------------------------
# builtins
# ---------------------------------------------------------------------------


def _ring(nvars: int, prefix: str = "x"):
    R, *gens = ring(",".join(f"{prefix}{i}" for i in range(nvars)), QQ)
    return R, gens


def sl2_orbit_map(k: int) -> PolyMap:
    """(x, y) -> (x^k, x^(k-1) y, ..., y^k): the k-th power of x X + y Y."""
    if k < 1:
        raise ValueError("degree must be positive")
    R, (x, y) = _ring(2)
    coords = [x ** (k - i) * y ** i for i in range(k + 1)]
    return PolyMap(coords, sl2_sym(1), sl2_sym(k), name=f"orbit:{k}")


def twisted_cubic() -> PolyMap:
    f = sl2_orbit_map(3)
    f.name = "twisted_cubic"
    return f


def _matrix_vars(gens, n, index):
    off = index * n * n
    return [[gens[off + i * n + j] for j in range(n)] for i in range(n)]


def _mat_mul(A, B):
    n = len(A)
    return [[sum((A[i][t] * B[t][j] for t in range(n)), A[0][0] * 0) for j in range(n)] for i in range(n)]


def square_map(n: int) -> PolyMap:
    """X -> X^2 on M_n."""
    R, gens = _ring(n * n)
    X = _matrix_vars(gens, n, 0)
    sq = _mat_mul(X, X)
    rep = conj_rep(n, "Mn")
    return PolyMap([sq[i][j] for i in range(n) for j in range(n)], rep, rep, name=f"square:{n}")


def comm_plus_identity(n: int) -> PolyMap:
    """(X, Y) -> I + XY - YX."""
    f = trace_poly(n, "I + X1*X2 - X2*X1")
    f.name = f"comm:{n}"
    return f


class _Scalar:
    """A scalar-valued polynomial inside trace-polynomial parsing."""

    def __init__(self, p):
        self.p = p


def trace_poly(n: int, expression: str, nvars: int | None = None) -> PolyMap:
    """Parse a trace polynomial in matrix variables X1..Xm.

    Grammar: sums, differences and products of X<k>, I, rational constants,
    integer powers (``^`` or ``**``) and tr(...) of a matrix expression.
    Scalars added to matrices act as scalar multiples of I.
    """
    text = expression.replace("^", "**")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"malformed trace polynomial {expression!r}: {exc.msg}") from None
    names = {int(m) for m in re.findall(r"X(\d+)", text)}
    if any(i < 1 for i in names):
        raise ValueError("matrix variables are X1, X2, ...")
    m = max(names, default=1) if nvars is None else nvars
    if names and max(names) > m:
        raise ValueError(f"expression uses X{max(names)} but only {m} variables were declared")
    R, gens = _ring(m * n * n)
    zero, one = R(0), R(1)
    ident = [[one if i == j else zero for j in range(n)] for i in range(n)]

    def as_matrix(v):
        if isinstance(v, _Scalar):
            return [[v.p if i == j else zero for j in range(n)] for i in range(n)]
        return v

    def add(a, b, sign=1):
        if isinstance(a, _Scalar) and isinstance(b, _Scalar):
            return _Scalar(a.p + sign * b.p)
        A, B = as_matrix(a), as_matrix(b)
        return [[A[i][j] + sign * B[i][j] for j in range(n)] for i in range(n)]

    def mul(a, b):
        if isinstance(a, _Scalar) and isinstance(b, _Scalar):
            return _Scalar(a.p * b.p)
        if isinstance(a, _Scalar):
            return [[a.p * x for x in row] for row in b]
        if isinstance(b, _Scalar):
            return [[x * b.p for x in row] for row in a]
        return _mat_mul(a, b)

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int) and node.right.value >= 0):
                    raise ValueError("exponents must be non-negative integer literals")
                base = walk(node.left)
                out = _Scalar(one)
                for _ in range(node.right.value):
                    out = mul(out, base)
                return out
            a, b = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return add(a, b)
            if isinstance(node.op, ast.Sub):
                return add(a, b, -1)
            if isinstance(node.op, ast.Mult):
                return mul(a, b)
            if isinstance(node.op, ast.Div):
                if not isinstance(b, _Scalar) or not b.p.is_ground or not b.p:
                    raise ValueError("division only by nonzero rational constants")
                return mul(a, _Scalar(R(1 / b.p.LC)))
            raise ValueError(f"unsupported operator {type(node.op).__name__}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return mul(_Scalar(R(-1 if isinstance(node.op, ast.USub) else 1)), v)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return _Scalar(R(node.value))
        if isinstance(node, ast.Name):
            if node.id == "I":
                return ident
            mt = re.fullmatch(r"X(\d+)", node.id)
            if mt:
                return _matrix_vars(gens, n, int(mt.group(1)) - 1)
            raise ValueError(f"unknown name {node.id!r}")
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "tr" and len(node.args) == 1:
            v = walk(node.args[0])
            if isinstance(v, _Scalar):
                raise ValueError("tr() expects a matrix expression")
            return _Scalar(sum((v[i][i] for i in range(n)), zero))
        raise ValueError(f"unsupported syntax in trace polynomial: {ast.dump(node)[:60]}")

    try:
        value = as_matrix(walk(tree))
    except RecursionError:
        raise ValueError("expression too deeply nested") from None
    src = conj_rep(n, "Mn") if m == 1 else direct_sum(conj_rep(n, "Mn"), m)
    return PolyMap([value[i][j] for i in range(n) for j in range(n)], src, conj_rep(n, "Mn"),
                   name=f"trace:{n}:{expression}")


def builtins() -> dict:
    return {
        "twisted_cubic": twisted_cubic,
        "sl2_orbit_map": sl2_orbit_map,
        "square_map": square_map,
        "comm_plus_identity": comm_plus_identity,
        "trace_poly": trace_poly,
    }


def parse_map(desc: str) -> PolyMap:
    """``twisted_cubic``, ``orbit:k``, ``square:n``, ``comm:n`` or ``trace:n:EXPR`` (also ``trace:EXPR`` with n=2)."""
    kind, _, rest = desc.partition(":")
    try:
        if kind == "twisted_cubic" and not rest:
            return twisted_cubic()
        if kind in ("orbit", "sl2orbit"):
            return sl2_orbit_map(int(rest))
        if kind == "square":
            return square_map(int(rest))
        if kind == "comm":
            return comm_plus_identity(int(rest))
        if kind == "trace":
            head, _, expr = rest.partition(":")
            if head.strip().isdigit() and expr:
                return trace_poly(int(head), expr)
            return trace_poly(2, rest)
    except EquivarianceError:
        raise
    except ValueError as exc:
        raise ValueError(f"bad map descriptor {desc!r}: {exc}") from exc
    raise ValueError(f"bad map descriptor {desc!r}; expected twisted_cubic, orbit:k, square:n, comm:n or trace:n:EXPR")


# ---------------------------------------------------------------------------
# numeric decomposition
# ---------------------------------------------------------------------------


def numeric_decompose(
    f: PolyMap,
    target: Sequence[float],
    k: int,
    seed: int = 0,
    restarts: int = 100,
    iterations: int = 200,
    damping: float = 0.5,
    tol: float = 1e-9,
    max_cancellation: float = 1e3,
) -> list[np.ndarray] | None:
    """Real points w_1..w_k with sum f(w_i) = target, or None.

    Damped Gauss-Newton from random starts. Success is evidence; None proves nothing.
    Sums whose terms cancel by more than ``max_cancellation`` (sum of |f(w_i)|
    against 1 + |target|) are discarded: points running off to infinity only
    approximate limits of k-term sums, not k-term sums themselves.
    """
    target = np.asarray([float(x) for x in target])
    if target.shape != (f.dim_V,):
        raise DimensionError(f"target must have {f.dim_V} entries")
    rng = np.random.default_rng(seed)
    dW = f.dim_W

    def residual(z):
        return sum(f.eval_float(z[i * dW:(i + 1) * dW]) for i in range(k)) - target

    def jac(z):
        return np.hstack([f.jacobian_float(z[i * dW:(i + 1) * dW]) for i in range(k)])

    for _ in range(restarts):
        z = rng.normal(size=k * dW)
        r = residual(z)
        norm = np.linalg.norm(r)
        for _ in range(iterations):
            if norm < tol:
                break
            step = np.linalg.lstsq(jac(z), -r, rcond=None)[0]
            t = 1.0
            while t > 1e-6:
                z_new = z + t * step
                r_new = residual(z_new)
                n_new = np.linalg.norm(r_new)
                if np.isfinite(n_new) and n_new < norm:
                    break
                t *= damping
            else:
                break
            z, r, norm = z_new, r_new, n_new
        if norm < tol:
            points = [z[i * dW:(i + 1) * dW].copy() for i in range(k)]
            mass = sum(np.linalg.norm(f.eval_float(p)) for p in points)
            if mass <= max_cancellation * (1.0 + np.linalg.norm(target)):
                return points
    return None
