import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adiam.exactlin import RationalMatrix, span
from adiam.groupdiam import invariant_core
from adiam.repkit import (
    E,
    GroupElement,
    SlnCoords,
    apply,
    conj_rep,
    elementary_product,
    flip_matrix,
    identity_element,
    long_cycle,
    parse_rep,
    permute_positions,
    random_group_element,
    sl2_basis,
    sl2_irrep,
    sl2_sym,
    unipotent_shift,
)
from adiam.spaces import lie_closure

REPS = [sl2_irrep(1), sl2_irrep(4), sl2_sym(3), conj_rep(2), conj_rep(3), conj_rep(3, "Mn")]


def test_group_element_checks_inverse():
    with pytest.raises(ValueError):
        GroupElement(RationalMatrix([[1, 1], [0, 1]]), RationalMatrix.identity(2))
    with pytest.raises(ZeroDivisionError):
        GroupElement(RationalMatrix([[1, 2], [2, 4]]))
    g = GroupElement(RationalMatrix([[2, 1], [1, 1]]))
    assert g.matrix @ g.inverse == RationalMatrix.identity(2)
    assert long_cycle(4).inv().label == "cycle^-1"


def test_sl2_examples():
    rho = sl2_irrep(1)
    assert rho.evaluator(identity_element(2)) == RationalMatrix.identity(2)
    # (1,1;0,1): X -> X, Y -> X + Y in the e_i = X^i Y^(1-i) basis
    op = rho.evaluator(GroupElement(RationalMatrix([[1, 1], [0, 1]])))
    assert op @ (1, 0) == (1, 1)
    assert op @ (0, 1) == (0, 1)
    e, h, f = sl2_basis()
    assert sl2_irrep(2).lie_evaluator(f) @ (0, 0, 1) == (0, 2, 0)


@pytest.mark.parametrize("k", range(1, 13))
def test_sl2_relations(k):
    e, h, f = sl2_basis()
    rho = sl2_irrep(k)
    E_, H, F = (rho.lie_evaluator(x) for x in (e, h, f))
    assert E_ @ H - H @ E_ == E_.scale(-2)
    assert E_ @ F - F @ E_ == H
    assert H @ F - F @ H == F.scale(-2)


def test_conj_examples():
    rep = conj_rep(3)
    assert rep.evaluator(identity_element(3)) == RationalMatrix.identity(8)
    c = rep.coords
    F = flip_matrix(3)
    assert rep.evaluator(F) @ c.unit(1, 2) == c.unit(3, 2)
    assert apply(rep.evaluator(F), span(8, [c.unit(1, 2)])) == span(8, [c.unit(3, 2)])
    for n in (2, 3, 4):
        rep = conj_rep(n)
        ad_F = rep.lie_evaluator(flip_matrix(n).matrix)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                got = rep.coords.matrix_of(ad_F @ rep.coords.unit(i, j))
                # [F, E_ij] is minus the commutator written the other way round
                assert got == -(E(n, i, n + 1 - j) - E(n, n + 1 - i, j))


def test_named_elements():
    assert flip_matrix(2).matrix == RationalMatrix([[0, 1], [1, 0]])
    assert elementary_product(3).matrix == RationalMatrix([[1, 1, 1], [0, 1, 1], [0, 0, 1]])
    assert unipotent_shift(4, 0).matrix == RationalMatrix.identity(2)


def test_coordinates_round_trip():
    c = SlnCoords(4)
    rng = random.Random(0)
    for _ in range(20):
        v = tuple(Fraction(rng.randint(-9, 9)) for _ in range(c.dim))
        m = c.matrix_of(v)
        assert m.trace() == 0
        assert c.vector_of(m) == v


@pytest.mark.parametrize("rep", REPS, ids=lambda r: r.descriptor)
def test_homomorphism(rep):
    rng = random.Random(1)
    for _ in range(50 if rep.dim < 9 else 15):
        g = random_group_element(rng, rep.group_n, 4)
        h = random_group_element(rng, rep.group_n, 4)
        assert rep.evaluator(g) @ rep.evaluator(h) == rep.evaluator(g @ h)


@pytest.mark.parametrize("rep", REPS, ids=lambda r: r.descriptor)
def test_lie_evaluator_linear(rep):
    rng = random.Random(2)
    n = rep.group_n
    for _ in range(10):
        x = RationalMatrix([[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)])
        y = RationalMatrix([[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)])
        a = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
        assert rep.lie_evaluator(x.scale(a) + y) == rep.lie_evaluator(x).scale(a) + rep.lie_evaluator(y)


def test_conj_derivative_identity():
    rng = random.Random(3)
    for n in (2, 3, 4):
        rep = conj_rep(n)
        for _ in range(10):
            x = RationalMatrix([[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)])
            v = tuple(Fraction(rng.randint(-5, 5)) for _ in range(rep.dim))
            A = rep.coords.matrix_of(v)
            assert rep.lie_evaluator(x) @ v == rep.coords.vector_of(x @ A - A @ x)


def test_conj_derivative_is_first_order_term():
    # (I + t x) A (I + t x)^-1 = A + t [x, A] + O(t^2): the t-coefficient via two exact samples
    rng = random.Random(4)
    n = 3
    rep = conj_rep(n)
    x = RationalMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
    v = tuple(Fraction(rng.randint(-3, 3)) for _ in range(rep.dim))
    ts = [Fraction(1, 10 ** 6), Fraction(1, 2 * 10 ** 6)]
    diffs = []
    for t in ts:
        g = GroupElement(RationalMatrix.identity(n) + x.scale(t))
        diffs.append([(a - b) / t for a, b in zip(rep.evaluator(g) @ v, v)])
    # Richardson: 2 D(t/2) - D(t) cancels the O(t) error
    extrapolated = [2 * b - a for a, b in zip(*diffs)]
    exact = rep.lie_evaluator(x) @ v
    assert max(abs(a - b) for a, b in zip(extrapolated, exact)) < Fraction(1, 10 ** 9)


@pytest.mark.parametrize("rep", [sl2_irrep(k) for k in (1, 3, 6)] + [conj_rep(2), conj_rep(3)],
                         ids=lambda r: r.descriptor)
def test_irreducible(rep):
    rng = random.Random(5)
    for _ in range(3):
        v = [rng.randint(-4, 4) for _ in range(rep.dim)]
        if any(v):
            assert lie_closure(rep, span(rep.dim, [v])).is_full()
            assert invariant_core(rep, span(rep.dim, [v])).dim == 0


def test_sym_basis_powers():
    rho = sl2_sym(3)
    g = GroupElement(RationalMatrix([[2, 1], [1, 1]]))
    x, y = Fraction(3), Fraction(-2)
    # (x, y) -> g (x, y); the cube vector follows
    gx, gy = g.matrix @ (x, y)
    cube = tuple(x ** (3 - i) * y ** i for i in range(4))
    assert rho.evaluator(g) @ cube == tuple(gx ** (3 - i) * gy ** i for i in range(4))
    assert sl2_sym(1).evaluator(g) == g.matrix


def test_parse_rep():
    assert parse_rep("sl2:4").dim == 5
    assert parse_rep("conj:sln:3").dim == 8
    assert parse_rep("conj:Mn:2").dim == 4
    assert parse_rep("sym:3").descriptor == "sym:3"
    for bad in ("sl2", "sl2:0", "conj:foo:3", "gl:3"):
        with pytest.raises(ValueError):
            parse_rep(bad)


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(1, 6)))
def test_permutation_index_map_matches_matrices(perm):
    from adiam.repkit import permutation

    n = 5
    rep = conj_rep(n)
    P = permutation(list(perm))
    op = rep.evaluator(P)
    for (i, j) in [(1, 2), (3, 1), (5, 4)]:
        (a, b), = permute_positions(perm, {(i, j)})
        assert op @ rep.coords.unit(i, j) == rep.coords.unit(a, b)
