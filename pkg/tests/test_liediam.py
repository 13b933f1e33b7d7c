import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adiam import spaces
from adiam.exactlin import RationalMatrix, coordinate_subspace, full_space, random_subspace, span
from adiam.groupdiam import INFINITE, _digest, diameter
from adiam.liediam import (
    LieCertificate,
    LieWitness,
    associative_closure,
    diameter_lie,
    elementary_cap_bound,
    elementary_infinity_check,
    elementary_reach,
    lie_translate_sum,
    lower_lie,
    sl3_example_subspace,
    sl3_example_witnesses,
    square_zero_translate_identity,
    stable_kernel,
    verify_lie_certificate,
)
from adiam.repkit import E, conj_rep, sl2_irrep

F2 = RationalMatrix([[0, 0], [1, 0]])


def value(res):
    return res.value if isinstance(res, LieCertificate) else None


def test_elementary_empty_is_u():
    rep = conj_rep(3)
    U = sl3_example_subspace()
    assert lie_translate_sum(rep, U, LieWitness("elem", [])) == U
    assert LieWitness("elem", []).count == 1
    with pytest.raises(ValueError):
        LieWitness("poly", [])


def test_monomial_example_sl2():
    rep = sl2_irrep(3)
    U = spaces.upper_closed(3, 2)
    assert lie_translate_sum(rep, U, LieWitness("mon", [[], [F2, F2]])).is_full()


def test_sl2_monomial_windows():
    # f^m moves coordinates down by m, so each monomial translate is a coordinate window
    for k in range(1, 8):
        rep = sl2_irrep(k)
        for d in range(1, k + 2):
            j = k + 1 - d
            U = spaces.upper_closed(k, j)
            for i in range(-(-(k + 1) // d)):
                got = lie_translate_sum(rep, U, LieWitness("mon", [[F2] * (d * i)]))
                assert got == coordinate_subspace(k + 1, range(max(j - d * i, 0), k - d * i + 1))


@pytest.mark.parametrize("k", [2, 4, 6])
def test_sl2_mon_exact(k):
    rep = sl2_irrep(k)
    for d in range(1, k + 2):
        res = diameter_lie(rep, spaces.upper_closed(k, k + 1 - d), "mon")
        assert value(res) == -(-(k + 1) // d)
        assert verify_lie_certificate(json.loads(res.dumps()))[0]


def test_sl2_elem_infinite():
    for k in range(2, 8):
        rep = sl2_irrep(k)
        for j in range(2, k + 1):
            U = spaces.upper_closed(k, j)
            assert elementary_infinity_check(rep, U) == "Infinite"
            lo, up = diameter_lie(rep, U, "elem")
            assert lo.value == INFINITE and up is None
        assert elementary_infinity_check(rep, spaces.upper_closed(k, 1)) == "Finite_possible"


def test_sl3_quadruple():
    rep = conj_rep(3)
    U = sl3_example_subspace()
    assert diameter(rep, U).value == 3
    assert [value(diameter_lie(rep, U, v)) for v in ("elem", "mon", "ass")] == [3, 2, 2]
    lo = lower_lie(rep, U, "elem")
    assert lo.obstruction.kind == "RankCap" and lo.value == 3


def test_sl3_witnesses():
    rep = conj_rep(3)
    U = sl3_example_subspace()
    w = sl3_example_witnesses()
    # frozen: the monomial as quoted misses one direction, the sign-corrected one spans
    assert lie_translate_sum(rep, U, w["monomial"]).dim == 7
    assert lie_translate_sum(rep, U, w["monomial_sign_corrected"]).is_full()
    assert lie_translate_sum(rep, U, w["elementary"]).is_full()


def test_sl3_stable_kernel_and_cap():
    rep = conj_rep(3)
    U = sl3_example_subspace()
    K = stable_kernel(rep, U)
    assert K == span(8, [rep.coords.unit(1, 3)])
    assert elementary_cap_bound(8, 4, 1) == 3
    rng = random.Random(0)
    for _ in range(30):
        r = RationalMatrix([[rng.randint(-9, 9) for _ in range(3)] for _ in range(3)])
        assert lie_translate_sum(rep, U, LieWitness("elem", [r])).dim <= 7


def test_cap_bound_edges():
    assert elementary_cap_bound(5, 5, 5) == 1
    assert elementary_cap_bound(5, 2, 2) == INFINITE
    assert elementary_cap_bound(9, 3, 0) == 3


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_elementary_sums_stay_in_reach(seed, count):
    rng = random.Random(seed)
    rep = conj_rep(3)
    U = random_subspace(rng, 8, rng.randint(1, 4))
    R = elementary_reach(rep, U)
    xs = [RationalMatrix([[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)]) for _ in range(count)]
    assert lie_translate_sum(rep, U, LieWitness("elem", xs)) <= R


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_rank_cap_holds(seed, count):
    rng = random.Random(seed)
    rep = sl2_irrep(5)
    U = random_subspace(rng, 6, rng.randint(1, 3))
    K = stable_kernel(rep, U)
    xs = [RationalMatrix([[rng.randint(-4, 4) for _ in range(2)] for _ in range(2)]) for _ in range(count)]
    assert lie_translate_sum(rep, U, LieWitness("elem", xs)).dim <= U.dim + count * (U.dim - K.dim)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_variant_ordering(k):
    rep = sl2_irrep(k)
    rng = random.Random(k)
    for _ in range(4):
        U = random_subspace(rng, k + 1, rng.randint(1, k))
        vals = []
        for v in ("ass", "mon", "elem"):
            res = diameter_lie(rep, U, v, seed=1)
            vals.append(res.value if isinstance(res, LieCertificate) else res[1].value if res[1] else INFINITE)
        assert vals[0] <= vals[1] <= vals[2] or vals[2] == INFINITE


def test_burnside_small():
    for k in (1, 2, 3):
        assert associative_closure(sl2_irrep(k)).dim == (k + 1) ** 2
    assert associative_closure(conj_rep(2)).dim == 9
    # conjugation on all of M_2 is reducible: scalars split off
    assert associative_closure(conj_rep(2, "Mn")).dim < 16


def test_square_zero_examples():
    u = RationalMatrix([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    assert square_zero_translate_identity(u, RationalMatrix.zeros(3, 3))
    assert square_zero_translate_identity(u, E(3, 1, 2))
    v = RationalMatrix([[i * 4 + j - 3 for j in range(4)] for i in range(4)])
    assert square_zero_translate_identity(v, E(4, 1, 3) + E(4, 2, 4))
    with pytest.raises(ValueError):
        square_zero_translate_identity(u, E(3, 1, 2) + E(3, 2, 3))


def test_lie_closure_obstruction():
    rep = conj_rep(2, "Mn")
    U = span(4, [(1, 0, 0, 1)])
    lo, up = diameter_lie(rep, U, "ass")
    assert lo.value == INFINITE and lo.obstruction.kind == "LieClosure" and up is None
    assert verify_lie_certificate(json.loads(lo.dumps()))[0]


def test_full_space_is_one():
    res = diameter_lie(conj_rep(3), full_space(8), "elem")
    assert res.kind == "Exact" and res.value == 1


def resign(obj):
    obj["digest"] = _digest({k: v for k, v in obj.items() if k != "digest"})
    return obj


def test_lie_certificate_mutations():
    rep = conj_rep(3)
    U = sl3_example_subspace()
    cert = diameter_lie(rep, U, "mon")
    obj = json.loads(cert.dumps())
    assert verify_lie_certificate(obj) == (True, "ok")
    assert not verify_lie_certificate(dict(obj, value=1))[0]
    assert not verify_lie_certificate(resign(dict(obj, value=1)))[0]
    bad = json.loads(json.dumps(obj))
    bad["witness"]["items"][1] = [RationalMatrix.zeros(3, 3).to_json()]
    assert not verify_lie_certificate(resign(bad))[0]
    elem = json.loads(diameter_lie(rep, U, "elem").dumps())
    fake = resign(dict(elem, value=2, obstruction=dict(elem["obstruction"], bound=2)))
    assert not verify_lie_certificate(fake)[0]
