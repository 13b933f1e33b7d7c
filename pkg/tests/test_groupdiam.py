import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adiam import groupdiam, spaces
from adiam.exactlin import RationalMatrix, full_space, random_subspace, rank, span, subspace_sum
from adiam.groupdiam import (
    INFINITE,
    Certificate,
    NoPermutationPair,
    Obstruction,
    PreconditionError,
    Witness,
    _digest,
    best_lower,
    certify_upper,
    confluent_vandermonde,
    diameter,
    invariant_core,
    lower_ceiling,
    lower_invariant_core,
    sl2_shift_witnesses,
    tiling_plan,
    translate_sum,
    verify_certificate,
    weyl_pair_search,
)
from adiam.repkit import GroupElement, conj_rep, elementary_product, flip_matrix, sl2_irrep, unipotent_shift


def resign(obj):
    body = {k: v for k, v in obj.items() if k != "digest"}
    obj["digest"] = _digest(body)
    return obj


# ---------------------------------------------------------------------------
# translates and upper bounds
# ---------------------------------------------------------------------------


def test_translate_sum_examples():
    rep = conj_rep(3)
    U = spaces.zero_diag(3)
    assert translate_sum(rep, U, [rep.identity()]) == U
    assert translate_sum(rep, U, [rep.identity(), elementary_product(3)]).dim == 8
    rho = sl2_irrep(8)
    W = spaces.upper_closed(8, 3)
    assert translate_sum(rho, W, [unipotent_shift(8, 0), unipotent_shift(8, 1)]).dim == 9


def test_certify_upper_examples():
    rep = conj_rep(3)
    res = certify_upper(rep, full_space(8), 1)
    assert res and [g.label for g in res.witnesses] == ["I"]
    rep4 = conj_rep(4)
    res = certify_upper(rep4, spaces.counterexample(4), 3, strategy="flip_longcycle")
    assert res and [g.label for g in res.witnesses] == ["I", "F", "cycle^-1"]
    res = certify_upper(rep, random_subspace(random.Random(0), 8, 5), 2, "random", seed=3)
    assert res and res.value == 2
    assert not certify_upper(rep, random_subspace(random.Random(0), 8, 3), 2)  # 6 < 8
    assert not certify_upper(rep, spaces.counterexample(3), 2, strategy="flip")


def test_lower_ceiling_examples():
    assert lower_ceiling(9, 2) == 5
    assert all(lower_ceiling(n * n - 1, n * n - n) == 2 for n in range(2, 8))
    assert lower_ceiling(4, 4) == 1
    with pytest.raises(ValueError):
        lower_ceiling(4, 0)


def test_invariant_core_examples():
    rep = conj_rep(2, "Mn")
    assert invariant_core(rep, full_space(4)).is_full()
    W = invariant_core(rep, spaces.gl2_example())
    assert W == span(4, [(1, 0, 0, 1)])
    assert lower_invariant_core(rep, spaces.gl2_example()) == 3
    rep3 = conj_rep(3)
    assert invariant_core(rep3, random_subspace(random.Random(1), 8, 6)).dim == 0
    assert lower_invariant_core(rep3, random_subspace(random.Random(1), 8, 3)) == 3
    scalars = span(4, [(1, 0, 0, 1)])
    assert lower_invariant_core(rep, scalars) == INFINITE


def test_weyl_examples():
    for n in (3, 4, 5):
        assert isinstance(weyl_pair_search(n, spaces.counterexample(n)), NoPermutationPair)
    rep = conj_rep(4)
    U = subspace_sum(spaces.borel_b(4), spaces.block_B(4, 2, 1))
    assert spaces.is_borel_stable(rep, U)
    res = weyl_pair_search(4, U)
    assert isinstance(res, Witness)
    from adiam.repkit import permutation

    assert groupdiam.spans(rep, U, [rep.identity(), permutation(list(res.perm))])
    with pytest.raises(PreconditionError):
        weyl_pair_search(4, spaces.zero_diag(4))
    with pytest.raises(PreconditionError):
        weyl_pair_search(4, spaces.last_rowcol_zero(4))


def test_sl2_shift_examples():
    assert [g.matrix for g in sl2_shift_witnesses(4, 5)] == [RationalMatrix.identity(2)]
    ws = sl2_shift_witnesses(3, 2)
    assert [g.matrix[1, 0] for g in ws] == [0, 1]
    assert groupdiam.spans(sl2_irrep(3), spaces.upper_closed(3, 2), ws)
    ws = sl2_shift_witnesses(8, 3)
    assert len(ws) == 3
    assert translate_sum(sl2_irrep(8), spaces.upper_closed(8, 6), ws).dim == 9


# ---------------------------------------------------------------------------
# confluent Vandermonde
# ---------------------------------------------------------------------------


def falling(j, i):
    out = 1
    for t in range(i):
        out *= j - t
    return out


def test_vandermonde_examples():
    V = confluent_vandermonde(2, 1, [0, 1, 2])
    # nodes 0, 1, 2 with one row each: the ordinary Vandermonde, det = 1 * 2 * 1
    assert V == RationalMatrix([[1, 0, 0], [1, 1, 1], [1, 2, 4]]).T()
    assert V.det() == 2
    assert rank(confluent_vandermonde(2, 1, [1, 1, 2])) < 3
    T = confluent_vandermonde(3, 4, [0])
    assert T == RationalMatrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 6]])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.data())
def test_vandermonde_entries_and_invertibility(k, data):
    d = data.draw(st.integers(1, k))
    n = -(-(k + 1) // d)
    nodes = data.draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n, unique=True))
    V = confluent_vandermonde(k, d, nodes)
    for r in range(n * d):
        a, i = nodes[r // d], r % d
        assert [V[j, r] for j in range(k + 1)] == [falling(j, i) * Fraction(a) ** (j - i) if j >= i else 0
                                                   for j in range(k + 1)]
    sq = RationalMatrix([[V[j, r] for r in range(k + 1)] for j in range(k + 1)])
    assert sq.det() != 0


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


def exact_certs():
    return [
        diameter(sl2_irrep(6), spaces.upper_closed(6, 4)),
        diameter(conj_rep(4), spaces.counterexample(4)),
        diameter(conj_rep(2, "Mn"), spaces.gl2_example()),
        diameter(conj_rep(4), spaces.last_rowcol_zero(4)),
        diameter(conj_rep(3), spaces.zero_diag(3)),
    ]


def test_exact_values_and_obstructions():
    got = [(c.kind, c.value, c.obstruction.kind) for c in exact_certs()]
    assert got == [
        ("Exact", 3, "CeilingDim"),
        ("Exact", 3, "WeylExhaustive"),
        ("Exact", 3, "InvariantCore"),
        ("Exact", 3, "PairingFamily"),
        ("Exact", 2, "CeilingDim"),
    ]


def test_certificate_round_trip_and_replay():
    for c in exact_certs():
        obj = json.loads(c.dumps())
        assert verify_certificate(obj) == (True, "ok")
        assert Certificate.from_json(obj).to_json() == obj


def test_replay_rejects_resigned_lies():
    obj = diameter(conj_rep(4), spaces.counterexample(4)).to_json()
    lower_value = resign(dict(obj, value=2))
    assert not verify_certificate(lower_value)[0]
    dropped = resign(dict(obj, witnesses=obj["witnesses"][:2], value=2,
                          obstruction=dict(obj["obstruction"], bound=2)))
    assert not verify_certificate(dropped)[0]
    fake = resign(dict(obj, obstruction={"kind": "CeilingDim", "bound": 3, "data": {}}))
    assert not verify_certificate(fake)[0]
    # a witness that is not the flip: U + gUg^-1 + ... loses the antidiagonal
    bad = json.loads(json.dumps(obj))
    bad["witnesses"][1]["matrix"] = RationalMatrix.identity(4).to_json()
    assert not verify_certificate(resign(bad))[0]
    assert not verify_certificate(dict(obj, digest="0" * 64))[0]


def test_subrep_trap_is_infinite():
    rep = conj_rep(3, "Mn")
    U = span(9, [(1, 0, 0, 0, -1, 0, 0, 0, 0)])
    res = diameter(rep, U)
    assert isinstance(res, tuple) and res[0].value == INFINITE and res[0].obstruction.kind == "SubrepTrap"
    assert verify_certificate(res[0].to_json())[0]


def test_pairing_family_checks():
    rep = conj_rep(4)
    U = spaces.last_rowcol_zero(4)
    fam = groupdiam.pairing_family_for(rep, U)
    assert fam is not None and groupdiam.check_pairing_family(rep, U, fam)
    # the same family does not fit a subspace that reaches into the last row
    V = subspace_sum(U, span(15, [rep.coords.unit(4, 1)]))
    assert not groupdiam.check_pairing_family(rep, V, fam)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 3), st.data())
def test_monotone_in_k(seed, n, data):
    rep = conj_rep(n)
    d = data.draw(st.integers(max(1, (rep.dim + 1) // 2), rep.dim))
    U = random_subspace(random.Random(seed), rep.dim, d)
    res = certify_upper(rep, U, 3, "random", seed=seed)
    if res:
        longer = res.witnesses + [rep.identity()]
        assert groupdiam.spans(rep, U, longer)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.integers(0, 10 ** 6))
def test_flip_identity(n, seed):
    rng = random.Random(seed)
    A = RationalMatrix([[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)])
    F = flip_matrix(n).matrix
    B = F @ A @ F
    assert all(B[i, j] == A[n - 1 - i, n - 1 - j] for i in range(n) for j in range(n))


@pytest.mark.parametrize("k", range(1, 11))
def test_sl2_random_subspaces_optimal(k):
    rep = sl2_irrep(k)
    rng = random.Random(k)
    for d in range(1, k + 2):
        want = -(-(k + 1) // d)
        for _ in range(10):
            U = random_subspace(rng, k + 1, d)
            res = groupdiam.find_upper(rep, U, want, seed=rng.randrange(1 << 20))
            assert res and res.value <= want


def test_n4_block_pair_has_diameter_three():
    # B_21 + B_43 in sl_4: dimension 10 > (n-1)^2, Borel-stable, yet no pair of translates spans
    rep = conj_rep(4)
    U = subspace_sum(spaces.block_B(4, 2, 1), spaces.block_B(4, 4, 3))
    assert U.dim == 10 and spaces.is_borel_stable(rep, U)
    assert translate_sum(rep, U, [rep.identity(), flip_matrix(4)]).dim == 14
    res = diameter(rep, U)
    assert res.kind == "Exact" and res.value == 3 and res.obstruction.kind == "WeylExhaustive"
    rng = random.Random(0)
    for _ in range(20):
        m = RationalMatrix([[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)])
        if m.det() == 0:
            continue
        g = GroupElement(m)
        assert translate_sum(rep, U, [rep.identity(), g]).dim <= 14


def test_block_pair_recovers_at_n5():
    rep = conj_rep(5)
    U = subspace_sum(spaces.block_B(5, 2, 1), spaces.block_B(5, 5, 3))
    assert U.dim == 17
    assert groupdiam.spans(rep, U, [rep.identity(), flip_matrix(5)])


# ---------------------------------------------------------------------------
# tiling
# ---------------------------------------------------------------------------


def test_tiling_structure():
    plan = tiling_plan(12, 2)
    names = [s.name for s in plan.steps]
    assert names[0].startswith("columns") and names[-1] == "basic-block"
    m = (12 + 1) // 2
    final_rows = [s for s in plan.steps if s.name == "rows-final"][0]
    assert final_rows.target == (m - 1, m - 1)
    assert plan.witness_count <= 3 * 12 / (2 * 2) + 10


def test_tiling_known_gap():
    # the last row step misses the pair (5, 6) inside the row block containing m - 1 = 5
    plan = tiling_plan(12, 2)
    bad = {s.name: sorted(s.missing) for s in plan.steps if not s.ok}
    assert bad == {"rows-final": [(5, 6)]}
    assert tiling_plan(12, 2, repair=True).ok
    with pytest.raises(PreconditionError):
        tiling_plan(12, 5)


def test_tiling_permutations_are_permutation_matrices():
    plan = tiling_plan(30, 3, repair=True)
    for g in plan.permutations():
        assert g.matrix @ g.matrix.T() == RationalMatrix.identity(30)


def test_basic_block_upper_bound():
    for n in (5, 6):
        res = certify_upper(conj_rep(n), spaces.basic_block(n), 8, "random", seed=3)
        assert res and res.replay()


def test_best_lower_ordering_full_space():
    rep = conj_rep(3)
    lo = best_lower(rep, full_space(8))
    assert lo.value == 1 and lo.obstruction == Obstruction("CeilingDim", 1)
