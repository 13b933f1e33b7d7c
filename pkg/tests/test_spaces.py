import random
from itertools import combinations

import pytest

from adiam import spaces
from adiam.exactlin import coordinate_subspace, full_space, random_subspace, span, subspace_sum, zero_subspace
from adiam.repkit import SlnCoords, conj_rep, sl2_irrep
from adiam.spaces import (
    DownSet,
    block_B,
    borel_b,
    enumerate_block_closed,
    is_borel_stable,
    is_upper_right_block_closed,
    lie_closure,
    named,
    parse_subspace,
    upper_closed,
)


def test_upper_closed_examples():
    assert upper_closed(5, 0).is_full()
    assert upper_closed(8, 3).dim == 6
    assert upper_closed(4, 4) == coordinate_subspace(5, [4])
    with pytest.raises(ValueError):
        upper_closed(3, 4)


def test_block_examples():
    n = 4
    c = SlnCoords(n)
    assert block_B(n, 1, n) == span(c.dim, [c.unit(1, n)])
    assert block_B(4, 3, 2).dim == 8
    with pytest.raises(ValueError):
        block_B(4, 5, 1)


@pytest.mark.parametrize("n", range(2, 7))
def test_block_generation(n):
    rep = conj_rep(n)
    c = rep.coords
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                assert lie_closure(rep, span(c.dim, [c.unit(i, j)]), rep.borel_basis) == block_B(n, i, j)


def test_named_dimensions():
    for n in range(3, 7):
        assert named(n, "counterexample").dim == (n - 1) ** 2
        assert named(n, "last_rowcol_zero").dim == (n - 1) ** 2 - 1
        assert named(n, "zero_diag").dim == n * n - n
    assert [spaces.basic_block(n).dim for n in (5, 6, 7, 8)] == [8, 13, 15, 22]
    with pytest.raises(ValueError):
        named(3, "nope")


def test_borel_stability_examples():
    for n in (2, 3, 4):
        rep = conj_rep(n)
        assert is_borel_stable(rep, borel_b(n))
        assert is_borel_stable(rep, zero_subspace(rep.dim))
    rep = conj_rep(2)
    c = rep.coords
    assert not is_borel_stable(rep, span(3, [tuple(a + b for a, b in zip(c.unit(1, 2), c.unit(2, 1)))]))
    for k in (3, 6):
        for j in range(k + 1):
            assert is_borel_stable(sl2_irrep(k), upper_closed(k, j))
    for n in (3, 4, 5):
        assert is_borel_stable(conj_rep(n), named(n, "counterexample"))
    rng = random.Random(0)
    assert not any(is_borel_stable(conj_rep(3), random_subspace(rng, 8, 2)) for _ in range(20))


@pytest.mark.parametrize("k", range(1, 11))
def test_sl2_stable_coordinate_subspaces_are_tails(k):
    rep = sl2_irrep(k)
    for size in range(1, k + 2):
        for subset in combinations(range(k + 1), size):
            U = coordinate_subspace(k + 1, subset)
            tail = list(subset) == list(range(k + 1 - size, k + 1))
            assert is_borel_stable(rep, U) == tail


@pytest.mark.parametrize("n", [3, 4, 5])
def test_stable_implies_block_closed(n):
    rep = conj_rep(n)
    found = []
    for d in range(1, rep.dim):
        found += enumerate_block_closed(n, d, "forced_only")
    rng = random.Random(n)
    found += [random_subspace(rng, rep.dim, rng.randint(1, rep.dim - 1)) for _ in range(200)]
    for U in found:
        if is_borel_stable(rep, U):
            assert is_upper_right_block_closed(n, U)


def test_enumeration_examples():
    n = 4
    hat11, hat44 = named(n, "b_hat11"), named(n, "b_hatnn")
    pattern = subspace_sum(block_B(n, 2, 1), block_B(n, n, 3))
    out = enumerate_block_closed(n, 10, "forced_only")
    assert out
    for U in out:
        assert is_upper_right_block_closed(n, U) and U.dim == 10
        assert hat11 <= U or hat44 <= U or U == pattern
    assert enumerate_block_closed(3, 8) == [full_space(8)]
    ones = enumerate_block_closed(4, 1, "forced_only")
    assert block_B(4, 1, 4) in ones
    sampled = enumerate_block_closed(4, 1, "sampled", seed=1)
    assert any(not spaces.offdiag_support(4, U) for U in sampled)
    with pytest.raises(ValueError):
        enumerate_block_closed(3, 9)


def test_downset():
    ds = DownSet.from_positions(4, {(1, 4), (2, 3), (1, 3)})
    assert {(c.i, c.j) for c in ds.corners} == {(2, 3)}
    assert ds.positions() == frozenset(spaces.block_positions(4, 2, 3))


def test_parse_subspace():
    rep = conj_rep(4)
    assert parse_subspace("named:4:counterexample", rep) == named(4, "counterexample")
    assert parse_subspace("B:4:2:3", rep) == block_B(4, 2, 3)
    assert parse_subspace("random:4:5:7", rep).dim == 5
    assert parse_subspace("random:4:5:7", rep) == parse_subspace("random:4:5:7", rep)
    assert parse_subspace("upper:8:3", sl2_irrep(8)).dim == 6
    for bad in ("upper:8", "B:4:9:1", "random:3:2:1", "what"):
        with pytest.raises(ValueError):
            parse_subspace(bad, rep)


def test_parse_subspace_file(tmp_path):
    rep = conj_rep(3)
    U = named(3, "zero_diag")
    p = tmp_path / "u.json"
    import json

    p.write_text(json.dumps(U.to_json()))
    assert parse_subspace(f"file:{p}", rep) == U
