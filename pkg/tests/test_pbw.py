import itertools

import pytest
from hypothesis import given, settings, strategies as st

from a4canon.engine.pbw import (
    PINNED,
    ROOTS,
    Convention,
    PBWVector,
    enumerate_pbw,
    express_in_pbw,
    index_height,
    lattice_verdict,
    pbw_monomial,
    pbw_system,
    weight_of,
)
from a4canon.engine.words import HeightCapExceeded, shuffle_mul
from a4canon.laurent import ONE, V

from oracles import interval_partitions


def weights(max_height):
    for nu in itertools.product(range(max_height + 1), repeat=4):
        if 0 < sum(nu) <= max_height:
            yield nu


def test_roots_in_convex_order():
    assert ROOTS[0] == (4, 4) and ROOTS[-1] == (1, 1)
    assert len(set(ROOTS)) == 10


@pytest.mark.parametrize("nu", list(weights(4)))
def test_dimension_matches_partition_count(nu):
    assert len(enumerate_pbw(nu)) == interval_partitions(nu)


def test_independence_height_5():
    for nu in weights(5):
        idx, images, solver = pbw_system(nu, PINNED)
        assert len(solver.pivot_columns) == len(idx) == interval_partitions(nu)


small_index = (
    st.dictionaries(st.integers(0, 9), st.integers(1, 2), min_size=1, max_size=3)
    .map(lambda d: tuple(d.get(k, 0) for k in range(10)))
    .filter(lambda A: index_height(A) <= 6)
)


@settings(max_examples=25)
@given(small_index)
def test_round_trip(A):
    pv = express_in_pbw(pbw_monomial(A, PINNED), PINNED)
    assert pv == PBWVector({A: ONE})


def test_generator_products_expand():
    # e2 e1 in PBW coordinates: e2*e1 sits in convex order already
    x = shuffle_mul(pbw_monomial((0,) * 7 + (1, 0, 0), PINNED), pbw_monomial((0,) * 9 + (1,), PINNED), 1)
    pv = express_in_pbw(x, PINNED)
    assert pv == PBWVector({(0,) * 7 + (1, 0, 1): ONE})


def test_height_cap(monkeypatch):
    monkeypatch.setenv("A4CANON_HEIGHT_CAP", "3")
    with pytest.raises(HeightCapExceeded):
        pbw_system((1, 1, 1, 1), Convention(1, -1, "right"))


def test_lattice_verdict():
    A = (0,) * 9 + (1,)
    assert lattice_verdict(PBWVector({A: ONE}), A).congruent_to_target
    assert not lattice_verdict(PBWVector({A: V}), A).in_lattice
    assert not lattice_verdict(PBWVector({A: ONE + ONE}), A).congruent_to_target
    B = (0,) * 8 + (1, 0)
    C = (0,) * 7 + (1, 0, 1)
    assert lattice_verdict(PBWVector({B: ONE, C: V.bar()}), B).congruent_to_target
    r = lattice_verdict(PBWVector({B: ONE, C: ONE}), B)
    assert r.in_lattice and not r.congruent_to_target and r.offending[0][0] == C


def test_weight_of():
    assert weight_of((1,) * 10) == (4, 6, 6, 4)
