from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binlrc import gf2
from binlrc.gf2 import BitMatrix
from binlrc.lab import EXAMPLE_1, screen
from binlrc.matroid import BinaryMatroid, Matroid, uniform_matroid
from binlrc.zlattice import (
    DegenerateCodeError,
    EdgeKind,
    EnumerationBudgetExceeded,
    TrichotomyViolation,
    classify_edges,
    distance_via_flats,
    enumerate_cyclic_flats,
    is_atomic,
    label_edge,
    lattice_to_dict,
    to_dot,
)


@pytest.fixture(scope="module")
def ex1():
    m = BinaryMatroid(gf2.parse_matrix(EXAMPLE_1))
    return m, enumerate_cyclic_flats(m)


@st.composite
def simple_codes(draw, max_k=4, max_n=9):
    k = draw(st.integers(2, max_k))
    n = draw(st.integers(k + 1, min(max_n, (1 << k) - 1)))
    cols = draw(st.lists(st.integers(1, (1 << k) - 1), min_size=n, max_size=n, unique=True))
    return BitMatrix.from_columns(cols, k)


def test_example1_lattice_shape(ex1):
    m, lat = ex1
    assert len(lat) == 17
    assert lat.flats[lat.bottom] == 0 and lat.flats[lat.top] == m.ground
    assert len(lat.atoms) == 10 and all(lat.nullities[a] == 1 and lat.ranks[a] == 2 for a in lat.atoms)
    assert len(lat.coatoms) == 5 and all(lat.nullities[c] == 3 for c in lat.coatoms)
    assert gf2.mask_from_symbols([1, 2, 5]) in lat.atom_masks()
    assert distance_via_flats(m, lat) == 4


def test_example1_edges(ex1):
    _, lat = ex1
    kinds = Counter((lat.ranks[lo], lat.ranks[hi], lab.dot_label()) for lo, hi, lab in classify_edges(lat))
    # each coatom is an M(K4) restriction holding 4 triangles
    assert kinds == {(0, 2, "ρ=2"): 10, (2, 3, "η=2"): 20, (3, 4, "η=3"): 5}
    assert all(len(lat.lower_covers(c)) == 4 for c in lat.coatoms)


def test_label_edge_trichotomy():
    assert label_edge(0, 1, 3, 1).kind is EdgeKind.RANK
    assert label_edge(0, 1, 1, 4).kind is EdgeKind.NULLITY
    elem = label_edge(0, 1, 1, 1)
    assert elem.kind is EdgeKind.ELEMENTARY and elem.dot_label() == "1,1" and elem.value == 1
    with pytest.raises(TrichotomyViolation):
        label_edge(0, 1, 2, 2)


def test_strategies_agree(ex1):
    m, lat = ex1
    for strategy in ("independent", "brute"):
        assert enumerate_cyclic_flats(m, strategy=strategy).flats == lat.flats


@settings(max_examples=60, deadline=None)
@given(simple_codes())
def test_strategies_agree_random(matrix):
    m = BinaryMatroid(matrix)
    a = enumerate_cyclic_flats(m, strategy="cycles")
    assert a.flats == enumerate_cyclic_flats(m, strategy="brute").flats
    assert a.flats == enumerate_cyclic_flats(m, strategy="independent").flats


@settings(max_examples=60, deadline=None)
@given(simple_codes(), st.data())
def test_lattice_laws(matrix, data):
    m = BinaryMatroid(matrix)
    lat = enumerate_cyclic_flats(m)
    pick = st.sampled_from(lat.flats)
    a, b, c = data.draw(pick), data.draw(pick), data.draw(pick)
    for x in (lat.join(a, b), lat.meet(a, b)):
        assert x in lat
    assert lat.join(a, b) == lat.join(b, a) and lat.meet(a, b) == lat.meet(b, a)
    assert lat.join(a, lat.join(b, c)) == lat.join(lat.join(a, b), c)
    assert lat.meet(a, lat.meet(b, c)) == lat.meet(lat.meet(a, b), c)
    assert lat.join(a, lat.meet(a, b)) == a and lat.meet(a, lat.join(a, b)) == a


@settings(max_examples=60, deadline=None)
@given(simple_codes())
def test_structure_on_simple_coloop_free(matrix):
    if screen(matrix):
        return
    m = BinaryMatroid(matrix)
    lat = enumerate_cyclic_flats(m)
    classify_edges(lat)
    report = is_atomic(lat)
    assert report.atomic and report.union_property
    assert distance_via_flats(m, lat) == gf2.min_distance(matrix)


def test_hasse_is_transitive_reduction(ex1):
    _, lat = ex1
    edges = set(lat.hasse)
    for lo, hi in edges:
        z_lo, z_hi = lat.flats[lo], lat.flats[hi]
        assert z_lo & ~z_hi == 0 and z_lo != z_hi
        between = [z for z in lat.flats if z_lo & ~z == 0 and z & ~z_hi == 0 and z not in (z_lo, z_hi)]
        assert not between


def test_uniform_u24_breaks_trichotomy():
    u = uniform_matroid(2, 4)
    lat = enumerate_cyclic_flats(u)
    assert len(lat) == 2
    with pytest.raises(TrichotomyViolation) as info:
        classify_edges(lat)
    assert (info.value.delta_rank, info.value.delta_nullity) == (2, 2)


def test_two_element_lattice_atoms_and_coatoms():
    # triangle: lattice {∅, E}; E is both the only atom and the only coatom
    m = BinaryMatroid(gf2.parse_matrix("101\n011"))
    lat = enumerate_cyclic_flats(m)
    assert len(lat) == 2
    assert lat.atoms == (lat.top,) and lat.coatoms == (lat.bottom,)
    assert distance_via_flats(m, lat) == 2


def test_distance_rejects_coloops():
    m = BinaryMatroid(gf2.parse_matrix("100\n010\n001"))
    with pytest.raises(DegenerateCodeError):
        distance_via_flats(m)


def test_budget_exceeded():
    m = BinaryMatroid(gf2.parse_matrix(EXAMPLE_1))
    with pytest.raises(EnumerationBudgetExceeded):
        enumerate_cyclic_flats(m, strategy="independent", budget=5)


def test_generic_matroid_uses_independent_strategy():
    u = uniform_matroid(3, 5)
    lat = enumerate_cyclic_flats(Matroid(u.ground, u.rank))
    assert lat.flats == (0, u.ground)


def test_dot_is_deterministic(ex1):
    m, lat = ex1
    first = to_dot(lat)
    assert first == to_dot(enumerate_cyclic_flats(m))
    assert first.startswith("digraph cyclic_flats {") and "rankdir=BT" in first
    assert 'label="{} ρ=0 η=0"' in first and 'label="{1,2,3,4,5,6,7,8,9,10} ρ=4 η=6"' in first
    assert 'label="{1,2,5} ρ=2 η=1"' in first
    assert first.count("->") == len(lat.hasse)
    assert 'label="η=3"' in first and 'label="ρ=2"' in first


def test_lattice_dict(ex1):
    _, lat = ex1
    d = lattice_to_dict(lat)
    assert len(d["flats"]) == 17 and d["flats"][d["top"]]["nullity"] == 6
