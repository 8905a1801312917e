import pytest
from hypothesis import given, settings, strategies as st

from fickle.analysis import (
    MAX_DIRECT,
    birkhoff_witness,
    enumerate_direct,
    forbidden_sublattice,
    is_distributive,
    is_n_direct,
    join_irreducibles,
    join_primes,
)
from fickle.fixtures import load_fixture
from fickle.lattice_core import StructureError, canonical_key, join, meet

from _lattices import random_lattice, set_lattice


@pytest.fixture(scope="module")
def catalog():
    return enumerate_direct(3)


def _three_way(L):
    law = is_distributive(L)[0]
    return law, forbidden_sublattice(L) is None, birkhoff_witness(L) is None


def test_n5_witnesses():
    n5 = load_fixture("n5")
    ok, triple = is_distributive(n5)
    assert not ok
    a, b, c = triple
    assert meet(n5, a, join(n5, b, c)) != join(n5, meet(n5, a, b), meet(n5, a, c))
    w = birkhoff_witness(n5)
    assert w.element == "b" and w.cover == ("a0", "a1") and w.check(n5)
    assert forbidden_sublattice(n5)[0] == "n5"
    assert forbidden_sublattice(load_fixture("m3"))[0] == "m3"


def test_bottom_counts_as_irreducible():
    d = load_fixture("diamond")
    assert "0" in join_irreducibles(d) and "0" in join_primes(d)
    assert "1" not in join_irreducibles(d)


def test_requires_lattice():
    with pytest.raises(StructureError):
        is_distributive(load_fixture("m3_usl"))


def test_directness():
    ok, gens = is_n_direct(load_fixture("l7"), 3)
    assert ok and len(gens) == 3
    assert not is_n_direct(load_fixture("l7"), 2)[0]
    assert is_n_direct(load_fixture("diamond"), 2)[0]
    assert not is_n_direct(load_fixture("lempp"), 3)[0]


def test_enumeration_sizes(catalog):
    assert [len(L) for L in enumerate_direct(2)] == [4]
    assert len(catalog) == 12
    assert len({canonical_key(L) for L in catalog}) == 12
    assert all(len(L) <= 11 for L in catalog)
    with pytest.raises(ValueError):
        enumerate_direct(MAX_DIRECT + 1)


def test_catalog_closed_under_checker(catalog):
    for L in catalog:
        assert any(is_n_direct(L, m)[0] for m in range(2, 4))


def test_primes_versus_irreducibles(catalog):
    for L in catalog:
        irr, primes = set(join_irreducibles(L)), set(join_primes(L))
        assert primes <= irr
        assert (primes == irr) == is_distributive(L)[0]


def test_three_way_on_catalog(catalog):
    for L in catalog:
        law, no_pattern, no_witness = _three_way(L)
        assert law == no_pattern == no_witness


@settings(max_examples=120)
@given(st.randoms(use_true_random=False))
def test_three_way_random(rng):
    L = random_lattice(rng)
    law, no_pattern, no_witness = _three_way(L)
    assert law == no_pattern == no_witness
    w = birkhoff_witness(L)
    if w:
        assert w.check(L)


@settings(max_examples=60)
@given(st.randoms(use_true_random=False))
def test_set_rings_are_distributive(rng):
    L = set_lattice(rng)
    assert _three_way(L) == (True, True, True)
    assert set(join_primes(L)) == set(join_irreducibles(L))
