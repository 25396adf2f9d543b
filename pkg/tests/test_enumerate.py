import random

import pytest

import oracles
from qulab.enumerate import (
    KNOWN_MONOID_CLASSES,
    KNOWN_TOPOLOGIES,
    InstanceStream,
    all_entourages,
    encode_instance,
    enumerate_spaces,
    monoid_tables,
    quasi_pairs,
    random_entourage,
    random_quasi_pairs,
    topological_monoids,
    topologies,
    topologies_by_filter,
)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 4), (3, 29)])
def test_topology_counts(n, count):
    assert len(enumerate_spaces("topologies", n)) == count


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_topologies_match_generate_and_filter(n):
    assert {frozenset(X.opens) for X in topologies(n)} == set(topologies_by_filter(n))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_topologies_match_set_family_oracle(n):
    expected = {frozenset(sum(1 << p for p in o) for o in fam) for fam in oracles.all_topologies(n)}
    assert {frozenset(X.opens) for X in topologies(n)} == expected


def test_five_point_count():
    assert len(topologies(5)) == KNOWN_TOPOLOGIES[5]


@pytest.mark.parametrize("n,classes", [(1, 1), (2, 3), (3, 9), (4, 33)])
def test_dedup_counts_homeomorphism_classes(n, classes):
    assert len(topologies(n, dedup=True)) == classes


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_monoid_classes(n):
    assert len(monoid_tables(n, dedup=True)) == KNOWN_MONOID_CLASSES[n]


def test_labelled_monoid_counts():
    assert [len(monoid_tables(n)) for n in (1, 2, 3, 4)] == [1, 4, 33, 624]
    assert [len(topological_monoids(n)) for n in (1, 2, 3)] == [1, 8, 96]


def test_topologies_sorted_and_distinct():
    enc = [X.encode() for X in topologies(4)]
    assert enc == sorted(enc) and len(set(enc)) == len(enc)


def test_entourage_stream_is_every_reflexive_relation():
    assert len(all_entourages(3)) == 2 ** 6
    assert {frozenset(u.pairs()) for u in all_entourages(3)} == set(oracles.reflexive_relations(3))


def test_quasi_pairs_cover_every_ordered_pair_of_preorders():
    pairs = quasi_pairs(3)
    assert len(pairs) == 29 * 29
    assert all(L.is_quasi() and R.is_quasi() for L, R in pairs)


def test_random_generators_are_seeded():
    assert random_quasi_pairs(4, 20, seed=7) == random_quasi_pairs(4, 20, seed=7)
    a = random_entourage(5, random.Random(3))
    assert a == random_entourage(5, random.Random(3)) and a.n == 5


@pytest.mark.parametrize("kind,n", [("topologies", 6), ("topologies", 0), ("monoids", 5), ("shapes", 2)])
def test_stream_range_is_enforced(kind, n):
    with pytest.raises(ValueError):
        InstanceStream(kind, n)


@pytest.mark.parametrize("kind", ["pairs", "entourages"])
def test_dedup_is_rejected_where_undefined(kind):
    with pytest.raises(ValueError, match="dedup"):
        InstanceStream(kind, 2, dedup=True)


def test_instance_encodings_are_unique():
    for kind, n in (("topologies", 3), ("pairs", 2), ("monoids", 3), ("entourages", 3)):
        enc = [encode_instance(kind, i) for i in InstanceStream(kind, n)]
        assert len(set(enc)) == len(enc), kind
