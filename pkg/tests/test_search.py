from itertools import combinations

from hypothesis import given
from hypothesis import strategies as st

from qulab.relation import popcount
from qulab.search import greedy_cover, max_hereditary, min_cover, min_cover_size


def brute_min_cover(universe, sets):
    for k in range(len(sets) + 1):
        for combo in combinations(range(len(sets)), k):
            acc = 0
            for i in combo:
                acc |= sets[i]
            if acc & universe == universe:
                return k
    return None


@given(st.integers(1, 7), st.data())
def test_min_cover_is_optimal(n, data):
    universe = (1 << n) - 1
    sets = data.draw(st.lists(st.integers(0, universe), min_size=0, max_size=8))
    found = min_cover(universe, sets)
    expected = brute_min_cover(universe, sets)
    if expected is None:
        assert found is None
    else:
        assert len(found) == expected
        acc = 0
        for i in found:
            acc |= sets[i]
        assert acc & universe == universe


def test_empty_universe_needs_nothing():
    assert min_cover(0, []) == ()


def test_min_cover_size_raises_without_cover():
    import pytest

    with pytest.raises(ValueError):
        min_cover_size(0b11, [0b01])


def test_greedy_reports_failure():
    assert greedy_cover(0b111, [0b011]) is None


@given(st.integers(1, 7), st.data())
def test_max_hereditary_matches_brute_force(n, data):
    # independent sets of a random graph form a hereditary family
    edges = data.draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))

    def ok(m):
        return not any((m >> a) & 1 and (m >> b) & 1 and a != b for a, b in edges)

    best = max(popcount(m) for m in range(1 << n) if ok(m))
    got = max_hereditary(n, ok)
    assert ok(got) and popcount(got) == best
