import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import entourages, from_rel, to_rel
from qulab.relation import (
    CarrierMismatch,
    Cover,
    Entourage,
    alt_power,
    ball,
    compose,
    inverse,
    star,
    to_mask,
    to_points,
)

U01 = Entourage.from_pairs(3, [(0, 1)])


def test_inverse_examples():
    d = Entourage.diagonal(2)
    assert inverse(d) == d
    assert inverse(Entourage.from_pairs(2, [(0, 1)])) == Entourage.from_pairs(2, [(1, 0)])


def test_compose_example():
    u = Entourage.from_pairs(3, [(0, 1)])
    v = Entourage.from_pairs(3, [(1, 2)])
    assert compose(u, v) == Entourage.from_pairs(3, [(0, 1), (1, 2), (0, 2)])


def test_alt_power_examples():
    assert alt_power(U01, "pm", 0) == Entourage.diagonal(3)
    assert alt_power(U01, "mp", 2) == Entourage.from_pairs(3, [(0, 1), (1, 0)])
    assert alt_power(Entourage.from_pairs(2, [(0, 1)]), "pm", 2) == Entourage.full(2)


def test_ball_examples():
    assert ball(Entourage.diagonal(3), 0b001) == 0b001
    assert ball(U01, 0b001) == 0b011
    assert ball(U01, 0) == 0


def test_star_examples():
    c = Cover.of(3, [[0, 1], [1, 2]])
    assert star(c, 0b001, 0) == 0b001
    assert star(c, 0b001, 1) == 0b011
    assert star(c, 0b001, 2) == 0b111


def test_rejects_non_reflexive_rows():
    with pytest.raises(ValueError, match="reflexive"):
        Entourage(2, (0b01, 0b01))


def test_carrier_mismatch():
    with pytest.raises(CarrierMismatch):
        compose(Entourage.diagonal(2), Entourage.diagonal(3))


def test_cover_must_cover():
    with pytest.raises(ValueError):
        Cover.of(3, [[0], [1]])


def test_negative_alternating_power_rejected():
    with pytest.raises(ValueError):
        alt_power(U01, "pm", -1)


def test_plain_powers():
    u = Entourage.from_pairs(3, [(0, 1), (1, 2)])
    assert alt_power(u, "plain", 2) == compose(u, u)
    assert alt_power(u, "plain", -1) == inverse(u)


def test_mask_helpers_round_trip():
    assert to_points(to_mask([4, 0, 2])) == [0, 2, 4]


def test_encode_is_fixed_width_hex():
    assert Entourage.full(5).encode() == "1f.1f.1f.1f.1f"


def test_first_difference_is_smallest_missing_pair():
    a = Entourage.from_pairs(3, [(2, 0), (1, 2)])
    assert a.first_difference(Entourage.diagonal(3)) == (1, 2)
    assert Entourage.diagonal(3).first_difference(a) is None


@given(entourages(max_n=4), st.data())
def test_compose_matches_pair_enumeration(u, data):
    v = data.draw(entourages(n=u.n))
    assert to_rel(compose(u, v)) == oracles.comp(to_rel(u), to_rel(v))


@given(entourages(max_n=5))
def test_inverse_is_an_involution(u):
    assert inverse(inverse(u)) == u
    assert to_rel(inverse(u)) == oracles.inv(to_rel(u))


@given(entourages(max_n=4), st.integers(0, 5))
def test_alternating_powers_match_left_to_right_products(u, k):
    r = to_rel(u)
    assert to_rel(alt_power(u, "pm", k)) == oracles.alt(r, False, k, u.n)
    assert to_rel(alt_power(u, "mp", k)) == oracles.alt(r, True, k, u.n)


@given(entourages(max_n=5), st.integers(1, 4))
def test_alternating_powers_grow(u, k):
    assert alt_power(u, "pm", k - 1) <= alt_power(u, "pm", k)
    assert alt_power(u, "mp", k - 1) <= alt_power(u, "pm", k)


@given(entourages(max_n=5), st.data())
def test_composition_is_associative(u, data):
    v = data.draw(entourages(n=u.n))
    w = data.draw(entourages(n=u.n))
    assert compose(compose(u, v), w) == compose(u, compose(v, w))
    assert inverse(compose(u, v)) == compose(inverse(v), inverse(u))


@given(entourages(max_n=5), st.data())
def test_ball_is_union_of_point_balls(u, data):
    a = data.draw(st.integers(0, (1 << u.n) - 1))
    assert to_points(ball(u, a)) == sorted(oracles.ball(to_rel(u), to_points(a)))


@given(entourages(max_n=5), st.data(), st.integers(0, 4))
def test_star_matches_definition(u, data, k):
    a = data.draw(st.integers(0, (1 << u.n) - 1))
    cover = [frozenset(to_points(r)) for r in u.rows]
    assert to_points(star(Cover.balls(u), a, k)) == sorted(oracles.star_of(cover, frozenset(to_points(a)), k))


@given(entourages(max_n=5))
def test_from_pairs_round_trip(u):
    assert from_rel(u.n, u.pairs()) == u
    assert Entourage.from_matrix(u.matrix()) == u
