from fractions import Fraction

import pytest
from hypothesis import given

import oracles
from conftest import spaces
from qulab.relation import Entourage, to_points
from qulab.topology import (
    AXIOMS,
    FiniteSpace,
    PartitionError,
    TopologyError,
    compute_invariant,
    invariant_report,
    level_is_continuous,
    sigma_discrete_metric,
)

SIER = FiniteSpace.sierpinski()


def test_sierpinski_from_opens():
    X = FiniteSpace.from_opens(2, [[], [1], [0, 1]])
    assert X == SIER
    assert X.min_nbhd(0) == 0b11 and X.min_nbhd(1) == 0b10


def test_identity_preorder_gives_discrete_space():
    assert FiniteSpace.from_preorder(Entourage.diagonal(4)) == FiniteSpace.discrete(4)


def test_non_topology_rejected():
    with pytest.raises(TopologyError, match="union"):
        FiniteSpace.from_opens(2, [[], [0], [1]])
    with pytest.raises(TopologyError, match="carrier"):
        FiniteSpace.from_opens(2, [[], [0]])


def test_intransitive_preorder_rejected():
    with pytest.raises(TopologyError) as exc:
        FiniteSpace.from_preorder(Entourage.from_pairs(3, [(0, 1), (1, 2)]))
    assert exc.value.witness == (0, 1, 2)


def test_closure_operators_on_sierpinski():
    assert SIER.closure(0b10) == 0b11
    assert SIER.closure(0) == 0
    assert SIER.interior(0b01) == 0
    assert SIER.int_closure(0b10) == 0b11


def test_separation_examples():
    assert FiniteSpace.discrete(2).separation_check("Hausdorff")
    t1 = SIER.separation_check("T1")
    assert not t1 and t1.witness == (0, 1)
    qr = SIER.separation_check("quasi_regular")
    assert not qr and qr.witness == 0b10


def test_invariant_examples():
    assert SIER.invariant("d") == 1
    assert FiniteSpace.discrete(5).invariant("c") == 5
    assert FiniteSpace.discrete(9).invariant("log_of_size") == 4
    rep = invariant_report(SIER)
    assert rep.values["d"] == rep.values["c"] == rep.values["l"] == 1


def test_strongly_discrete_examples():
    v = FiniteSpace.discrete(3).strongly_discrete_check(0b111)
    assert v and v.witness == {0: 1, 1: 2, 2: 4}
    assert not SIER.strongly_discrete_check(0b11)
    assert SIER.strongly_discrete_check(0)


def test_unknown_invariant_lists_names():
    with pytest.raises(ValueError, match="valid names"):
        compute_invariant(SIER, "weight")


def test_diagonal_numbers_need_hausdorff():
    with pytest.raises(ValueError):
        compute_invariant(SIER, "delta")
    assert compute_invariant(FiniteSpace.discrete(3), "deltabar") == 1


# --- brute-force agreement on every space with at most three points ------------------

BRUTE = {
    "nw": oracles.network_weight,
    "w": oracles.weight,
    "d": oracles.density,
    "l": oracles.lindelof,
    "lbar": oracles.weak_lindelof,
    "s": oracles.spread,
    "e": oracles.extent,
    "c": oracles.cellularity,
    "de": oracles.discrete_extent,
    "dc": oracles.discrete_cellularity,
    "psi": oracles.pseudocharacter,
    "chi": oracles.character,
    "hd": lambda S: oracles.hereditary(S, oracles.density),
    "hl": lambda S: oracles.hereditary(S, oracles.lindelof),
}


@pytest.mark.parametrize("name", sorted(BRUTE))
def test_plain_invariants_match_definitions(name, oracle_spaces_3):
    for S, X in oracle_spaces_3:
        assert compute_invariant(X, name) == BRUTE[name](S), (name, X.encode())


@pytest.mark.parametrize("name,half,dense", [
    ("lstar", False, False), ("lbarstar", False, True),
    ("lstar_half", True, False), ("lbarstar_half", True, True),
])
def test_star_invariants_quantify_over_all_open_covers(name, half, dense, oracle_spaces_3):
    for S, X in oracle_spaces_3:
        for k in range(3):
            assert compute_invariant(X, name, k) == oracles.star_number(S, k, half, dense), (name, k, X.encode())


def test_star_omega_is_the_eventual_value(oracle_spaces_3):
    for S, X in oracle_spaces_3:
        # three stars already reach the whole component on three points
        assert compute_invariant(X, "lstar_omega") == min(oracles.star_number(S, k, False, False) for k in range(4))
        assert compute_invariant(X, "lbarstar_omega") == min(oracles.star_number(S, k, False, True) for k in range(4))


def _clopen_separates(S, a, b):
    return any(a in o and b not in o and (S.X - o) in S.opens for o in S.opens)


def _brute_axiom(S, name):
    X, nb, cl = S.X, S.nbhds, lambda a: oracles.closure(S, a)
    pts = sorted(X)
    if name == "T0":
        return all(any((x in o) != (y in o) for o in S.opens) for x in pts for y in pts if x < y)
    if name == "T1":
        return all(any(x in o and y not in o for o in S.opens) for x in pts for y in pts if x != y)
    if name == "Hausdorff":
        return all(any(not (u & v) for u in nb(x) for v in nb(y)) for x in pts for y in pts if x < y)
    if name == "regular":
        return all(any(cl(v) <= o for v in nb(x)) for x in pts for o in nb(x))
    if name == "quasi_regular":
        return all(any(v and cl(v) <= u for v in S.opens) for u in S.opens if u)
    if name == "functionally_Hausdorff":
        return all(_clopen_separates(S, x, y) for x in pts for y in pts if x != y)
    if name == "completely_regular":
        return all(any(x in c and c <= o and (X - c) in S.opens for c in S.opens) for x in pts for o in nb(x))
    if name == "collectively_Hausdorff":
        def discrete(d):
            return all(any(o & d == {x} for o in nb(x)) for x in d)

        def strongly(d):
            from itertools import product
            for choice in product(*[nb(x) for x in sorted(d)]):
                if all(any(sum(1 for u in choice if u & o) <= 1 for o in nb(z)) for z in pts):
                    return True
            return not d
        return all(strongly(d) for d in oracles.subsets(X) if discrete(d) and cl(d) == d)
    raise KeyError(name)


@pytest.mark.parametrize("axiom", AXIOMS)
def test_separation_axioms_match_definitions(axiom, oracle_spaces_3):
    for S, X in oracle_spaces_3:
        assert X.separation_check(axiom).holds == _brute_axiom(S, axiom), (axiom, X.encode())


# --- structural properties ------------------------------------------------------

@given(spaces(max_n=6))
def test_closure_is_a_closure_operator(X):
    for a in range(1 << X.n):
        c = X.closure(a)
        assert c & a == a and X.closure(c) == c and X.is_closed(c)
        assert X.interior(a) & ~a == 0 and X.is_open(X.interior(a))


@given(spaces(max_n=6))
def test_opens_are_exactly_the_up_sets(X):
    opens = set(X.opens)
    for m in range(1 << X.n):
        up = all(X.nbhd[x] & ~m == 0 for x in to_points(m))
        assert (m in opens) == up


@given(spaces(max_n=6))
def test_components_partition_the_carrier(X):
    seen = 0
    for c in set(X.components):
        assert c & seen == 0 and X.is_open(c) and X.is_closed(c)
        seen |= c
    assert seen == X.top


@given(spaces(max_n=5))
def test_t1_spaces_are_discrete(X):
    assert X.separation_check("T1").holds == (X == FiniteSpace.discrete(X.n))
    assert X.separation_check("Hausdorff").holds == X.separation_check("T1").holds


@given(spaces(max_n=5))
def test_local_invariants_are_trivial(X):
    for name in ("psi", "chi", "psibar"):
        assert compute_invariant(X, name) == 1


# --- the sigma-discrete pseudometric --------------------------------------------------

def test_sigma_metric_on_discrete_example():
    X = FiniteSpace.discrete(3)
    table = sigma_discrete_metric(X, [0b011, 0b100], assignments=[{0: 0b001, 1: 0b010}, {2: 0b100}])
    assert table.values[0][1] == 1 and table.values[0][2] == 1
    assert all(table.values[x][x] == 0 for x in range(3))
    assert table.axiom_violation() is None and table.separates_points()
    assert all(level_is_continuous(X, lv) for lv in table.levels)


def test_sigma_metric_rejects_non_discrete_piece():
    with pytest.raises(PartitionError):
        sigma_discrete_metric(SIER, [0b11])


def test_sigma_metric_values_are_dyadic():
    X = FiniteSpace.discrete(4)
    table = sigma_discrete_metric(X, [0b0001, 0b0010, 0b1100])
    for row in table.values:
        for v in row:
            assert isinstance(v, Fraction) and v.denominator & (v.denominator - 1) == 0
