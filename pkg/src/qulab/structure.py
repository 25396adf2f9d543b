"""Pairs of quasi-uniformities: commuting conditions, the quasi-Roelcke
uniformity, Urysohn-type separators and the separating-pair constructions.

All filters are principal, so a filter inclusion A ⊆ B between filters is the
reverse inclusion min(B) ⊆ min(A) of their minima. Quantifier blocks such as
"for all L there is L~ such that for all R there is R~ ..." collapse to the
minima as well: shrinking L~, R~ only helps and shrinking L, R only hurts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .preuniformity import (
    PreUniformity,
    PreconditionError,
    closure_bar,
    ell,
    space_ell,
)
from .relation import CarrierMismatch, Entourage, alt_power, ball, bits, compose, inverse, to_points
from .search import min_cover
from .topology import FiniteSpace, Verdict


class PremiseError(PreconditionError):
    """A theorem premise fails; `premise` names it."""

    def __init__(self, premise: str, witness: Any = None):
        super().__init__(premise, witness)
        self.premise = premise


def _check_pair(L: PreUniformity, R: PreUniformity) -> None:
    if L.n != R.n:
        raise CarrierMismatch(f"carriers differ: {L.n} vs {R.n}")
    for name, P in (("L", L), ("R", R)):
        q = P.is_quasi()
        if not q:
            raise PreconditionError(f"{name} is not a quasi-uniformity", q.witness)


def _inclusion(a: Entourage, b: Entourage) -> Verdict:
    extra = a.first_difference(b)
    return Verdict(extra is None, extra)


def pm_conditions(l: Entourage, r: Entourage) -> tuple[Verdict, Verdict]:
    """The two halves of +-subcommuting, on minima: R^-1 L ⊆ L R^-1 and L^-1 R ⊆ R L^-1."""
    li, ri = inverse(l), inverse(r)
    return _inclusion(compose(ri, l), compose(l, ri)), _inclusion(compose(li, r), compose(r, li))


@dataclass(frozen=True)
class CommutingProfile:
    commuting: bool
    pm_subcommuting: bool
    normally_pm_subcommuting: bool
    normally_commuting: bool
    prop31_consistent: bool
    prop31_conditions: tuple[bool, bool, bool, bool]
    witnesses: dict[str, Any] = field(default_factory=dict)


def commuting_profile(L: PreUniformity, R: PreUniformity) -> CommutingProfile:
    _check_pair(L, R)
    l, r = L.min, R.min
    li, ri = inverse(l), inverse(r)
    lr, rl = compose(l, r), compose(r, l)
    c_lr = _inclusion(lr, rl)
    c_rl = _inclusion(rl, lr)
    commuting = c_lr.holds and c_rl.holds
    c1, c2 = pm_conditions(l, r)
    lri, rli = compose(l, ri), compose(r, li)
    c3, c4 = lri.is_transitive(), rli.is_transitive()
    conds = (c1.holds, c2.holds, c3, c4)
    pm = c1.holds and c2.holds
    witnesses: dict[str, Any] = {}
    if not commuting:
        witnesses["commuting"] = c_lr.witness if not c_lr else c_rl.witness
    if not pm:
        w = ("R^-1 L in L R^-1", c1.witness) if not c1 else ("L^-1 R in R L^-1", c2.witness)
        witnesses["pm_subcommuting"] = w
        witnesses["normally_pm_subcommuting"] = w
    if not commuting:
        witnesses["normally_commuting"] = witnesses["commuting"]
    return CommutingProfile(
        commuting=commuting,
        pm_subcommuting=pm,
        normally_pm_subcommuting=pm,
        normally_commuting=commuting,
        prop31_consistent=len(set(conds)) == 1,
        prop31_conditions=conds,
        witnesses=witnesses,
    )


def quasi_roelcke(L: PreUniformity, R: PreUniformity) -> PreUniformity:
    """FU = L R^-1 ∨ R L^-1; its minimum is the intersection of the two products."""
    if L.n != R.n:
        raise CarrierMismatch(f"carriers differ: {L.n} vs {R.n}")
    l, r = L.min, R.min
    m = compose(l, inverse(r)) & compose(r, inverse(l))
    return PreUniformity(L.n, (m,), L.ambient or R.ambient)


def common_topology(L: PreUniformity, R: PreUniformity) -> FiniteSpace | None:
    tl, tr = L.generated_topology(), R.generated_topology()
    return tl if tl == tr else None


def coarser(a: FiniteSpace, b: FiniteSpace) -> bool:
    """Every a-open set is b-open."""
    return all(b.nbhd[x] & ~a.nbhd[x] == 0 for x in range(a.n))


# --- step functions ----------------------------------------------------------

@dataclass(frozen=True)
class StepFunction:
    values: tuple[Fraction, ...]

    def __call__(self, x: int) -> Fraction:
        return self.values[x]

    def preimage(self, pred) -> int:
        m = 0
        for x, v in enumerate(self.values):
            if pred(v):
                m |= 1 << x
        return m

    def is_continuous(self, X: FiniteSpace) -> bool:
        """Every strict sub- and super-level set is open."""
        for t in set(self.values) | {Fraction(0), Fraction(1)}:
            if not X.is_open(self.preimage(lambda v: v < t)):
                return False
            if not X.is_open(self.preimage(lambda v: v > t)):
                return False
        return True


def _require_normal_generating(X: FiniteSpace, U: PreUniformity) -> None:
    if U.n != X.n:
        raise CarrierMismatch("space and quasi-uniformity live on different carriers")
    if not U.is_quasi():
        raise PremiseError("not a quasi-uniformity", U.is_quasi().witness)
    if U.generated_topology() != X:
        raise PremiseError("quasi-uniformity does not generate the topology")
    nv = U.is_normal(X)
    if not nv:
        raise PremiseError("quasi-uniformity is not normal", nv.witness)


def urysohn_separator(X: FiniteSpace, U: PreUniformity, A: int, E: Entourage | None = None) -> StepFunction:
    """Continuous f with f = 0 on A and f^-1[0,1) inside int cl B(A;E).

    For a normal quasi-uniformity generating the topology the set
    cl B(A;M) is clopen (normality applied to B(A;M) makes it open), so the
    union of the components meeting A is a clopen set inside it; f is 0
    there and 1 elsewhere.
    """
    _require_normal_generating(X, U)
    E = U.min if E is None else E
    if not U.contains(E):
        raise PremiseError("entourage does not belong to the quasi-uniformity", U.min.first_difference(E))
    zero = 0
    for a in bits(A):
        zero |= X.components[a]
    f = StepFunction(tuple(Fraction(0) if (zero >> x) & 1 else Fraction(1) for x in range(X.n)))
    target = X.int_closure(ball(E, A))
    assert f.preimage(lambda v: v < 1) & ~target == 0, "separator escapes int cl B(A;E)"
    assert f.is_continuous(X)
    return f


@dataclass(frozen=True)
class SeparatingFamily:
    pairs: tuple[tuple[Entourage, Entourage], ...] | None = None
    functions: tuple[StepFunction, ...] | None = None

    def separates(self, n: int) -> Verdict:
        if self.functions is not None:
            for x in range(n):
                for y in range(x + 1, n):
                    if all(f(x) == f(y) for f in self.functions):
                        return Verdict(False, (x, y))
            return Verdict(True)
        acc = Entourage.full(n)
        for l, r in self.pairs or ():
            acc = acc & compose(l, inverse(r))
        extra = acc.first_difference(Entourage.diagonal(n))
        return Verdict(extra is None, extra)


def separating_functions(
    X: FiniteSpace, U: PreUniformity, families: Sequence[tuple[int, Entourage]]
) -> SeparatingFamily:
    _require_normal_generating(X, U)
    for x in range(X.n):
        for y in range(X.n):
            if x == y:
                continue
            if not any((a >> x) & 1 and not (X.closure(ball(e, a)) >> y) & 1 for a, e in families):
                raise PremiseError("separation hypothesis fails", (x, y))
    fam = SeparatingFamily(functions=tuple(urysohn_separator(X, U, a, e) for a, e in families))
    v = fam.separates(X.n)
    assert v, f"constructed functions fail to separate {v.witness}"
    return fam


def theorem22_functions(X: FiniteSpace, U: PreUniformity, A: PreUniformity) -> tuple[SeparatingFamily, int]:
    """Separating functions from a pre-uniformity A with ∩ cl(A^-1 A U) = Δ.

    Z is a minimum set with B(Z;A) = X and the families are the balls
    B(z;A) paired with the minimum of U. Returns the family and the bound
    psibar(A^-1 A U) * ell(A) = ell(A).
    """
    if not X.separation_check("Hausdorff"):
        raise PremiseError("space not Hausdorff", X.separation_check("Hausdorff").witness)
    a = A.min
    core = closure_bar(compose(compose(inverse(a), a), U.min), X)
    if not core.is_diagonal():
        raise PremiseError("closure of A^-1 A U is not the diagonal", core.first_difference(Entourage.diagonal(X.n)))
    z = min_cover(X.top, a.rows)
    fam = separating_functions(X, U, [(a.rows[p], U.min) for p in z])
    return fam, ell(a)


# --- theorem-level checks used by the regression laws --------------------------

def theorem33_check(L: PreUniformity, R: PreUniformity) -> Verdict | None:
    """None when the premises fail; otherwise whether FU is a uniformity with a coarser topology."""
    tau = common_topology(L, R)
    if tau is None or not commuting_profile(L, R).pm_subcommuting:
        return None
    fu = quasi_roelcke(L, R)
    if not fu.is_uniformity():
        return Verdict(False, ("not a uniformity", fu.is_uniformity().witness))
    if not coarser(fu.generated_topology(), tau):
        return Verdict(False, "topology of FU is not coarser")
    return Verdict(True)


def prop35_check(L: PreUniformity, R: PreUniformity) -> Verdict | None:
    tau = common_topology(L, R)
    if tau is None or not tau.separation_check("Hausdorff") or not commuting_profile(L, R).pm_subcommuting:
        return None
    if common_topology(L.inverse(), R.inverse()) is None:
        return None
    for name, P in (("L", L), ("R", R)):
        if not P.separation_degree("both", 3):
            return Verdict(False, name)
    return Verdict(True)


def prop43_check(L: PreUniformity, R: PreUniformity) -> Verdict | None:
    tau = common_topology(L, R)
    if tau is None or not commuting_profile(L, R).normally_pm_subcommuting:
        return None
    for name, P in (("L", L), ("R", R)):
        v = P.is_normal(tau)
        if not v:
            return Verdict(False, (name, v.witness))
    return Verdict(True)


# --- separating pairs -----------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    size: int
    bound: int
    separated: bool
    holds: bool
    slack: int
    note: str = ""


SEPARATING_MODES = ("thm44_item1", "thm44_item2", "thm44_item3", "thm44_item4")


def _common_hausdorff(L: PreUniformity, R: PreUniformity) -> FiniteSpace:
    _check_pair(L, R)
    tau = common_topology(L, R)
    if tau is None:
        raise PremiseError("L and R generate different topologies")
    h = tau.separation_check("Hausdorff")
    if not h:
        raise PremiseError("common topology not Hausdorff", h.witness)
    prof = commuting_profile(L, R)
    if not prof.normally_pm_subcommuting:
        raise PremiseError("not normally +-subcommuting", prof.witnesses.get("normally_pm_subcommuting"))
    return tau


def _first_cover(m: Entourage) -> tuple[int, ...]:
    found = min_cover((1 << m.n) - 1, m.rows)
    assert found is not None
    return found


def _subset_or_fail(a: Entourage, b: Entourage, what: str) -> None:
    if not a.issubset(b):
        raise AssertionError(f"construction step failed: {what} at {a.first_difference(b)}")


def _item1_pairs(l: Entourage, r: Entourage) -> tuple[list[tuple[Entourage, Entourage]], int]:
    n = l.n
    lt = l  # smallest member; L~ ⊆ L holds trivially
    z_l = _first_cover(inverse(lt))
    pairs = []
    for z in z_l:
        r_z = r
        if r_z.rows[z] & ~l.rows[z]:
            raise AssertionError("no R-ball inside the L-ball; topologies differ")
        r_tilde = r
        _subset_or_fail(compose(inverse(lt), r_tilde), compose(r_z, inverse(l)), "L~^-1 R~ ⊆ R_z L^-1")
        pairs.append((l, r_tilde))
    bound = 1 * ell(inverse(l))
    return pairs, bound


def separating_pairs(
    L: PreUniformity,
    R: PreUniformity,
    mode: str,
    A: PreUniformity | None = None,
) -> tuple[SeparatingFamily, BoundReport]:
    """Build the family of pairs from the separating-pairs theorem, verify it, and compare with the bound."""
    if mode not in SEPARATING_MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {SEPARATING_MODES}")
    tau = _common_hausdorff(L, R)
    l, r = L.min, R.min
    n = L.n
    note = "finite Hausdorff spaces are discrete, so both minima are the diagonal"

    if mode == "thm44_item1":
        pairs, bound = _item1_pairs(l, r)
    elif mode == "thm44_item2":
        inv_l, inv_r = L.inverse(), R.inverse()
        if common_topology(inv_l, inv_r) is None:
            raise PremiseError("L^-1 and R^-1 generate different topologies")
        if not commuting_profile(inv_l, inv_r).normally_pm_subcommuting:
            raise PremiseError("L^-1 and R^-1 not normally +-subcommuting")
        raw, _ = _item1_pairs(inverse(l), inverse(r))
        # +-subcommuting of the inverses: R L^-1 ⊆ L^-1 R at the minimum
        _subset_or_fail(compose(r, inverse(l)), compose(inverse(l), r), "R L^-1 ⊆ L^-1 R")
        pairs = [(l, r) for _ in raw]
        bound = 1 * ell(l)
    elif mode == "thm44_item3":
        prof = commuting_profile(L, R)
        if not prof.normally_commuting:
            raise PremiseError("not normally commuting", prof.witnesses.get("normally_commuting"))
        lll = alt_power(l, "pm", 3)
        if not lll.is_diagonal():
            raise PremiseError("L L^-1 L is not the diagonal", lll.first_difference(Entourage.diagonal(n)))
        lt = l
        cover_ent = compose(lt, inverse(lt)) & compose(inverse(lt), lt)
        a_l = _first_cover(cover_ent)
        pairs = []
        for a in a_l:
            if r.rows[a] & ~l.rows[a]:
                raise AssertionError("no R-ball inside the L-ball; topologies differ")
            _subset_or_fail(compose(lt, r), compose(r, l), "L~ R^ ⊆ R_a L")
            _subset_or_fail(compose(inverse(lt), r), compose(r, inverse(l)), "L~^-1 R~ ⊆ R^ L^-1")
            pairs.append((l, r))
        bound = 1 * ell(cover_ent)
    else:
        if A is None:
            raise ValueError("thm44_item4 needs a pre-uniformity A")
        a = A.min
        core = closure_bar(compose(compose(inverse(a), a), l), tau)
        if not core.is_diagonal():
            raise PremiseError("closure of A^-1 A L is not the diagonal", core.first_difference(Entourage.diagonal(n)))
        # psibar(A^-1 A L) is 1 here, the finite branch of the proof:
        # one pair (L, R_x) per point with B(x;R_x) = {x}
        pairs = []
        for x in range(n):
            if r.rows[x] != 1 << x:
                raise AssertionError("R-ball of a point is not a singleton in a discrete space")
            pairs.append((l, r))
        bound = 1 * ell(a) * space_ell(tau, "pm", 2)

    fam = SeparatingFamily(pairs=tuple(pairs))
    sep = fam.separates(n)
    size = len(pairs)
    return fam, BoundReport(size, bound, sep.holds, sep.holds and size <= bound, bound - size, note)


# --- pseudocharacter bound table ---------------------------------------------------

@dataclass(frozen=True)
class BoundRow:
    ident: str
    lhs: int | None
    rhs: int | None
    holds: bool | None
    skipped: str | None = None


def _psi_fu(L: PreUniformity, R: PreUniformity) -> int:
    # a principal filter realises its intersection with one member
    return 1


def psi_bound_report(
    L: PreUniformity, R: PreUniformity, X: FiniteSpace | None = None, *, group: bool = False
) -> list[BoundRow]:
    """Both sides of every applicable pseudocharacter bound.

    Each row compares psi(FU) with one bound expression of a chain; the
    comparisons between consecutive bound expressions rely on infinite
    cardinal arithmetic and are not tabulated.
    """
    _check_pair(L, R)
    X = X or L.ambient or R.ambient or common_topology(L, R)
    ids_45 = [f"thm45_{k}{s}" for k, s in
              [(1, ""), (2, "a"), (2, "b"), (3, "a"), (3, "b"), (4, "a"), (4, "b"), (5, "a"), (5, "b"),
               (6, ""), (7, "a"), (7, "b"), (8, "a"), (8, "b"), (9, "a"), (9, "b")]]
    ids_51 = ["prop51_L", "prop51_R"]
    ids_75 = ["thm75_1a", "thm75_1b", "thm75_1c", "thm75_2a", "thm75_2b", "thm75_3a", "thm75_3b",
              "thm75_4a", "thm75_4b", "thm75_5", "thm74_chi"]
    all_ids = ids_45 + ids_51 + (ids_75 if group else [])

    def skip_all(reason: str) -> list[BoundRow]:
        return [BoundRow(i, None, None, None, reason) for i in all_ids]

    if X is None:
        return skip_all("L and R generate different topologies")
    if common_topology(L, R) != X:
        return skip_all("L and R do not both generate the topology")
    if not X.separation_check("Hausdorff"):
        return skip_all("space not Hausdorff")
    prof = commuting_profile(L, R)
    if not prof.normally_pm_subcommuting:
        return skip_all("not normally +-subcommuting")

    l = L.min
    li = inverse(l)
    lhs = _psi_fu(L, R)
    psi = psibar = 1
    e_pm2 = space_ell(X, "pm", 2)
    e_pm1 = space_ell(X, "pm", 1)
    e_vee2 = space_ell(X, "vee", 2)
    q_mp1 = space_ell(X, "mp", 1, family="q")
    q_pm1 = space_ell(X, "pm", 1, family="q")
    q_mp2 = space_ell(X, "mp", 2, family="q")
    q_vee2 = space_ell(X, "vee", 2, family="q")
    ell_l, ell_li = ell(l), ell(li)
    ell_sym = ell(l & li)
    ell_cross = ell(compose(l, li) & compose(li, l))
    ell_lil = ell(compose(li, l))

    def sep(mode: str, k: int) -> bool:
        return alt_power(l, mode, k).is_diagonal()

    inv_ok = common_topology(L.inverse(), R.inverse()) is not None and \
        commuting_profile(L.inverse(), R.inverse()).normally_pm_subcommuting
    comm3 = prof.normally_commuting and L.separation_degree("both", 3) and R.separation_degree("both", 3)

    rows: list[BoundRow] = []

    def add(ident: str, rhs: int, premise: bool = True, reason: str = "") -> None:
        if premise:
            rows.append(BoundRow(ident, lhs, rhs, lhs <= rhs))
        else:
            rows.append(BoundRow(ident, None, None, None, reason))

    add("thm45_1", psibar * ell_sym * e_pm2)
    add("thm45_2a", psi * ell_li)
    add("thm45_2b", psi * q_mp1)
    add("thm45_3a", psibar * ell_l * e_pm2, sep("mp", 3), "L not -+3-separated")
    add("thm45_3b", psibar * e_pm1, sep("mp", 3), "L not -+3-separated")
    add("thm45_4a", psibar * ell_cross * e_pm2, sep("pm", 4), "L not +-4-separated")
    add("thm45_4b", psibar * e_vee2, sep("pm", 4), "L not +-4-separated")
    add("thm45_5a", psibar * ell_lil * e_pm2, sep("mp", 5), "L not -+5-separated")
    add("thm45_5b", psibar * q_mp2 * e_pm2, sep("mp", 5), "L not -+5-separated")
    add("thm45_6", psibar * e_pm2, sep("pm", 6), "L not +-6-separated")
    add("thm45_7a", psi * ell_cross, comm3, "not normally commuting and 3-separated")
    add("thm45_7b", psi * q_vee2, comm3, "not normally commuting and 3-separated")
    add("thm45_8a", psi * ell_l, inv_ok, "inverses not normally +-subcommuting and co-topological")
    add("thm45_8b", psi * q_pm1, inv_ok, "inverses not normally +-subcommuting and co-topological")
    add("thm45_9a", psi * ell_l * ell_li, inv_ok, "inverses not normally +-subcommuting and co-topological")
    add("thm45_9b", psi * q_pm1 * q_mp1, inv_ok, "inverses not normally +-subcommuting and co-topological")
    # local pseudocharacter of L L^-1 and R R^-1
    rows.append(BoundRow("prop51_L", 1, psibar * e_pm2, 1 <= psibar * e_pm2))
    rows.append(BoundRow("prop51_R", 1, psibar * e_pm2, 1 <= psibar * e_pm2))
    if group:
        add("thm75_1a", min(psi * ell_li, psi * ell_l))
        add("thm75_1b", psibar * e_pm2 * min(ell_l, ell_li))
        add("thm75_1c", psibar * e_pm2 * min(q_pm1, q_mp1))
        add("thm75_2a", psi * ell_li * ell_l)
        add("thm75_2b", psi * q_mp1 * q_pm1)
        add("thm75_3a", psi * ell_cross)
        add("thm75_3b", psi * q_vee2)
        add("thm75_4a", psi * ell_lil * e_pm2, sep("mp", 4), "L not -+4-separated")
        add("thm75_4b", psi * q_mp2 * e_pm2, sep("mp", 4), "L not -+4-separated")
        add("thm75_5", psibar * e_pm2, sep("pm", 6), "L not +-6-separated")
        add("thm74_chi", X.invariant("chi"))
    return rows
