"""Registry of checkable laws, one entry per inequality, equality or implication.

A law has a stream kind, a premise and a check. The check returns None when the
law holds on an instance and a (lhs, rhs) pair describing the failure otherwise.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable

from .monoid import TopoMonoid, canonical_quasi_uniformities, verify_monoid_properties
from .preuniformity import (
    PreUniformity,
    PreconditionError,
    canonical,
    cardinality_bound_check,
    pervin_entourage,
    space_ell,
    space_ell_omega,
    space_uell,
)
from .relation import Cover, Entourage, alt_power, ball, inverse, star
from .structure import (
    PremiseError,
    commuting_profile,
    prop35_check,
    prop43_check,
    psi_bound_report,
    separating_pairs,
    theorem33_check,
    urysohn_separator,
)
from .topology import INDEXED, PLAIN, FiniteSpace, compute_invariant

# --- invariant names ------------------------------------------------------------

_ELL = re.compile(r"^(q|u)?ell(bar)?_(pm|mp|wedge|vee)\((\d+)\)$")
_IDX = re.compile(r"^(" + "|".join(INDEXED) + r")\((\d+)\)$")
EXTRA_NAMES = ("ell_omega", "qell_omega", "uell")


def parse_invariant(name: str) -> tuple:
    """Validate a name and return a hashable key; raise ValueError listing the grammar otherwise."""
    if name in PLAIN or name in EXTRA_NAMES:
        return (name,)
    m = _IDX.match(name)
    if m:
        return (m.group(1), int(m.group(2)))
    m = _ELL.match(name)
    if m and int(m.group(4)) >= 1:
        fam, bar, mode, k = m.groups()
        return ("ell", fam or "p", bool(bar), mode, int(k))
    raise ValueError(
        f"unknown invariant {name!r}; valid names: {', '.join(PLAIN + EXTRA_NAMES)}, "
        f"{', '.join(n + '(k)' for n in INDEXED)}, [q|u]ell[bar]_(pm|mp|wedge|vee)(k)"
    )


class SpaceContext:
    """Lazy, cached invariant values of one space."""

    def __init__(self, X: FiniteSpace):
        self.X = X
        self._cache: dict[tuple, int] = {}
        self._axioms: dict[str, bool] = {}

    def value(self, name: str) -> int:
        key = parse_invariant(name)
        if key not in self._cache:
            self._cache[key] = self._compute(key)
        return self._cache[key]

    def _compute(self, key: tuple) -> int:
        X = self.X
        if key[0] == "ell":
            _, fam, bar, mode, k = key
            return space_ell(X, mode, k, family=fam, bar=bar)
        if key[0] == "ell_omega":
            return space_ell_omega(X, "p")
        if key[0] == "qell_omega":
            return space_ell_omega(X, "q")
        if key[0] == "uell":
            return space_uell(X)
        if len(key) == 2:
            return compute_invariant(X, key[0], key[1])
        return compute_invariant(X, key[0])

    def axiom(self, name: str) -> bool:
        if name not in self._axioms:
            if name == "normal":
                self._axioms[name] = is_normal_space(self.X)
            elif name == "perfectly_normal":
                self._axioms[name] = is_normal_space(self.X) and all(self.X.is_open(c) for c in _closed_sets(self.X))
            else:
                self._axioms[name] = self.X.separation_check(name).holds
        return self._axioms[name]


def _closed_sets(X: FiniteSpace) -> list[int]:
    return [X.top & ~o for o in X.opens]


def is_normal_space(X: FiniteSpace) -> bool:
    """Disjoint closed sets have disjoint open neighbourhoods (the smallest ones are their up-sets)."""
    closed = _closed_sets(X)

    def up(a: int) -> int:
        return ball(X.preorder(), a)

    return all(up(a) & up(b) == 0 for a in closed for b in closed if a & b == 0)


# --- registry -----------------------------------------------------------------

@dataclass(frozen=True)
class Law:
    ident: str
    kind: str
    premise: Callable[[Any], bool]
    check: Callable[[Any], tuple[Any, Any] | None]
    premise_text: str = ""


REGISTRY: dict[str, Law] = {}


def _register(law: Law) -> None:
    if law.ident in REGISTRY:
        raise ValueError(f"duplicate law {law.ident}")
    REGISTRY[law.ident] = law


def _always(_: Any) -> bool:
    return True


def _compare(lhs: str, op: str, rhs: str) -> Callable[[SpaceContext], tuple[Any, Any] | None]:
    def check(ctx: SpaceContext) -> tuple[Any, Any] | None:
        a, b = ctx.value(lhs), ctx.value(rhs)
        ok = a <= b if op == "<=" else a == b
        return None if ok else (a, b)
    return check


def _axioms(*names: str) -> Callable[[SpaceContext], bool]:
    return lambda ctx: all(ctx.axiom(a) for a in names)


def _space_law(group: str, lhs: str, op: str, rhs: str, premise: tuple[str, ...] = ()) -> None:
    parse_invariant(lhs)
    parse_invariant(rhs)
    _register(Law(f"{group}:{lhs}{op}{rhs}", "topologies",
                  _axioms(*premise) if premise else _always, _compare(lhs, op, rhs), " and ".join(premise)))


def _chain(group: str, names: list[str], op: str, premise: tuple[str, ...] = ()) -> None:
    for a, b in zip(names, names[1:]):
        _space_law(group, a, op, b, premise)


# Hodel-type diagram of global cardinal characteristics
for a, b in [("lstar(1)", "de"), ("de", "l"), ("de", "s"), ("e", "de"), ("l", "hl"), ("hl", "nw"),
             ("nw", "w"), ("dc", "de"), ("dc", "c"), ("s", "hl"), ("s", "hd"), ("lbar", "c"),
             ("lbar", "l"), ("c", "s"), ("c", "d"), ("d", "hd"), ("hd", "nw")]:
    _space_law("hodel", a, "<=", b)
_space_law("hodel", "de", "<=", "e", ("T1",))
_space_law("hodel", "lstar_half(0)", "==", "l")
_space_law("hodel", "lbarstar_half(0)", "==", "lbar")
_space_law("hodel", "lbarstar(0)", "==", "d")

# the star-covering ladder
for k in range(0, 3):
    for pre in ("lstar", "lbarstar"):
        _space_law("star", f"{pre}({k + 1})", "<=", f"{pre}_half({k})")
        _space_law("star", f"{pre}_half({k})", "<=", f"{pre}({k})")
    _space_law("star", f"lbarstar({k})", "<=", f"lstar({k})")
    _space_law("star", f"lbarstar_half({k})", "<=", f"lstar_half({k})")
    _space_law("star", f"lstar({k + 1})", "<=", f"lbarstar({k})")
    if k >= 1:
        _space_law("star", f"lstar_half({k})", "<=", f"lbarstar_half({k - 1})")
        _space_law("star", f"lbarstar_half({k})", "<=", "dc")
    _space_law("star", "lstar_omega", "<=", f"lstar({k})")
    _space_law("star", "lbarstar_omega", "<=", f"lbarstar({k})")
_space_law("star", "lstar_omega", "==", "lbarstar_omega")

_space_law("prop12a", "lstar(1)", "<=", "de")
_space_law("prop12a", "lbarstar_half(1)", "<=", "dc")

_chain("prop12_1", ["dc", "lbarstar_half(1)", "lstar_omega"], "==", ("quasi_regular",))
_space_law("prop12_2", "dc", "==", "lbarstar(1)", ("quasi_regular", "normal"))
_chain("prop12_3", ["dc", "c", "lbarstar_half(0)"], "==", ("quasi_regular", "perfectly_normal"))
_chain("prop12_4", ["dc", "de", "lstar(1)"], "==", ("quasi_regular", "collectively_Hausdorff"))
# every open cover of a finite space is finite, so paracompactness adds nothing beyond regularity
_space_law("prop12_5", "dc", "==", "l", ("quasi_regular",))
_space_law("prop12_6", "dc", "==", "hl", ("quasi_regular",))

for k in (1, 2):
    _space_law("prop15", f"lstar({k})", "==", f"ell_mp({2 * k})")
    _space_law("prop15", f"lbarstar({k})", "==", f"ellbar_mp({2 * k})")
    _space_law("prop15", f"lstar_half({k})", "==", f"ell_pm({2 * k + 1})")
    _space_law("prop15", f"lbarstar_half({k})", "==", f"ellbar_pm({2 * k + 1})")

_chain("prop18_1", ["ell_wedge(1)", "s", "qell_vee(1)", "ell_vee(1)", "nw"], "<=")
_chain("prop18_2", ["e", "de", "qell_pm(1)", "ell_pm(1)"], "<=")
_space_law("prop18_2", "ell_pm(1)", "==", "l")
_chain("prop18_3", ["c", "qell_mp(1)", "ell_mp(1)", "d"], "<=")
_chain("prop18_4", ["ellbar_pm(3)", "lbarstar_half(1)", "ell_omega", "dc"], "==", ("quasi_regular",))
_chain("prop18_5", ["qellbar_pm(3)", "qell_omega", "uell", "dc"], "==", ("completely_regular",))

for k in (1, 2, 3):
    for a, b in [
        (f"ellbar_mp({k})", f"ell_mp({k})"), (f"ell_mp({k})", f"ell_vee({k})"),
        (f"ellbar_pm({k})", f"ell_pm({k})"), (f"ell_pm({k})", f"ell_vee({k})"),
        (f"qell_mp({k})", f"ell_mp({k})"), (f"qell_mp({k})", f"qell_vee({k})"), (f"qell_vee({k})", f"ell_vee({k})"),
        (f"qell_pm({k})", f"ell_pm({k})"), (f"qell_pm({k})", f"qell_vee({k})"),
        ("uell", f"qell_wedge({k})"), ("uell", f"qell_vee({k})"), ("uell", f"qell_mp({k})"), ("uell", f"qell_pm({k})"),
        (f"qell_wedge({k})", f"ell_wedge({k})"), (f"qell_wedge({k})", f"qell_pm({k})"),
        (f"qell_wedge({k})", f"qell_mp({k})"), (f"ell_wedge({k})", f"ell_pm({k})"), (f"ell_wedge({k})", f"ell_mp({k})"),
    ]:
        _space_law("ell_diagram", a, "<=", b)


def _universal_chain(ctx: SpaceContext) -> tuple[Any, Any] | None:
    X = ctx.X
    p, q, u = (canonical(X, k).min for k in ("universal_pre", "universal_quasi", "universal_uniform"))
    if not (p.issubset(q) and q.issubset(u)):
        return ("min(pU) ⊆ min(qU) ⊆ min(uU)", [p.encode(), q.encode(), u.encode()])
    return None


def _pervin_generates(ctx: SpaceContext) -> tuple[Any, Any] | None:
    X = ctx.X
    P = canonical(X, "pervin")
    if P.generated_topology() != X or not P.is_quasi():
        return ("Pervin quasi-uniformity generates the topology", P.min.encode())
    return None


_register(Law("universal:nested", "topologies", _always, _universal_chain))
_register(Law("universal:pervin_generates", "topologies", _always, _pervin_generates))


# --- entourage laws --------------------------------------------------------------

def _lemma22(k: int) -> Callable[[Entourage], tuple[Any, Any] | None]:
    def check(u: Entourage) -> tuple[Any, Any] | None:
        p = alt_power(u, "mp", 2 * k)
        cover = Cover.balls(u)
        for x in range(u.n):
            a, b = ball(p, 1 << x), star(cover, 1 << x, k)
            if a != b:
                return (f"B({x};U^-+{2 * k})={a}", f"St^{k}({x})={b}")
        return None
    return check


def _filter_diagram(k: int) -> Callable[[Entourage], tuple[Any, Any] | None]:
    def check(u: Entourage) -> tuple[Any, Any] | None:
        def pm(j: int) -> Entourage:
            return alt_power(u, "pm", j)

        def mp(j: int) -> Entourage:
            return alt_power(u, "mp", j)

        wedge = {j: pm(j) | mp(j) for j in (k - 1, k)}
        vee = {j: pm(j) & mp(j) for j in (k, k + 1)}
        # an arrow V -> W between filters is min(W) ⊆ min(V)
        for name, small, big in [
            ("wedge(n) <= vee(n+1)", wedge[k], vee[k + 1]),
            ("pm(n) <= wedge(n)", pm(k), wedge[k]),
            ("mp(n) <= wedge(n)", mp(k), wedge[k]),
            ("vee(n) <= pm(n)", vee[k], pm(k)),
            ("vee(n) <= mp(n)", vee[k], mp(k)),
            ("wedge(n-1) <= vee(n)", wedge[k - 1], vee[k]),
        ]:
            if not small.issubset(big):
                return (name, small.first_difference(big))
        return None
    return check


def _inverse_swap(k: int) -> Callable[[Entourage], tuple[Any, Any] | None]:
    """Odd powers swap under inversion; even ones are symmetric."""
    def check(u: Entourage) -> tuple[Any, Any] | None:
        a = inverse(alt_power(u, "pm", k))
        b = alt_power(u, "mp" if k % 2 else "pm", k)
        return None if a == b else (a.encode(), b.encode())
    return check


def _card(u: Entourage) -> tuple[Any, Any] | None:
    rep = cardinality_bound_check(PreUniformity.principal(u))
    return None if rep.holds else (rep.size, rep.bound)


for k in (1, 2, 3):
    _register(Law(f"lemma22:n{k}", "entourages", _always, _lemma22(k)))
    _register(Law(f"filter_diagram:n{k}", "entourages", _always, _filter_diagram(k)))
    _register(Law(f"alt_power:inversion{k}", "entourages", _always, _inverse_swap(k)))
_register(Law("card:entourage", "entourages", lambda u: alt_power(u, "mp", 2).is_diagonal(), _card,
              "-+2-separated"))


# --- pair laws -----------------------------------------------------------------------

class PairContext:
    def __init__(self, pair: tuple[PreUniformity, PreUniformity]):
        self.L, self.R = pair

    @cached_property
    def profile(self):
        return commuting_profile(self.L, self.R)

    @cached_property
    def tau(self) -> FiniteSpace | None:
        tl, tr = self.L.generated_topology(), self.R.generated_topology()
        return tl if tl == tr else None

    @cached_property
    def separating_premise(self) -> bool:
        return self.tau is not None and self.tau.separation_check("Hausdorff").holds \
            and self.profile.normally_pm_subcommuting

    @cached_property
    def psi_rows(self):
        return psi_bound_report(self.L, self.R)


def _prop31(ctx: PairContext) -> tuple[Any, Any] | None:
    p = ctx.profile
    return None if p.prop31_consistent else ("conditions", list(p.prop31_conditions))


def _verdict_law(fn) -> tuple[Callable, Callable]:
    def premise(ctx: PairContext) -> bool:
        return fn(ctx.L, ctx.R) is not None

    def check(ctx: PairContext) -> tuple[Any, Any] | None:
        v = fn(ctx.L, ctx.R)
        return None if v else ("holds", v.witness)
    return premise, check


def _thm44(mode: str) -> tuple[Callable, Callable]:
    def run(ctx: PairContext):
        return separating_pairs(ctx.L, ctx.R, mode, ctx.L if mode == "thm44_item4" else None)

    def premise(ctx: PairContext) -> bool:
        if not ctx.separating_premise:
            return False
        try:
            run(ctx)
        except PremiseError:
            return False
        return True

    def check(ctx: PairContext) -> tuple[Any, Any] | None:
        _, rep = run(ctx)
        return None if rep.holds else (rep.size, rep.bound)
    return premise, check


def _psi_premise(ctx: PairContext) -> bool:
    return any(r.skipped is None for r in ctx.psi_rows)


def _psi_check(ctx: PairContext) -> tuple[Any, Any] | None:
    for r in ctx.psi_rows:
        if r.holds is False:
            return (f"{r.ident}: {r.lhs}", r.rhs)
    return None


def _urysohn_premise(ctx: PairContext) -> bool:
    return ctx.L.is_normal(ctx.L.generated_topology()).holds


def _urysohn(ctx: PairContext) -> tuple[Any, Any] | None:
    X = ctx.L.generated_topology()
    for a in range(1 << X.n):
        try:
            urysohn_separator(X, ctx.L, a)
        except (AssertionError, PreconditionError) as exc:
            return (f"A={a}", str(exc))
    return None


def _card_pair(ctx: PairContext) -> tuple[Any, Any] | None:
    return _card(ctx.L.min)


_register(Law("prop31:conditions_agree", "pairs", _always, _prop31))
for ident, fn in [("prop43:normal", prop43_check), ("thm33:fu_uniformity", theorem33_check),
                  ("prop35:three_separated", prop35_check)]:
    pr, ch = _verdict_law(fn)
    _register(Law(ident, "pairs", pr, ch))
for k, mode in enumerate(("thm44_item1", "thm44_item2", "thm44_item3", "thm44_item4"), 1):
    pr, ch = _thm44(mode)
    _register(Law(f"thm44:item{k}", "pairs", pr, ch, "Hausdorff common topology, normally +-subcommuting"))
_register(Law("thm45:psi_bounds", "pairs", _psi_premise, _psi_check))
_register(Law("thm14:urysohn", "pairs", _urysohn_premise, _urysohn, "L normal"))
_register(Law("card:pair", "pairs", lambda ctx: alt_power(ctx.L.min, "mp", 2).is_diagonal(), _card_pair,
              "-+2-separated"))


# --- monoid laws -----------------------------------------------------------------

class MonoidContext:
    def __init__(self, M: TopoMonoid):
        self.M = M

    @cached_property
    def report(self):
        return verify_monoid_properties(self.M)

    @cached_property
    def hausdorff(self) -> bool:
        return self.M.space.separation_check("Hausdorff").holds


def _flags(*names: str) -> Callable[[MonoidContext], tuple[Any, Any] | None]:
    def check(ctx: MonoidContext) -> tuple[Any, Any] | None:
        bad = [n for n in names if not ctx.report.flags.get(n, False)]
        return None if not bad else ("failed flags", bad)
    return check


def _monoid_psi(ctx: MonoidContext) -> tuple[Any, Any] | None:
    q = canonical_quasi_uniformities(ctx.M)
    for r in psi_bound_report(q["L"], q["R"], ctx.M.space, group=ctx.M.is_group):
        if r.holds is False:
            return (f"{r.ident}: {r.lhs}", r.rhs)
    return None


_group = lambda ctx: ctx.M.is_group  # noqa: E731
_register(Law("monoid:generation", "monoids", _always,
              _flags("generates_L", "generates_R", "generates_two_sided", "generates_roelcke")))
_register(Law("monoid:thm33", "monoids", _always, _flags("thm33_fu_uniformity_coarser", "fu_topology_coarser")))
_register(Law("monoid:prop61", "monoids", _always, _flags(
    "prop61_normally_commuting", "prop61_normally_pm_subcommuting", "prop61_L_normal", "prop61_R_normal",
    "prop61_hausdorff_iff_fu_separated")))
_register(Law("monoid:diagram", "monoids", _always, _flags("diagram_inclusions", "fu_matches_base")))
_register(Law("monoid:thm62", "monoids", lambda ctx: ctx.hausdorff, _flags("thm62_functionally_hausdorff"),
              "Hausdorff"))
_register(Law("monoid:prop71", "monoids", _group, _flags(
    "prop71_inverse_normally_commuting", "prop71_inverse_normally_pm_subcommuting", "prop71_inverse_cotopological"),
    "group"))
_register(Law("monoid:prop71_separated", "monoids", lambda ctx: ctx.M.is_group and ctx.hausdorff,
              _flags("prop71_L_3_separated", "prop71_R_3_separated", "prop71_fu_separated"), "Hausdorff group"))
_register(Law("monoid:prop73", "monoids", _group, _flags("prop73_inversion_uniform", "prop73_shifts_uniform"),
              "group"))
_register(Law("monoid:roelcke", "monoids", _group, _flags("roelcke_coincides"), "group"))
_register(Law("monoid:psi_bounds", "monoids", lambda ctx: ctx.hausdorff, _monoid_psi, "Hausdorff"))


CONTEXTS = {
    "topologies": SpaceContext,
    "pairs": PairContext,
    "monoids": MonoidContext,
    "entourages": lambda u: u,
}


def laws_for(kind: str) -> list[str]:
    return [k for k, v in REGISTRY.items() if v.kind == kind]


def groups() -> list[str]:
    return sorted({k.split(":", 1)[0] for k in REGISTRY})


def resolve(selector: str, kind: str | None = None) -> list[str]:
    """'all', a group name, or a comma-separated list of groups and law ids."""
    out: list[str] = []
    for part in (p.strip() for p in selector.split(",")):
        if not part:
            continue
        if part == "all":
            hits = list(REGISTRY)
        elif part in REGISTRY:
            hits = [part]
        else:
            hits = [k for k in REGISTRY if k.split(":", 1)[0] == part]
            if not hits:
                raise KeyError(f"unknown law or group {part!r}; groups: {', '.join(groups())}")
        for h in hits:
            if h not in out and (kind is None or REGISTRY[h].kind == kind):
                out.append(h)
    return out
