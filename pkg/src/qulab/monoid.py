"""Finite topological monoids and their canonical quasi-uniformities."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .preuniformity import PreUniformity
from .relation import Entourage, bits, inverse, to_mask
from .structure import coarser, commuting_profile, quasi_roelcke, theorem33_check
from .topology import FiniteSpace


class MonoidError(ValueError):
    """kind is one of: table, associativity, unit, continuity, open_shift."""

    def __init__(self, kind: str, message: str, witness: Any = None):
        super().__init__(message)
        self.kind = kind
        self.witness = witness


Table = tuple[tuple[int, ...], ...]


def _set_product(table: Table, a: int, b: int) -> int:
    acc = 0
    for x in bits(a):
        row = table[x]
        for y in bits(b):
            acc |= 1 << row[y]
    return acc


def find_unit(table: Table) -> int | None:
    n = len(table)
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            return e
    return None


def associativity_violation(table: Table) -> tuple[int, int, int] | None:
    n = len(table)
    for x in range(n):
        for y in range(n):
            xy = table[x][y]
            for z in range(n):
                if table[xy][z] != table[x][table[y][z]]:
                    return (x, y, z)
    return None


def continuity_violation(table: Table, X: FiniteSpace) -> tuple[int, int] | None:
    """Multiplication is continuous iff N(x)N(y) ⊆ N(xy) for all x, y."""
    n = len(table)
    for x in range(n):
        for y in range(n):
            if _set_product(table, X.nbhd[x], X.nbhd[y]) & ~X.nbhd[table[x][y]]:
                return (x, y)
    return None


def open_shift_violation(table: Table, X: FiniteSpace) -> tuple[int, int, int] | None:
    """Every open set is a union of N(x), so checking a N(x) b suffices."""
    n = len(table)
    for a in range(n):
        for b in range(n):
            for x in range(n):
                img = _set_product(table, _set_product(table, 1 << a, X.nbhd[x]), 1 << b)
                if not X.is_open(img):
                    return (a, b, x)
    return None


@dataclass(frozen=True)
class TopoMonoid:
    table: Table
    space: FiniteSpace
    unit: int
    is_group: bool
    is_abelian: bool
    open_shifts: bool
    shift_witness: tuple[int, int, int] | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def setmul(self, a: int, b: int) -> int:
        return _set_product(self.table, a, b)

    def inverse_of(self, x: int) -> int | None:
        for y in range(self.n):
            if self.table[x][y] == self.unit and self.table[y][x] == self.unit:
                return y
        return None

    def encode(self) -> str:
        return "".join(str(v) for row in self.table for v in row) + "/" + self.space.encode()


def make_monoid(table: Sequence[Sequence[int]], space: FiniteSpace, *, require_open_shifts: bool = True) -> TopoMonoid:
    t: Table = tuple(tuple(int(v) for v in row) for row in table)
    n = len(t)
    if n != space.n or any(len(row) != n for row in t):
        raise MonoidError("table", f"table must be {space.n} x {space.n}")
    if any(not 0 <= v < n for row in t for v in row):
        raise MonoidError("table", "table entries must be points of the carrier")
    w = associativity_violation(t)
    if w:
        raise MonoidError("associativity", f"({w[0]}*{w[1]})*{w[2]} != {w[0]}*({w[1]}*{w[2]})", w)
    e = find_unit(t)
    if e is None:
        raise MonoidError("unit", "no two-sided unit")
    c = continuity_violation(t, space)
    if c:
        raise MonoidError("continuity", f"N({c[0]})N({c[1]}) is not inside N({t[c[0]][c[1]]})", c)
    s = open_shift_violation(t, space)
    if s and require_open_shifts:
        a, b, x = s
        raise MonoidError("open_shift", f"the image of N({x}) under z -> {a}z{b} is not open", s)
    is_group = all(any(t[x][y] == e and t[y][x] == e for y in range(n)) for x in range(n))
    is_abelian = all(t[x][y] == t[y][x] for x in range(n) for y in range(n))
    return TopoMonoid(t, space, e, is_group, is_abelian, s is None, s)


def canonical_quasi_uniformities(M: TopoMonoid) -> dict[str, PreUniformity]:
    u = M.space.nbhd[M.unit]
    n, X = M.n, M.space
    left = Entourage(n, tuple(M.setmul(1 << x, u) for x in range(n)))
    right = Entourage(n, tuple(M.setmul(u, 1 << x) for x in range(n)))
    roelcke = Entourage(n, tuple(M.setmul(M.setmul(u, 1 << x), u) for x in range(n)))
    L = PreUniformity.principal(left, X)
    R = PreUniformity.principal(right, X)
    return {
        "L": L,
        "R": R,
        "two_sided": PreUniformity.principal(left & right, X),
        "roelcke": PreUniformity.principal(roelcke, X),
        "quasi_roelcke": quasi_roelcke(L, R),
    }


def quasi_roelcke_direct(M: TopoMonoid) -> Entourage:
    """FU from its own base: Ux ∩ yU and Uy ∩ xU both non-empty."""
    u = M.space.nbhd[M.unit]
    rows = []
    for x in range(M.n):
        row = 0
        for y in range(M.n):
            if M.setmul(u, 1 << x) & M.setmul(1 << y, u) and M.setmul(u, 1 << y) & M.setmul(1 << x, u):
                row |= 1 << y
        rows.append(row)
    return Entourage(M.n, tuple(rows))


@dataclass(frozen=True)
class ProfileReport:
    flags: dict[str, bool]
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def failures(self) -> list[str]:
        return [k for k, v in self.flags.items() if not v]


def _maps_into(m: Entourage, f) -> bool:
    return all((f(y) in bits(m.rows[f(x)])) for x, y in m.pairs())


def verify_monoid_properties(M: TopoMonoid) -> ProfileReport:
    """Evaluate the structural theorems about monoids with open shifts; every flag should be true."""
    X = M.space
    q = canonical_quasi_uniformities(M)
    L, R, fu = q["L"], q["R"], q["quasi_roelcke"]
    prof = commuting_profile(L, R)
    flags: dict[str, bool] = {}
    details: dict[str, Any] = {}
    if not M.open_shifts:
        details["note"] = "shifts are not open; the theorems do not apply"
    flags["generates_L"] = L.generated_topology() == X
    flags["generates_R"] = R.generated_topology() == X
    flags["generates_two_sided"] = q["two_sided"].generated_topology() == X
    flags["generates_roelcke"] = q["roelcke"].generated_topology() == X
    flags["prop61_normally_commuting"] = prof.normally_commuting
    flags["prop61_normally_pm_subcommuting"] = prof.normally_pm_subcommuting
    flags["prop61_L_normal"] = L.is_normal(X).holds
    flags["prop61_R_normal"] = R.is_normal(X).holds
    hausdorff = X.separation_check("Hausdorff").holds
    separated = fu.min.is_diagonal()
    flags["prop61_hausdorff_iff_fu_separated"] = hausdorff == separated
    details["hausdorff"] = hausdorff
    details["fu_separated"] = separated
    t33 = theorem33_check(L, R)
    flags["thm33_fu_uniformity_coarser"] = bool(t33) if t33 is not None else False
    flags["fu_matches_base"] = fu.min == quasi_roelcke_direct(M)
    two, lm, rm, ro = q["two_sided"].min, L.min, R.min, q["roelcke"].min
    flags["diagram_inclusions"] = (
        two.issubset(lm) and lm.issubset(ro) and two.issubset(rm) and rm.issubset(ro)
        and lm.issubset(fu.min) and rm.issubset(fu.min)
    )
    flags["fu_topology_coarser"] = coarser(fu.generated_topology(), X)
    if hausdorff:
        flags["thm62_functionally_hausdorff"] = X.separation_check("functionally_Hausdorff").holds
    if M.is_group:
        Li, Ri = L.inverse(), R.inverse()
        pinv = commuting_profile(Li, Ri)
        flags["prop71_inverse_normally_commuting"] = pinv.normally_commuting
        flags["prop71_inverse_normally_pm_subcommuting"] = pinv.normally_pm_subcommuting
        flags["prop71_inverse_cotopological"] = Li.generated_topology() == Ri.generated_topology()
        if hausdorff:
            flags["prop71_L_3_separated"] = L.separation_degree("both", 3)
            flags["prop71_R_3_separated"] = R.separation_degree("both", 3)
            flags["prop71_fu_separated"] = separated
        inv = {x: M.inverse_of(x) for x in range(M.n)}
        flags["prop73_inversion_uniform"] = _maps_into(fu.min, lambda x: inv[x])
        flags["prop73_shifts_uniform"] = all(
            _maps_into(fu.min, lambda x, a=a, b=b: M.mul(M.mul(a, x), b)) for a in range(M.n) for b in range(M.n)
        )
        # finite paratopological groups are topological groups
        flags["roelcke_coincides"] = fu.min == ro
    return ProfileReport(flags, details)
