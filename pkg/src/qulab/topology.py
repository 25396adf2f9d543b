"""Finite topological spaces stored as minimal open neighbourhoods.

N(x) is the smallest open set containing x. A set W is open iff N(x) is
contained in W for every x in W, so the map x -> N(x) carries the whole
topology; y in N(x) is the specialization preorder.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Any, Iterable, Sequence

from .relation import Cover, Entourage, bits, full_mask, popcount, star, to_mask, to_points
from .search import max_hereditary, min_cover, min_cover_size


class TopologyError(ValueError):
    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.holds


def _fmt(mask: int) -> str:
    return "{" + ",".join(map(str, to_points(mask))) + "}"


@dataclass(frozen=True)
class FiniteSpace:
    n: int
    nbhd: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise TopologyError("carrier size must be >= 1")
        if len(self.nbhd) != self.n:
            raise TopologyError("need one neighbourhood per point")
        for x, nx in enumerate(self.nbhd):
            if not (nx >> x) & 1:
                raise TopologyError(f"N({x}) does not contain {x}", x)
            if nx & ~full_mask(self.n):
                raise TopologyError(f"N({x}) leaves the carrier", x)
            for y in bits(nx):
                if self.nbhd[y] & ~nx:
                    raise TopologyError(f"N({y}) not inside N({x}) although {y} in N({x})", (x, y))

    # construction

    @classmethod
    def from_opens(cls, n: int, opens: Iterable[int | Iterable[int]]) -> "FiniteSpace":
        fam = sorted({o if isinstance(o, int) else to_mask(o) for o in opens})
        top = full_mask(n)
        for o in fam:
            if o & ~top:
                raise TopologyError(f"open set {_fmt(o)} leaves the carrier", o)
        present = set(fam)
        for a, b in combinations(fam, 2):
            if a | b not in present:
                raise TopologyError(f"union of {_fmt(a)} and {_fmt(b)} is {_fmt(a | b)}, which is not open", (a, b))
            if a & b not in present:
                raise TopologyError(f"intersection of {_fmt(a)} and {_fmt(b)} is {_fmt(a & b)}, which is not open", (a, b))
        if 0 not in present:
            raise TopologyError("the empty set must be open", 0)
        if top not in present:
            raise TopologyError("the carrier must be open", top)
        nb = []
        for x in range(n):
            m = top
            for o in fam:
                if (o >> x) & 1:
                    m &= o
            nb.append(m)
        return cls(n, tuple(nb))

    @classmethod
    def from_preorder(cls, rel: Entourage) -> "FiniteSpace":
        """Opens are the up-sets of the preorder: y in N(x) iff (x,y) in rel."""
        for x in range(rel.n):
            for y in bits(rel.rows[x]):
                extra = rel.rows[y] & ~rel.rows[x]
                if extra:
                    z = next(bits(extra))
                    raise TopologyError(f"preorder not transitive: ({x},{y}) and ({y},{z}) but not ({x},{z})", (x, y, z))
        return cls(rel.n, rel.rows)

    @classmethod
    def discrete(cls, n: int) -> "FiniteSpace":
        return cls(n, tuple(1 << x for x in range(n)))

    @classmethod
    def indiscrete(cls, n: int) -> "FiniteSpace":
        return cls(n, (full_mask(n),) * n)

    @classmethod
    def sierpinski(cls) -> "FiniteSpace":
        return cls(2, (0b11, 0b10))

    # basic structure

    @property
    def top(self) -> int:
        return full_mask(self.n)

    def preorder(self) -> Entourage:
        return Entourage(self.n, self.nbhd)

    def min_nbhd(self, x: int) -> int:
        return self.nbhd[x]

    def is_open(self, w: int) -> bool:
        return all(self.nbhd[x] & ~w == 0 for x in bits(w))

    def is_closed(self, a: int) -> bool:
        return self.is_open(self.top & ~a)

    @cached_property
    def opens(self) -> tuple[int, ...]:
        return tuple(w for w in range(1 << self.n) if self.is_open(w))

    def closure(self, a: int) -> int:
        return to_mask(x for x in range(self.n) if self.nbhd[x] & a)

    def interior(self, a: int) -> int:
        return to_mask(x for x in range(self.n) if self.nbhd[x] & ~a == 0)

    def int_closure(self, a: int) -> int:
        return self.interior(self.closure(a))

    def closure_ops(self, a: int, which: str) -> int:
        ops = {"closure": self.closure, "interior": self.interior, "int_closure": self.int_closure}
        if which not in ops:
            raise ValueError(f"unknown operator {which!r}")
        return ops[which](a)

    def is_dense(self, a: int) -> bool:
        return self.closure(a) == self.top

    @cached_property
    def components(self) -> tuple[int, ...]:
        """Connected component of each point (classes of the equivalence generated by the preorder)."""
        comp = [1 << x for x in range(self.n)]
        for x in range(self.n):
            for y in bits(self.nbhd[x]):
                if not comp[x] & comp[y]:
                    merged = comp[x] | comp[y]
                    for z in bits(merged):
                        comp[z] = merged
        return tuple(comp)

    @cached_property
    def star_cover(self) -> Cover:
        """The cover by minimal neighbourhoods (distinct members, in point order)."""
        seen: list[int] = []
        for m in self.nbhd:
            if m not in seen:
                seen.append(m)
        return Cover(self.n, tuple(seen))

    def encode(self) -> str:
        return f"{self.n}:" + self.preorder().encode()

    def subspace_nbhd(self, y: int) -> dict[int, int]:
        return {x: self.nbhd[x] & y for x in bits(y)}

    # separation

    def separation_check(self, axiom: str) -> Verdict:
        fn = _AXIOMS.get(axiom)
        if fn is None:
            raise ValueError(f"unknown axiom {axiom!r}; choose from {sorted(_AXIOMS)}")
        return fn(self)

    def strongly_discrete_check(self, d: int) -> Verdict:
        """D is strongly discrete iff the assignment x -> N(x) is a discrete family.

        Minimal neighbourhoods are the best possible choice, so failing with
        them means failing with every assignment. The witness on failure is a
        point z whose neighbourhood meets two members.
        """
        pts = to_points(d)
        for z in range(self.n):
            hit = [x for x in pts if self.nbhd[z] & self.nbhd[x]]
            if len(hit) > 1:
                return Verdict(False, (z, hit[0], hit[1]))
        return Verdict(True, {x: self.nbhd[x] for x in pts})

    # invariants

    def invariant(self, name: str, index: int | None = None) -> int:
        return compute_invariant(self, name, index)


def _t0(X: FiniteSpace) -> Verdict:
    for x in range(X.n):
        for y in range(x + 1, X.n):
            if (X.nbhd[x] >> y) & 1 and (X.nbhd[y] >> x) & 1:
                return Verdict(False, (x, y))
    return Verdict(True)


def _t1(X: FiniteSpace) -> Verdict:
    for x in range(X.n):
        other = X.nbhd[x] & ~(1 << x)
        if other:
            return Verdict(False, (x, next(bits(other))))
    return Verdict(True)


def _hausdorff(X: FiniteSpace) -> Verdict:
    for x in range(X.n):
        for y in range(x + 1, X.n):
            if X.nbhd[x] & X.nbhd[y]:
                return Verdict(False, (x, y))
    return Verdict(True)


def _regular(X: FiniteSpace) -> Verdict:
    for x in range(X.n):
        if X.closure(X.nbhd[x]) & ~X.nbhd[x]:
            return Verdict(False, x)
    return Verdict(True)


def _quasi_regular(X: FiniteSpace) -> Verdict:
    # every non-empty open contains some N(x); inside N(x) the smallest
    # candidates are the N(y) with y in N(x)
    for x in range(X.n):
        u = X.nbhd[x]
        if not any(X.closure(X.nbhd[y]) & ~u == 0 for y in bits(u)):
            return Verdict(False, u)
    return Verdict(True)


def _functionally_hausdorff(X: FiniteSpace) -> Verdict:
    # continuous real maps are constant on components
    for x in range(X.n):
        other = X.components[x] & ~(1 << x)
        if other:
            return Verdict(False, (x, next(bits(other))))
    return Verdict(True)


def _completely_regular(X: FiniteSpace) -> Verdict:
    for x in range(X.n):
        if X.components[x] != X.nbhd[x]:
            return Verdict(False, x)
    return Verdict(True)


def _collectively_hausdorff(X: FiniteSpace) -> Verdict:
    for d in range(1 << X.n):
        if _is_discrete_subset(X, d) and X.is_closed(d) and not X.strongly_discrete_check(d):
            return Verdict(False, d)
    return Verdict(True)


_AXIOMS = {
    "T0": _t0,
    "T1": _t1,
    "Hausdorff": _hausdorff,
    "regular": _regular,
    "quasi_regular": _quasi_regular,
    "functionally_Hausdorff": _functionally_hausdorff,
    "completely_regular": _completely_regular,
    "collectively_Hausdorff": _collectively_hausdorff,
}
AXIOMS = tuple(_AXIOMS)


def _is_discrete_subset(X: FiniteSpace, d: int) -> bool:
    return all(X.nbhd[x] & d == 1 << x for x in bits(d))


# --- invariants -----------------------------------------------------------

HD_LIMIT = 8

INDEXED = ("lstar", "lbarstar", "lstar_half", "lbarstar_half")
PLAIN = (
    "nw", "w", "d", "hd", "s", "e", "c", "de", "dc", "l", "hl", "lbar",
    "lstar_omega", "lbarstar_omega", "psi", "chi", "psibar", "delta", "deltabar", "log_of_size",
)
INVARIANT_NAMES = PLAIN + INDEXED


def density_of(X: FiniteSpace, y: int) -> int:
    """d of the subspace Y."""
    sets = [to_mask(z for z in bits(y) if (X.nbhd[z] >> a) & 1) for a in bits(y)]
    return min_cover_size(y, sets)


def lindelof_of(X: FiniteSpace, y: int) -> int:
    """l of the subspace Y (its minimal neighbourhoods are N(x) & Y)."""
    return min_cover_size(y, [X.nbhd[a] & y for a in bits(y)])


def _star_until_stable(X: FiniteSpace, dense: bool) -> int:
    cover = X.star_cover
    best = None
    prev = None
    k = 0
    while True:
        stars = tuple(star(cover, 1 << a, k) for a in range(X.n))
        if stars == prev:
            return best
        sets = [X.closure(s) for s in stars] if dense else list(stars)
        v = min_cover_size(X.top, sets)
        best = v if best is None else min(best, v)
        prev = stars
        k += 1


def _min_family(X: FiniteSpace, x: int, target: int, transform) -> int:
    fam = [o for o in X.opens if (o >> x) & 1]
    for k in range(1, len(fam) + 1):
        for combo in combinations(fam, k):
            acc = X.top
            for o in combo:
                acc &= transform(o)
            if acc == target:
                return k
    raise AssertionError("the full neighbourhood family always works")


def compute_invariant(X: FiniteSpace, name: str, index: int | None = None) -> int:
    if name in INDEXED:
        if index is None or index < 0:
            raise ValueError(f"{name} needs a non-negative index")
    elif name not in PLAIN:
        raise ValueError(f"unknown invariant {name!r}; valid names: {', '.join(INVARIANT_NAMES)}")
    top, nb, n = X.top, X.nbhd, X.n

    if name in ("nw", "w"):
        return len(set(nb))
    if name == "d":
        return density_of(X, top)
    if name == "l":
        return lindelof_of(X, top)
    if name in ("hd", "hl"):
        if n > HD_LIMIT:
            raise ValueError(f"{name} iterates over all subspaces and is limited to {HD_LIMIT} points")
        f = density_of if name == "hd" else lindelof_of
        return max((f(X, y) for y in range(1, 1 << n)), default=0)
    if name == "s":
        return popcount(max_hereditary(n, lambda m: _is_discrete_subset(X, m)))
    if name == "e":
        return popcount(max_hereditary(n, lambda m: _is_discrete_subset(X, m) and X.is_closed(m)))
    if name == "c":
        return popcount(max_hereditary(n, lambda m: _pairwise_disjoint(nb, m)))
    if name == "de":
        return popcount(max_hereditary(n, lambda m: all(popcount(nb[z] & m) <= 1 for z in range(n))))
    if name == "dc":
        return popcount(max_hereditary(n, lambda m: _discrete_open_family(X, m)))
    if name == "lbar":
        sets = [to_mask(x for x in range(n) if nb[x] & nb[a]) for a in range(n)]
        return min_cover_size(top, sets)
    if name == "lstar":
        return min_cover_size(top, [star(X.star_cover, 1 << a, index) for a in range(n)])
    if name == "lbarstar":
        return min_cover_size(top, [X.closure(star(X.star_cover, 1 << a, index)) for a in range(n)])
    if name == "lstar_half":
        return min_cover_size(top, [star(X.star_cover, m, index) for m in X.star_cover.members])
    if name == "lbarstar_half":
        return min_cover_size(top, [X.closure(star(X.star_cover, m, index)) for m in X.star_cover.members])
    if name == "lstar_omega":
        return _star_until_stable(X, dense=False)
    if name == "lbarstar_omega":
        return _star_until_stable(X, dense=True)
    if name == "psi":
        return max(_min_family(X, x, nb[x], lambda o: o) for x in range(n))
    if name == "psibar":
        return max(_min_family(X, x, X.closure(nb[x]), X.closure) for x in range(n))
    if name == "chi":
        # a base at x must contain N(x) itself, and {N(x)} already is one
        return 1
    if name in ("delta", "deltabar"):
        if not _hausdorff(X):
            raise ValueError(f"{name} is defined for Hausdorff spaces only")
        # Hausdorff finite spaces are discrete, so the diagonal is clopen in X x X
        assert all(nb[x] == 1 << x for x in range(n))
        return 1
    if name == "log_of_size":
        return (n - 1).bit_length()
    raise AssertionError(name)


def _pairwise_disjoint(nb: Sequence[int], m: int) -> bool:
    acc = 0
    for x in bits(m):
        if acc & nb[x]:
            return False
        acc |= nb[x]
    return True


def _discrete_open_family(X: FiniteSpace, m: int) -> bool:
    pts = to_points(m)
    return all(sum(1 for x in pts if X.nbhd[z] & X.nbhd[x]) <= 1 for z in range(X.n))


@dataclass(frozen=True)
class InvariantReport:
    values: dict[str, int]
    witnesses: dict[str, Any] = field(default_factory=dict)


def invariant_report(X: FiniteSpace, max_index: int = 2) -> InvariantReport:
    values: dict[str, int] = {}
    for name in PLAIN:
        if name in ("delta", "deltabar") and not _hausdorff(X):
            continue
        if name in ("hd", "hl") and X.n > HD_LIMIT:
            continue
        values[name] = compute_invariant(X, name)
    for name in INDEXED:
        for k in range(max_index + 1):
            values[f"{name}({k})"] = compute_invariant(X, name, k)
    witnesses = {
        "s": to_points(max_hereditary(X.n, lambda m: _is_discrete_subset(X, m))),
        "d": to_points(_cover_points(X)),
    }
    return InvariantReport(values, witnesses)


def _cover_points(X: FiniteSpace) -> int:
    sets = [to_mask(z for z in range(X.n) if (X.nbhd[z] >> a) & 1) for a in range(X.n)]
    return to_mask(min_cover(X.top, sets) or ())


# --- the sigma-discrete pseudometric ---------------------------------------

class PartitionError(ValueError):
    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class PseudometricTable:
    n: int
    values: tuple[tuple[Fraction, ...], ...]
    levels: tuple[tuple[tuple[int, ...], ...], ...]
    assignments: tuple[dict[int, int], ...]

    def axiom_violation(self) -> tuple[str, tuple[int, ...]] | None:
        v, n = self.values, self.n
        for x in range(n):
            if v[x][x] != 0:
                return ("diagonal", (x,))
            for y in range(n):
                if v[x][y] < 0 or v[x][y] != v[y][x]:
                    return ("symmetry", (x, y))
                for z in range(n):
                    if v[x][z] > v[x][y] + v[y][z]:
                        return ("triangle", (x, y, z))
        return None

    def separates_points(self) -> bool:
        return all(self.values[x][y] > 0 for x in range(self.n) for y in range(self.n) if x != y)


def clopen_hull(X: FiniteSpace, x: int) -> int:
    """Smallest clopen set containing x: its connected component."""
    return X.components[x]


def sigma_discrete_metric(
    X: FiniteSpace,
    partition: Sequence[int | Iterable[int]],
    assignments: Sequence[dict[int, int]] | None = None,
) -> PseudometricTable:
    """d = max 2^-k d_k built from a partition into strongly discrete pieces.

    Each piece X_k needs clopen neighbourhoods U_x (x in X_k) avoiding the
    earlier pieces and forming a discrete family. Without explicit
    assignments the smallest clopen set around each point is used; any valid
    choice contains it, so this choice exists whenever some choice does.
    """
    pieces = [p if isinstance(p, int) else to_mask(p) for p in partition]
    seen = 0
    for k, p in enumerate(pieces):
        if p == 0:
            raise PartitionError(f"piece {k} is empty", k)
        if p & seen:
            raise PartitionError(f"piece {k} overlaps an earlier piece", k)
        seen |= p
    if seen != X.top:
        raise PartitionError("pieces do not cover the carrier", X.top & ~seen)
    if assignments is not None and len(assignments) != len(pieces):
        raise PartitionError("need one assignment per piece")

    chosen: list[dict[int, int]] = []
    earlier = 0
    for k, p in enumerate(pieces):
        if assignments is None:
            asg = {x: clopen_hull(X, x) for x in bits(p)}
        else:
            asg = {int(x): (u if isinstance(u, int) else to_mask(u)) for x, u in assignments[k].items()}
            if set(asg) != set(bits(p)):
                raise PartitionError(f"assignment {k} must cover exactly the points of piece {k}", k)
        for x, u in asg.items():
            if not (u >> x) & 1:
                raise PartitionError(f"U_{x} does not contain {x}", (k, x))
            if not (X.is_open(u) and X.is_closed(u)):
                raise PartitionError(f"U_{x} = {_fmt(u)} is not clopen", (k, x))
            if u & earlier:
                raise PartitionError(f"U_{x} = {_fmt(u)} meets an earlier piece", (k, x))
        for z in range(X.n):
            hit = [x for x, u in sorted(asg.items()) if X.nbhd[z] & u]
            if len(hit) > 1:
                raise PartitionError(
                    f"family for piece {k} is not discrete: every neighbourhood of {z} meets U_{hit[0]} and U_{hit[1]}",
                    (k, z, hit[0], hit[1]),
                )
        chosen.append(asg)
        earlier |= p

    n = X.n
    levels = []
    for asg in chosen:
        union = 0
        for u in asg.values():
            union |= u
        rows = []
        for x in range(n):
            row = []
            for y in range(n):
                same = any((u >> x) & 1 and (u >> y) & 1 for u in asg.values())
                outside = not (union >> x) & 1 and not (union >> y) & 1
                row.append(0 if same or outside else 1)
            rows.append(tuple(row))
        levels.append(tuple(rows))
    values = tuple(
        tuple(max((Fraction(lv[x][y], 2 ** k) for k, lv in enumerate(levels)), default=Fraction(0)) for y in range(n))
        for x in range(n)
    )
    return PseudometricTable(n, values, tuple(levels), tuple(chosen))


def level_is_continuous(X: FiniteSpace, level: Sequence[Sequence[int]]) -> bool:
    """A {0,1}-valued map on X x X is continuous iff it is constant on N(x) x N(y)."""
    for x in range(X.n):
        for y in range(X.n):
            v = level[x][y]
            for a in bits(X.nbhd[x]):
                for b in bits(X.nbhd[y]):
                    if level[a][b] != v:
                        return False
    return True
