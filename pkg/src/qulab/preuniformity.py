"""Pre-uniformities with finite bases.

Every entourage filter on a finite carrier is principal: it consists of all
entourages containing the intersection M of its base. All semantics below
are therefore computed on M; the base is kept only to record provenance.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Sequence

from .relation import CarrierMismatch, Entourage, alt_power, ball, bits, compose, full_mask, inverse, to_mask
from .search import min_cover, min_cover_size
from .topology import FiniteSpace, Verdict


class AmbientRequired(ValueError):
    pass


class PreconditionError(ValueError):
    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class PreUniformity:
    n: int
    base: tuple[Entourage, ...]
    ambient: FiniteSpace | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.base:
            raise ValueError("a base needs at least one entourage")
        for b in self.base:
            if b.n != self.n:
                raise CarrierMismatch(f"base entourage on {b.n} points, carrier has {self.n}")
        if self.ambient is not None and self.ambient.n != self.n:
            raise CarrierMismatch("ambient space lives on a different carrier")

    @classmethod
    def generated_by(cls, base: Iterable[Entourage], ambient: FiniteSpace | None = None) -> "PreUniformity":
        base = tuple(base)
        if not base:
            raise ValueError("a base needs at least one entourage")
        return cls(base[0].n, base, ambient)

    @classmethod
    def principal(cls, m: Entourage, ambient: FiniteSpace | None = None) -> "PreUniformity":
        return cls(m.n, (m,), ambient)

    @cached_property
    def min(self) -> Entourage:
        out = self.base[0]
        for b in self.base[1:]:
            out = out & b
        return out

    def with_ambient(self, X: FiniteSpace | None) -> "PreUniformity":
        return PreUniformity(self.n, self.base, X)

    def same_filter(self, other: "PreUniformity") -> bool:
        return self.n == other.n and self.min == other.min

    def contains(self, e: Entourage) -> bool:
        """E belongs to the filter iff it contains the minimum."""
        return self.min.issubset(e)

    def _ambient(self, X: FiniteSpace | None) -> FiniteSpace:
        X = X or self.ambient
        if X is None:
            raise AmbientRequired("this operation needs an ambient topology")
        if X.n != self.n:
            raise CarrierMismatch("ambient space lives on a different carrier")
        return X

    # axioms

    def is_quasi(self) -> Verdict:
        m = self.min
        extra = compose(m, m).first_difference(m)
        return Verdict(extra is None, extra)

    def is_symmetric(self) -> Verdict:
        m = self.min
        extra = m.first_difference(inverse(m))
        return Verdict(extra is None, extra)

    def is_uniformity(self) -> Verdict:
        q = self.is_quasi()
        return q if not q else self.is_symmetric()

    def is_normal(self, X: FiniteSpace | None = None) -> Verdict:
        """cl(A) is inside int cl B(A;M) for every A; the witness is the first failing A."""
        X = self._ambient(X)
        m = self.min
        for a in range(1 << self.n):
            if X.closure(a) & ~X.int_closure(ball(m, a)):
                return Verdict(False, a)
        return Verdict(True)

    def classify(self, X: FiniteSpace | None = None) -> "Classification":
        X = X or self.ambient
        q, s = self.is_quasi(), self.is_symmetric()
        normal = self.is_normal(X) if X is not None else None
        return Classification(
            is_preuniformity=True,
            is_quasi=q.holds,
            is_uniformity=q.holds and s.holds,
            is_normal=None if normal is None else normal.holds,
            witnesses={
                k: v
                for k, v in (
                    ("quasi", q.witness),
                    ("symmetric", s.witness),
                    ("normal", None if normal is None else normal.witness),
                )
                if v is not None
            },
        )

    def generated_topology(self) -> FiniteSpace:
        """Smallest open set around x: everything reachable from x along M."""
        m = self.min
        nb = []
        for x in range(self.n):
            reach = m.rows[x]
            while True:
                nxt = ball(m, reach)
                if nxt == reach:
                    break
                reach = nxt
            nb.append(reach)
        return FiniteSpace(self.n, tuple(nb))

    def generates(self, X: FiniteSpace) -> bool:
        return self.generated_topology() == X

    # derived families

    def derived(self, op: str, n: int | None = None, other: "PreUniformity | None" = None) -> "PreUniformity":
        return derived_family(self, op, n, other)

    def inverse(self) -> "PreUniformity":
        return derived_family(self, "inverse")

    def pm(self, n: int) -> "PreUniformity":
        return derived_family(self, "pm", n)

    def mp(self, n: int) -> "PreUniformity":
        return derived_family(self, "mp", n)

    def __matmul__(self, other: "PreUniformity") -> "PreUniformity":
        return derived_family(self, "compose_with", other=other)

    def join(self, other: "PreUniformity") -> "PreUniformity":
        return derived_family(self, "join", other=other)

    def meet(self, other: "PreUniformity") -> "PreUniformity":
        return derived_family(self, "meet", other=other)

    def separation_degree(self, mode: str, n: int) -> bool:
        return separation_degree(self, mode, n)

    def uniform_invariant(self, name: str, X: FiniteSpace | None = None) -> int:
        return uniform_invariant(self, name, X)


@dataclass(frozen=True)
class Classification:
    is_preuniformity: bool
    is_quasi: bool
    is_uniformity: bool
    is_normal: bool | None
    witnesses: dict[str, Any] = field(default_factory=dict)


def classify(P: PreUniformity, X: FiniteSpace | None = None) -> Classification:
    return P.classify(X)


def generated_topology(P: PreUniformity) -> FiniteSpace:
    return P.generated_topology()


def closure_bar(m: Entourage, X: FiniteSpace) -> Entourage:
    """Closure of M in X_d x X: row x becomes cl B(x;M)."""
    return Entourage(m.n, tuple(X.closure(r) for r in m.rows))


DERIVED_OPS = ("inverse", "pm", "mp", "wedge", "vee", "closure_bar", "compose_with", "join", "meet")


def derived_family(P: PreUniformity, op: str, n: int | None = None, other: PreUniformity | None = None) -> PreUniformity:
    m = P.min
    if op in ("pm", "mp", "wedge", "vee"):
        if n is None or n < 0:
            raise ValueError(f"{op} needs an index n >= 0")
    if op in ("compose_with", "join", "meet"):
        if other is None:
            raise ValueError(f"{op} needs a second pre-uniformity")
        if other.n != P.n:
            raise CarrierMismatch(f"carriers differ: {P.n} vs {other.n}")
    if op == "inverse":
        out = inverse(m)
    elif op in ("pm", "mp"):
        out = alt_power(m, op, n)
    elif op == "wedge":
        out = alt_power(m, "pm", n) | alt_power(m, "mp", n)
    elif op == "vee":
        out = alt_power(m, "pm", n) & alt_power(m, "mp", n)
    elif op == "closure_bar":
        out = closure_bar(m, P._ambient(None))
    elif op == "compose_with":
        out = compose(m, other.min)
    elif op == "join":
        out = m & other.min
    elif op == "meet":
        out = m | other.min
    else:
        raise ValueError(f"unknown derived family {op!r}; choose from {DERIVED_OPS}")
    return PreUniformity(P.n, (out,), P.ambient)


def separation_degree(P: PreUniformity, mode: str, n: int) -> bool:
    if n < 1:
        raise ValueError("separation degree needs n >= 1")
    if mode == "both":
        return separation_degree(P, "pm", n) and separation_degree(P, "mp", n)
    if mode not in ("pm", "mp"):
        raise ValueError(f"unknown mode {mode!r}")
    return alt_power(P.min, mode, n).is_diagonal()


UNIFORM_INVARIANTS = ("ell", "ellbar", "chi", "psi", "psibar", "psidot")


def uniform_invariant(P: PreUniformity, name: str, X: FiniteSpace | None = None) -> int:
    m = P.min
    if name == "ell":
        return min_cover_size(full_mask(P.n), m.rows)
    if name == "ellbar":
        X = P._ambient(X)
        return min_cover_size(X.top, [X.closure(r) for r in m.rows])
    if name in ("chi", "psi", "psidot"):
        # the single entourage M is a base, realises the intersection, and
        # realises every ball intersection
        return 1
    if name == "psibar":
        P._ambient(X)
        return 1
    raise ValueError(f"unknown uniform invariant {name!r}; choose from {UNIFORM_INVARIANTS}")


def ell(m: Entourage) -> int:
    return min_cover_size(full_mask(m.n), m.rows)


def ellbar(m: Entourage, X: FiniteSpace) -> int:
    return min_cover_size(X.top, [X.closure(r) for r in m.rows])


# --- canonical constructions ------------------------------------------------

CANONICAL_KINDS = ("pervin", "universal_pre", "universal_quasi", "universal_uniform")
EXHAUSTIVE_UNIFORM_LIMIT = 8


def pervin_entourage(X: FiniteSpace, u: int) -> Entourage:
    """(U x U) | ((X - U) x X)."""
    return Entourage(X.n, tuple(u if (u >> x) & 1 else X.top for x in range(X.n)))


def set_partitions(n: int) -> Iterable[list[int]]:
    """All partitions of range(n) as lists of block masks (restricted growth strings)."""
    def rec(i: int, blocks: list[int]):
        if i == n:
            yield list(blocks)
            return
        for k in range(len(blocks)):
            blocks[k] |= 1 << i
            yield from rec(i + 1, blocks)
            blocks[k] &= ~(1 << i)
        blocks.append(1 << i)
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


def equivalence_of(n: int, blocks: Sequence[int]) -> Entourage:
    rows = [0] * n
    for b in blocks:
        for x in bits(b):
            rows[x] = b
    return Entourage(n, tuple(rows))


def universal_uniform_min(X: FiniteSpace) -> Entourage:
    """Minimum of the union of all uniformities inside the universal pre-uniformity.

    A principal uniformity inside it is generated by an equivalence relation
    containing the neighbourhood assignment N. Up to the size limit every
    such equivalence is enumerated and their intersection taken; beyond it
    the intersection is computed directly as the equivalence closure of N.
    """
    nbhd = X.preorder()
    if X.n > EXHAUSTIVE_UNIFORM_LIMIT:
        return Entourage(X.n, X.components)
    acc = Entourage.full(X.n)
    for blocks in set_partitions(X.n):
        e = equivalence_of(X.n, blocks)
        if nbhd.issubset(e):
            acc = acc & e
    return acc


def canonical(X: FiniteSpace, kind: str) -> PreUniformity:
    if kind == "pervin":
        base = tuple(pervin_entourage(X, u) for u in X.opens)
        return PreUniformity(X.n, base, X)
    if kind in ("universal_pre", "universal_quasi"):
        # N is transitive, so it already generates the largest
        # quasi-uniformity inside the universal pre-uniformity
        return PreUniformity(X.n, (X.preorder(),), X)
    if kind == "universal_uniform":
        return PreUniformity(X.n, (universal_uniform_min(X),), X)
    raise ValueError(f"unknown canonical kind {kind!r}; choose from {CANONICAL_KINDS}")


# --- cardinality bound ------------------------------------------------------

@dataclass(frozen=True)
class CardinalityReport:
    size: int
    ell: int
    psi: int
    bound: int
    injective: bool
    holds: bool
    labels: tuple[int, ...]


def cardinality_bound_check(P: PreUniformity) -> CardinalityReport:
    """Build x -> f_x with f_x(M) the first point l of a minimum M-ball cover with x in B(l;M)."""
    m = P.min
    mp2 = alt_power(m, "mp", 2)
    if not mp2.is_diagonal():
        raise PreconditionError("pre-uniformity is not -+2-separated", mp2.first_difference(Entourage.diagonal(P.n)))
    cover = min_cover(full_mask(P.n), m.rows)
    assert cover is not None
    labels = tuple(next(l for l in cover if (m.rows[l] >> x) & 1) for x in range(P.n))
    injective = len(set(labels)) == P.n
    ell_v, psi_v = len(cover), 1
    bound = ell_v ** psi_v
    return CardinalityReport(P.n, ell_v, psi_v, bound, injective, injective and P.n <= bound, labels)


# --- space-level boundedness numbers ---------------------------------------

def universal_family(X: FiniteSpace, family: str) -> Entourage:
    if family == "p":
        return X.preorder()
    if family == "q":
        return canonical(X, "universal_quasi").min
    if family == "u":
        return canonical(X, "universal_uniform").min
    raise ValueError(f"unknown universal family {family!r}")


def derived_min(m: Entourage, mode: str, n: int) -> Entourage:
    if mode in ("pm", "mp"):
        return alt_power(m, mode, n)
    if mode == "wedge":
        return alt_power(m, "pm", n) | alt_power(m, "mp", n)
    if mode == "vee":
        return alt_power(m, "pm", n) & alt_power(m, "mp", n)
    raise ValueError(f"unknown mode {mode!r}")


def space_ell(X: FiniteSpace, mode: str, n: int, *, family: str = "p", bar: bool = False) -> int:
    """ell^{mode n}(X) computed on the universal p-, q- or u-family."""
    m = derived_min(universal_family(X, family), mode, n)
    return ellbar(m, X) if bar else ell(m)


def space_ell_omega(X: FiniteSpace, family: str = "p") -> int:
    """min over n >= 1 of ell^{vee n}, iterating until the alternating powers stabilise."""
    m = universal_family(X, family)
    pm, mp = m, inverse(m)
    best = ell(pm & mp)
    while True:
        npm, nmp = compose(m, mp), compose(inverse(m), pm)
        if npm == pm and nmp == mp:
            return best
        pm, mp = npm, nmp
        best = min(best, ell(pm & mp))


def space_uell(X: FiniteSpace) -> int:
    return ell(universal_family(X, "u"))
