"""Complete, canonically ordered streams of small finite instances."""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Any, Iterator, Sequence

from .monoid import MonoidError, TopoMonoid, associativity_violation, find_unit, make_monoid
from .preuniformity import PreUniformity
from .relation import Entourage, bits
from .topology import FiniteSpace

# labelled preorders (= topologies) on n points, and classes up to relabelling
KNOWN_TOPOLOGIES = {0: 1, 1: 1, 2: 4, 3: 29, 4: 355, 5: 6942}
KNOWN_TOPOLOGY_CLASSES = {0: 1, 1: 1, 2: 3, 3: 9, 4: 33, 5: 139}
KNOWN_MONOID_CLASSES = {1: 1, 2: 2, 3: 7, 4: 35}

KINDS = ("topologies", "pairs", "monoids", "entourages")
MAX_POINTS = {"topologies": 5, "pairs": 4, "monoids": 4, "entourages": 4}


class EnumerationError(RuntimeError):
    """A stream's size disagrees with the known count."""


def _check_range(kind: str, n: int) -> None:
    if kind not in MAX_POINTS:
        raise ValueError(f"unknown stream kind {kind!r}; choose from {', '.join(KINDS)}")
    if not 1 <= n <= MAX_POINTS[kind]:
        raise ValueError(f"{kind} are supported for 1 <= n <= {MAX_POINTS[kind]}, got {n}")


# --- preorders ------------------------------------------------------------------

def _extend(rows: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """All preorders on n+1 points restricting to `rows` on the first n.

    The new point p gets an up-set U = {y : p <= y} and a down-set
    D = {x : x <= p}; transitivity through p forces every d in D below every
    u in U. Rows hold the up-set of each point, so they are minimal
    neighbourhoods.
    """
    n = len(rows)
    p = n
    down_of = [0] * n
    for x in range(n):
        for y in bits(rows[x]):
            down_of[y] |= 1 << x
    for up in range(1 << n):
        if any(rows[y] & ~up for y in bits(up)):
            continue
        for down in range(1 << n):
            if any(down_of[x] & ~down for x in bits(down)):
                continue
            if any(up & ~rows[d] for d in bits(down)):
                continue
            new = [r | (1 << p) if (down >> x) & 1 else r for x, r in enumerate(rows)]
            new.append(up | (1 << p))
            yield tuple(new)


@lru_cache(maxsize=None)
def _preorders(n: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = [r for base in _preorders(n - 1) for r in _extend(base)]
    return tuple(out)


def _relabel(rows: Sequence[int], perm: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(rows)
    for x, r in enumerate(rows):
        m = 0
        for y in bits(r):
            m |= 1 << perm[y]
        out[perm[x]] = m
    return tuple(out)


def _canonical_rows(rows: tuple[int, ...]) -> tuple[int, ...]:
    return min(_relabel(rows, p) for p in permutations(range(len(rows))))


def topologies(n: int, dedup: bool = False) -> list[FiniteSpace]:
    """Every topology on n points as a FiniteSpace, sorted by encoding."""
    _check_range("topologies", n)
    raw = _preorders(n)
    if len(raw) != KNOWN_TOPOLOGIES[n]:
        raise EnumerationError(f"found {len(raw)} topologies on {n} points, expected {KNOWN_TOPOLOGIES[n]}")
    if dedup:
        raw = tuple(sorted({_canonical_rows(r) for r in raw}))
        if len(raw) != KNOWN_TOPOLOGY_CLASSES[n]:
            raise EnumerationError(f"found {len(raw)} classes on {n} points, expected {KNOWN_TOPOLOGY_CLASSES[n]}")
    spaces = [FiniteSpace(n, r) for r in raw]
    spaces.sort(key=lambda X: X.encode())
    return spaces


def topologies_by_filter(n: int) -> list[frozenset[int]]:
    """Independent oracle: every family of subsets closed under union and intersection."""
    top = (1 << n) - 1
    inner = list(range(1, top))
    found = []
    for choice in range(1 << len(inner)):
        fam = {0, top} | {inner[i] for i in range(len(inner)) if (choice >> i) & 1}
        if all(a | b in fam and a & b in fam for a in fam for b in fam):
            found.append(frozenset(fam))
    return found


# --- monoid tables -----------------------------------------------------------

def _tables_brute(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    for flat in product(range(n), repeat=n * n):
        t = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
        if find_unit(t) is not None and associativity_violation(t) is None:
            yield t


def _tables_backtrack(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Tables with a unit e: the unit row and column are forced, the rest is filled
    cell by cell and every fully determined associativity triple is checked."""
    cells = [(x, y) for x in range(n) for y in range(n)]
    seen: set = set()
    for e in range(n):
        t = [[-1] * n for _ in range(n)]
        for x in range(n):
            t[e][x] = x
            t[x][e] = x
        free = [(x, y) for x, y in cells if x != e and y != e]

        def consistent() -> bool:
            for x in range(n):
                for y in range(n):
                    xy = t[x][y]
                    if xy < 0:
                        continue
                    for z in range(n):
                        yz = t[y][z]
                        if yz < 0:
                            continue
                        a, b = t[xy][z], t[x][yz]
                        if a >= 0 and b >= 0 and a != b:
                            return False
            return True

        def fill(k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
            if k == len(free):
                yield tuple(tuple(r) for r in t)
                return
            x, y = free[k]
            for v in range(n):
                t[x][y] = v
                if consistent():
                    yield from fill(k + 1)
            t[x][y] = -1

        for tab in fill(0):
            if tab not in seen:
                seen.add(tab)
                yield tab


def _relabel_table(t: Sequence[Sequence[int]], perm: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    n = len(t)
    out = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            out[perm[x]][perm[y]] = perm[t[x][y]]
    return tuple(tuple(r) for r in out)


@lru_cache(maxsize=None)
def monoid_tables(n: int, dedup: bool = False) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All monoid Cayley tables on {0..n-1}, sorted; dedup keeps the least relabelling."""
    if not 1 <= n <= MAX_POINTS["monoids"]:
        raise ValueError(f"monoids are supported for 1 <= n <= {MAX_POINTS['monoids']}, got {n}")
    tabs = sorted(_tables_brute(n) if n <= 3 else _tables_backtrack(n))
    if dedup:
        perms = list(permutations(range(n)))
        tabs = sorted({min(_relabel_table(t, p) for p in perms) for t in tabs})
        if len(tabs) != KNOWN_MONOID_CLASSES[n]:
            raise EnumerationError(f"found {len(tabs)} monoids of order {n}, expected {KNOWN_MONOID_CLASSES[n]}")
    return tuple(tabs)


def topological_monoids(n: int, dedup: bool = False) -> list[TopoMonoid]:
    """Every (table, topology) with continuous multiplication and open shifts."""
    _check_range("monoids", n)
    spaces = topologies(n)
    found: dict[str, TopoMonoid] = {}
    perms = list(permutations(range(n))) if dedup else [tuple(range(n))]
    for t in monoid_tables(n):
        for X in spaces:
            try:
                M = make_monoid(t, X)
            except MonoidError:
                continue
            if dedup:
                key = min(
                    (_relabel_table(t, p), _relabel(X.nbhd, p)) for p in perms
                )
                tab, rows = key
                if str(key) in found:
                    continue
                M = make_monoid(tab, FiniteSpace(n, rows))
                found[str(key)] = M
            else:
                found[M.encode()] = M
    return sorted(found.values(), key=lambda M: M.encode())


# --- entourages and pairs -------------------------------------------------------

def all_entourages(n: int) -> list[Entourage]:
    _check_range("entourages", n)
    off = [(x, y) for x in range(n) for y in range(n) if x != y]
    out = []
    for choice in range(1 << len(off)):
        rows = [1 << x for x in range(n)]
        for i, (x, y) in enumerate(off):
            if (choice >> i) & 1:
                rows[x] |= 1 << y
        out.append(Entourage(n, tuple(rows)))
    out.sort(key=Entourage.encode)
    return out


def random_entourage(n: int, rng: random.Random, density: float | None = None) -> Entourage:
    p = rng.random() if density is None else density
    rows = []
    for x in range(n):
        r = 1 << x
        for y in range(n):
            if y != x and rng.random() < p:
                r |= 1 << y
        rows.append(r)
    return Entourage(n, tuple(rows))


def quasi_pairs(n: int) -> list[tuple[PreUniformity, PreUniformity]]:
    """Ordered pairs of principal quasi-uniformities; their minima are exactly the preorders."""
    _check_range("pairs", n)
    mins = [PreUniformity.principal(Entourage(n, r)) for r in sorted(_preorders(n), key=lambda r: Entourage(n, r).encode())]
    return [(a, b) for a in mins for b in mins]


def random_quasi_pairs(n: int, count: int, seed: int) -> list[tuple[PreUniformity, PreUniformity]]:
    rng = random.Random(seed)
    pool = sorted(_preorders(n))
    out = []
    for _ in range(count):
        a, b = rng.choice(pool), rng.choice(pool)
        out.append((PreUniformity.principal(Entourage(n, a)), PreUniformity.principal(Entourage(n, b))))
    return out


# --- streams ------------------------------------------------------------------

def encode_instance(kind: str, inst: Any) -> str:
    if kind == "topologies":
        return inst.encode()
    if kind == "pairs":
        return inst[0].min.encode() + "|" + inst[1].min.encode()
    if kind == "monoids":
        return inst.encode()
    if kind == "entourages":
        return inst.encode()
    raise ValueError(kind)


@dataclass(frozen=True)
class InstanceStream:
    kind: str
    n: int
    dedup: bool = False

    def __post_init__(self) -> None:
        _check_range(self.kind, self.n)
        if self.dedup and self.kind not in ("topologies", "monoids"):
            raise ValueError(f"dedup is not supported for {self.kind} streams")

    def items(self) -> list[Any]:
        return _stream_items(self.kind, self.n, self.dedup)

    def __len__(self) -> int:
        return len(self.items())

    def __iter__(self) -> Iterator[Any]:
        return iter(self.items())


@lru_cache(maxsize=None)
def _stream_items(kind: str, n: int, dedup: bool) -> list[Any]:
    if kind == "topologies":
        return topologies(n, dedup)
    if kind == "pairs":
        return quasi_pairs(n)
    if kind == "monoids":
        return topological_monoids(n, dedup)
    return all_entourages(n)


def enumerate_spaces(kind: str, n: int, dedup: bool = False) -> InstanceStream:
    return InstanceStream(kind, n, dedup)
