"""Exact combinatorial optimisation over small bitmask families."""
from __future__ import annotations

from typing import Callable, Sequence

from .relation import bits, popcount


def greedy_cover(universe: int, sets: Sequence[int]) -> list[int] | None:
    left = universe
    chosen: list[int] = []
    while left:
        best, gain = -1, 0
        for i, s in enumerate(sets):
            g = popcount(s & left)
            if g > gain:
                best, gain = i, g
        if best < 0:
            return None
        chosen.append(best)
        left &= ~sets[best]
    return chosen


def min_cover(universe: int, sets: Sequence[int]) -> tuple[int, ...] | None:
    """Indices of a minimum-size subfamily whose union contains `universe`.

    Branch and bound: always branch on the uncovered element with the fewest
    covering sets, greedy solution as the initial incumbent. Returns None if
    no cover exists. Deterministic for a fixed input order.
    """
    if universe == 0:
        return ()
    sets = [s & universe for s in sets]
    start = greedy_cover(universe, sets)
    if start is None:
        return None
    best = [tuple(sorted(start))]
    covering: dict[int, list[int]] = {e: [i for i, s in enumerate(sets) if (s >> e) & 1] for e in bits(universe)}
    biggest = max(popcount(s) for s in sets)

    def dfs(left: int, chosen: list[int]) -> None:
        if not left:
            if len(chosen) < len(best[0]):
                best[0] = tuple(sorted(chosen))
            return
        need = -(-popcount(left) // biggest)
        if len(chosen) + need >= len(best[0]):
            return
        pivot = min(bits(left), key=lambda e: len(covering[e]))
        for i in covering[pivot]:
            chosen.append(i)
            dfs(left & ~sets[i], chosen)
            chosen.pop()

    dfs(universe, [])
    return best[0]


def min_cover_size(universe: int, sets: Sequence[int]) -> int:
    found = min_cover(universe, sets)
    if found is None:
        raise ValueError("family does not cover the universe")
    return len(found)


def max_hereditary(n: int, ok: Callable[[int], bool], candidates: int | None = None) -> int:
    """Largest mask (by size, first found in index order) satisfying a hereditary predicate.

    `ok` must be closed under subsets; the empty set is assumed to pass.
    """
    pool = list(bits((1 << n) - 1 if candidates is None else candidates))
    best = [0]

    def dfs(cur: int, size: int, start: int) -> None:
        if size > popcount(best[0]):
            best[0] = cur
        for k in range(start, len(pool)):
            if size + len(pool) - k <= popcount(best[0]):
                return
            nxt = cur | (1 << pool[k])
            if ok(nxt):
                dfs(nxt, size + 1, k + 1)

    dfs(0, 0, 0)
    return best[0]
