"""Entourages on {0..n-1} as packed bit rows, plus covers and stars.

Point-sets are plain ints used as bitmasks: bit i set means point i is in.
Row x of an entourage is the ball B(x;U).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class CarrierMismatch(ValueError):
    pass


def full_mask(n: int) -> int:
    return (1 << n) - 1


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def to_points(mask: int) -> list[int]:
    return list(bits(mask))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Entourage:
    """A reflexive relation; rows[x] is the bitmask of {y : (x,y) in U}."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("carrier size must be >= 1")
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        top = full_mask(self.n)
        for x, r in enumerate(self.rows):
            if r & ~top:
                raise ValueError(f"row {x} has bits outside the carrier")
            if not (r >> x) & 1:
                raise ValueError(f"not reflexive: ({x},{x}) missing")

    @classmethod
    def diagonal(cls, n: int) -> "Entourage":
        return cls(n, tuple(1 << x for x in range(n)))

    @classmethod
    def full(cls, n: int) -> "Entourage":
        return cls(n, (full_mask(n),) * n)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]], *, add_diagonal: bool = True) -> "Entourage":
        rows = [1 << x for x in range(n)] if add_diagonal else [0] * n
        for x, y in pairs:
            if not (0 <= x < n and 0 <= y < n):
                raise ValueError(f"pair ({x},{y}) outside carrier of size {n}")
            rows[x] |= 1 << y
        return cls(n, tuple(rows))

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[bool]]) -> "Entourage":
        n = len(matrix)
        return cls(n, tuple(to_mask(j for j, v in enumerate(row) if v) for row in matrix))

    def __contains__(self, pair: tuple[int, int]) -> bool:
        x, y = pair
        return bool((self.rows[x] >> y) & 1)

    def pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n) for y in bits(self.rows[x])]

    def off_diagonal(self) -> list[tuple[int, int]]:
        return [(x, y) for x, y in self.pairs() if x != y]

    def matrix(self) -> list[list[bool]]:
        return [[bool((r >> y) & 1) for y in range(self.n)] for r in self.rows]

    def size(self) -> int:
        return sum(popcount(r) for r in self.rows)

    def issubset(self, other: "Entourage") -> bool:
        _same(self, other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def __le__(self, other: "Entourage") -> bool:
        return self.issubset(other)

    def __and__(self, other: "Entourage") -> "Entourage":
        _same(self, other)
        return Entourage(self.n, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def __or__(self, other: "Entourage") -> "Entourage":
        _same(self, other)
        return Entourage(self.n, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def __matmul__(self, other: "Entourage") -> "Entourage":
        return compose(self, other)

    def inverse(self) -> "Entourage":
        return inverse(self)

    def is_diagonal(self) -> bool:
        return all(r == 1 << x for x, r in enumerate(self.rows))

    def is_symmetric(self) -> bool:
        return self == inverse(self)

    def is_transitive(self) -> bool:
        return compose(self, self).issubset(self)

    def first_difference(self, other: "Entourage") -> tuple[int, int] | None:
        """Smallest pair (x,y) in self but not in other."""
        _same(self, other)
        for x, (a, b) in enumerate(zip(self.rows, other.rows)):
            extra = a & ~b
            if extra:
                return (x, next(bits(extra)))
        return None

    def encode(self) -> str:
        width = (self.n + 3) // 4 or 1
        return ".".join(format(r, f"0{width}x") for r in self.rows)


def _same(u: Entourage, v: Entourage) -> None:
    if u.n != v.n:
        raise CarrierMismatch(f"carriers differ: {u.n} vs {v.n}")


def inverse(u: Entourage) -> Entourage:
    rows = [0] * u.n
    for x, r in enumerate(u.rows):
        for y in bits(r):
            rows[y] |= 1 << x
    return Entourage(u.n, tuple(rows))


def compose(u: Entourage, v: Entourage) -> Entourage:
    """UV = {(x,z) : exists y, (x,y) in U and (y,z) in V}."""
    _same(u, v)
    vr = v.rows
    out = []
    for r in u.rows:
        acc = 0
        for y in bits(r):
            acc |= vr[y]
        out.append(acc)
    return Entourage(u.n, tuple(out))


def alt_power(u: Entourage, mode: str, n: int) -> Entourage:
    """Plain powers U^n (n may be negative) or alternating powers U^{+-n}, U^{-+n}.

    mode "pm" starts with U, "mp" starts with U^{-1}:
    U^{pm(n+1)} = U U^{mp n} and U^{mp(n+1)} = U^{-1} U^{pm n}.
    """
    if mode == "plain":
        base = u if n >= 0 else inverse(u)
        out = Entourage.diagonal(u.n)
        for _ in range(abs(n)):
            out = compose(out, base)
        return out
    if mode not in ("pm", "mp"):
        raise ValueError(f"unknown power mode {mode!r}")
    if n < 0:
        raise ValueError("alternating powers need n >= 0")
    pm = mp = Entourage.diagonal(u.n)
    inv = inverse(u)
    for _ in range(n):
        pm, mp = compose(u, mp), compose(inv, pm)
    return pm if mode == "pm" else mp


def ball(u: Entourage, a: int) -> int:
    """B(A;U) for a point-set mask A."""
    acc = 0
    for x in bits(a):
        acc |= u.rows[x]
    return acc


def point_ball(u: Entourage, x: int) -> int:
    return u.rows[x]


@dataclass(frozen=True)
class Cover:
    n: int
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        union = 0
        for m in self.members:
            union |= m
        if union != full_mask(self.n):
            raise ValueError("members do not cover the carrier")

    @classmethod
    def of(cls, n: int, members: Iterable[Iterable[int] | int]) -> "Cover":
        ms = tuple(m if isinstance(m, int) else to_mask(m) for m in members)
        return cls(n, ms)

    @classmethod
    def balls(cls, u: Entourage) -> "Cover":
        return cls(u.n, u.rows)


def star(cover: Cover, a: int, n: int) -> int:
    """St^n(A; cover)."""
    if n < 0:
        raise ValueError("star index must be >= 0")
    cur = a
    for _ in range(n):
        nxt = 0
        for m in cover.members:
            if m & cur:
                nxt |= m
        if nxt == cur:
            break
        cur = nxt
    return cur
