"""Regression runs of the law registry over instance streams, and separation hunts."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

from .enumerate import InstanceStream, encode_instance
from .laws import CONTEXTS, REGISTRY, SpaceContext, parse_invariant


@dataclass
class RegressionVerdict:
    checked: int = 0
    skipped: int = 0
    violations: list[tuple[str, str, Any, Any]] = field(default_factory=list)
    per_law: dict[str, dict[str, int]] = field(default_factory=dict)
    instances: int = 0
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "RegressionVerdict") -> None:
        self.checked += other.checked
        self.skipped += other.skipped
        self.instances += other.instances
        self.violations.extend(other.violations)
        for law, counts in other.per_law.items():
            mine = self.per_law.setdefault(law, {"checked": 0, "skipped": 0, "violations": 0})
            for k, v in counts.items():
                mine[k] += v

    def to_dict(self) -> dict[str, Any]:
        """Machine form; elapsed time is left out so reports stay byte-stable."""
        return {
            "instances": self.instances,
            "checked": self.checked,
            "skipped": self.skipped,
            "violations": [list(v) for v in self.violations],
            "per_law": {k: dict(v) for k, v in sorted(self.per_law.items())},
        }


def _validate(stream: InstanceStream, laws: Sequence[str]) -> None:
    for law in laws:
        if law not in REGISTRY:
            raise KeyError(f"unknown law {law!r}")
        if REGISTRY[law].kind != stream.kind:
            raise ValueError(f"law {law} applies to {REGISTRY[law].kind}, not {stream.kind}")


def _run_slice(kind: str, n: int, dedup: bool, laws: tuple[str, ...], start: int, stop: int) -> RegressionVerdict:
    items = InstanceStream(kind, n, dedup).items()[start:stop]
    return run_items(kind, items, laws)


def _plain(v: Any) -> Any:
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return str(v)


def run_items(kind: str, items: Sequence[Any], laws: Sequence[str]) -> RegressionVerdict:
    out = RegressionVerdict(per_law={law: {"checked": 0, "skipped": 0, "violations": 0} for law in laws})
    make = CONTEXTS[kind]
    for inst in items:
        ctx = make(inst)
        out.instances += 1
        for law_id in laws:
            law = REGISTRY[law_id]
            counts = out.per_law[law_id]
            if not law.premise(ctx):
                out.skipped += 1
                counts["skipped"] += 1
                continue
            out.checked += 1
            counts["checked"] += 1
            bad = law.check(ctx)
            if bad is not None:
                counts["violations"] += 1
                out.violations.append((law_id, encode_instance(kind, inst), _plain(bad[0]), _plain(bad[1])))
    return out


def chunk_bounds(total: int, jobs: int) -> list[tuple[int, int]]:
    """Contiguous index ranges, at most 4 per worker, covering 0..total in order."""
    if total == 0:
        return []
    pieces = max(1, min(total, jobs * 4))
    step, extra = divmod(total, pieces)
    bounds, lo = [], 0
    for i in range(pieces):
        hi = lo + step + (1 if i < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def regression_suite(stream: InstanceStream, laws: Sequence[str], jobs: int = 1) -> RegressionVerdict:
    """Run every law on every instance; results are merged in stream order, so the
    verdict does not depend on `jobs`."""
    laws = tuple(laws)
    _validate(stream, laws)
    t0 = time.perf_counter()
    total = len(stream)
    if jobs <= 1 or total < 2:
        verdict = run_items(stream.kind, stream.items(), laws)
    else:
        verdict = RegressionVerdict(per_law={law: {"checked": 0, "skipped": 0, "violations": 0} for law in laws})
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_slice, stream.kind, stream.n, stream.dedup, laws, lo, hi)
                       for lo, hi in chunk_bounds(total, jobs)]
            for f in futures:
                verdict.merge(f.result())
    verdict.elapsed = time.perf_counter() - t0
    return verdict


# --- separation hunts -----------------------------------------------------------

@dataclass(frozen=True)
class HuntResult:
    pair: tuple[str, str]
    searched: int
    witness: str | None = None
    index: int | None = None
    values: tuple[int, int] | None = None

    @property
    def found(self) -> bool:
        return self.witness is not None


def hunt_separations(stream: InstanceStream, pair: tuple[str, str]) -> HuntResult:
    """First instance, in stream order, where the two invariants differ.

    A negative result only covers the stream searched; it says nothing about
    larger spaces.
    """
    if stream.kind != "topologies":
        raise ValueError("separation hunts run over topologies")
    for name in pair:
        parse_invariant(name)
    items = stream.items()
    for i, X in enumerate(items):
        ctx = SpaceContext(X)
        a, b = ctx.value(pair[0]), ctx.value(pair[1])
        if a != b:
            return HuntResult(pair, i + 1, X.encode(), i, (a, b))
    return HuntResult(pair, len(items))
