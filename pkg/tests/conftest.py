import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

import oracles  # noqa: E402
from qulab.relation import Entourage  # noqa: E402
from qulab.topology import FiniteSpace  # noqa: E402

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def entourages(draw, min_n: int = 1, max_n: int = 5, n: int | None = None):
    size = n if n is not None else draw(st.integers(min_n, max_n))
    rows = tuple((1 << x) | draw(st.integers(0, (1 << size) - 1)) for x in range(size))
    return Entourage(size, rows)


@st.composite
def preorders(draw, min_n: int = 1, max_n: int = 5, n: int | None = None):
    """Transitive closures of random entourages, which cover every preorder."""
    u = draw(entourages(min_n, max_n, n))
    rows = list(u.rows)
    changed = True
    while changed:
        changed = False
        for x in range(u.n):
            acc = rows[x]
            for y in range(u.n):
                if (rows[x] >> y) & 1:
                    acc |= rows[y]
            if acc != rows[x]:
                rows[x], changed = acc, True
    return Entourage(u.n, tuple(rows))


@st.composite
def spaces(draw, min_n: int = 1, max_n: int = 5, n: int | None = None):
    return FiniteSpace.from_preorder(draw(preorders(min_n, max_n, n)))


def to_rel(u: Entourage) -> frozenset:
    return frozenset(u.pairs())


def from_rel(n: int, r) -> Entourage:
    return Entourage.from_pairs(n, r)


def to_mask(s) -> int:
    return sum(1 << x for x in s)


def oracle_space(opens_family, n: int) -> tuple["oracles.Space", FiniteSpace]:
    return oracles.Space(n, opens_family), FiniteSpace.from_opens(n, [to_mask(o) for o in opens_family])


@pytest.fixture(scope="session")
def oracle_spaces_3():
    """All 29 topologies on three points, as (oracle space, library space) pairs."""
    return [oracle_space(f, 3) for f in oracles.all_topologies(3)]


ACCEPTANCE_LINES: list[str] = []


def report_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
