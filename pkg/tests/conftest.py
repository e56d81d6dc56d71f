from __future__ import annotations

import pytest

from lpx.fixtures import builtin_fixtures
from lpx.graph import Graph


def petersen_by_pentagram() -> Graph:
    """Outer 5-cycle, inner pentagram, spokes: built independently of the
    Kneser construction used by the package."""
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    return Graph.from_edges(edges, n=10)


@pytest.fixture(scope="session")
def fixtures():
    return builtin_fixtures()


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda s: int(s.split(":")[0])):
        ok, detail = ACCEPTANCE[key]
        num, label = key.split(": ", 1)
        terminalreporter.write_line(f"criterion {num:>2} {label}: {'PASS' if ok else 'FAIL'} ({detail})")
