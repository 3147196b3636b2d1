import functools

import pytest

from repshift.groups import SymmetricGroup
from repshift.hnn import builtin_catalog
from repshift.shift_graph import build_graph, prune

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def sym(n):
    return SymmetricGroup(n)


@functools.lru_cache(maxsize=None)
def graph_for(knot, n, pruned=True):
    g = build_graph(builtin_catalog()[knot], sym(n))
    return prune(g) if pruned else g


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
