import numpy as np
import pytest

from centrasim.graph import DirectedGraph, parse_edge_list, repair_dangling, symmetrize
from centrasim.graph import is_strongly_connected

# acceptance-criterion verdict lines, echoed after the run summary
CRITERION_LINES = []


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERION_LINES):
            terminalreporter.write_line(line)


FIG1_TEXT = """\
# six-node reference graph
1 2
2 1
2 3
3 2
3 4
1 4
4 3
5 4
3 6
4 6
6 4
6 5
"""


@pytest.fixture(scope="session")
def fig1():
    g = parse_edge_list(FIG1_TEXT)
    # label order coincides with index order in this file
    assert list(g.labels) == ["1", "2", "3", "4", "5", "6"]
    return g


def random_digraph(rng, n, p=0.15, repaired=True):
    """Random digraph; with repaired=True every node gets out-degree >= 1."""
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    edges = {(int(i), int(j)) for i, j in zip(*np.nonzero(mask))}
    for i in range(n):
        if repaired and not any(u == i for (u, _) in edges):
            j = int(rng.integers(n - 1))
            edges.add((i, j if j < i else j + 1))
    return DirectedGraph.from_edges(n, edges)


def random_connected_digraph(rng, n, p=0.15):
    """Repaired digraph whose symmetrized communication graph is connected."""
    for _ in range(200):
        g = random_digraph(rng, n, p)
        if is_strongly_connected(symmetrize(g)):
            return g
    raise RuntimeError("could not draw a connected graph")


def random_oriented_tree(rng, n):
    """Uniform random tree skeleton with random edge orientations."""
    edges = set()
    for v in range(1, n):
        u = int(rng.integers(v))
        if rng.random() < 0.5:
            edges.add((u, v))
        else:
            edges.add((v, u))
    return DirectedGraph.from_edges(n, edges)
