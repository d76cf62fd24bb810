from __future__ import annotations

import random
from pathlib import Path

import pytest

from wienerconn.graph import Graph
from wienerconn.io import read_graph

DATA = Path(__file__).parent / "data"


def random_connected_graph(n: int, extra: int, rng: random.Random) -> Graph:
    """Random spanning tree plus ``extra`` further random edges."""
    edges = [(v, rng.randrange(v)) for v in range(1, n)]
    for _ in range(extra):
        u, v = rng.sample(range(n), 2) if n > 1 else (0, 0)
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def floyd_warshall_wiener(g: Graph, vertices) -> float:
    """Naive all-pairs oracle on the induced subgraph; inf if disconnected."""
    s = sorted(set(vertices))
    k = len(s)
    inf = float("inf")
    d = [[0 if i == j else (1 if g.has_edge(s[i], s[j]) else inf) for j in range(k)] for i in range(k)]
    for m in range(k):
        for i in range(k):
            for j in range(k):
                if d[i][m] + d[m][j] < d[i][j]:
                    d[i][j] = d[i][m] + d[m][j]
    return sum(d[i][j] for i in range(k) for j in range(i + 1, k))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def figure2_graph() -> Graph:
    """Reconstructed Figure 2 instance.

    Query line v0..v9 (ids 0-9); r1 (id 10) adjacent to v0..v5 and r2
    (id 11) adjacent to v4..v9. Reproduces the published index values of
    the line, the line plus r1, and the line plus both helpers.
    """
    edges = [(i, i + 1) for i in range(9)]
    edges += [(10, i) for i in range(0, 6)]
    edges += [(11, i) for i in range(4, 10)]
    return Graph.from_edges(12, edges)


@pytest.fixture(scope="session")
def karate() -> Graph:
    g, _ = read_graph(DATA / "karate.txt")
    return g


def random_subtree(g: Graph, root: int, size: int, rng: random.Random) -> list[tuple[int, int]]:
    """Edges of a random tree in ``g`` grown from ``root`` to ``size`` vertices."""
    inside = {root}
    edges = []
    while len(inside) < size:
        frontier = [(u, v) for u in sorted(inside) for v in g.adj[u] if v not in inside]
        if not frontier:
            break
        u, v = rng.choice(frontier)
        inside.add(v)
        edges.append((u, v))
    return edges


def comb_instance(h: int) -> tuple[Graph, list[tuple[int, int]]]:
    """Path 0..h with a pendant tooth on each path vertex, plus a shortcut.

    Vertex ``h + 1`` is adjacent to the root 0 and to the far end ``h``, so
    the far half of the comb is much closer to the root in the graph than
    along the tree. Teeth are ``h + 2 ..``. Returns the graph and the tree
    edges (path plus teeth).
    """
    path = [(i, i + 1) for i in range(h)]
    teeth = [(i, h + 1 + i) for i in range(1, h + 1)]
    g = Graph.from_edges(2 * h + 2, path + teeth + [(0, h + 1), (h + 1, h)])
    return g, path + teeth


# one summary line per acceptance criterion, printed after the test run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
