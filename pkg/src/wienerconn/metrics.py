"""Connector metrics: Wiener index, rooted distance costs, density, betweenness.

All distances here are measured inside the induced subgraph ``G[S]`` unless
the function name says otherwise.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import DisconnectedError, InfeasibleError
from .graph import INF, Graph, bfs_distances, bfs_sssp, induced_subgraph


def _induced_distances(g: Graph, vertices, source: int) -> tuple[list, list[int], dict[int, int]]:
    h, to_old, to_new = induced_subgraph(g, vertices)
    if source not in to_new:
        raise ValueError(f"root {source} not in vertex set")
    return bfs_distances(h.adj, to_new[source]), to_old, to_new


def wiener_index(g: Graph, vertices: Iterable[int]) -> int:
    """Sum of pairwise distances in ``g[vertices]``, each unordered pair once.

    Raises
    ------
    DisconnectedError
        If the induced subgraph is disconnected (the index would be infinite).
    """
    h, _, _ = induced_subgraph(g, vertices)
    if h.n == 0:
        raise ValueError("empty vertex set")
    total = 0
    for s in range(h.n):
        dist = bfs_distances(h.adj, s)
        row = 0
        for d in dist:
            if d == INF:
                raise DisconnectedError("induced subgraph is disconnected")
            row += d
        total += row
    return total // 2


def induced_distance_sum(g: Graph, vertices: Iterable[int], root: int) -> int:
    """``sum_u d_{G[S]}(u, root)``."""
    dist, _, _ = _induced_distances(g, vertices, root)
    if INF in dist:
        raise DisconnectedError("induced subgraph is disconnected")
    return sum(dist)


def root_cost_A(g: Graph, vertices: Iterable[int], root: int) -> int:
    """``|S| * sum_u d_{G[S]}(u, root)``, the rooted proxy for the Wiener index."""
    s = sorted(set(vertices))
    return len(s) * induced_distance_sum(g, s, root)


def edge_count(g: Graph, vertices: Iterable[int]) -> int:
    s = set(vertices)
    return sum(1 for u in s for v in g.adj[u] if v in s and u < v)


def density(g: Graph, vertices: Iterable[int]) -> float:
    """``|E[S]| / C(|S|, 2)``; zero for fewer than two vertices."""
    s = set(vertices)
    k = len(s)
    if k < 2:
        return 0.0
    return edge_count(g, s) / (k * (k - 1) / 2)


def brandes_betweenness(g: Graph) -> list[float]:
    """Exact betweenness centrality of every vertex (Brandes accumulation).

    Scores are normalised by ``(n-1)(n-2)/2``, the number of vertex pairs not
    involving the vertex itself; for ``n < 3`` every score is 0.
    """
    n = g.n
    bc = [0.0] * n
    if n < 3:
        return bc
    adj = g.adj
    for s in range(n):
        order = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        dist = [-1] * n
        sigma[s] = 1
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            dv = dist[v] + 1
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dv
                    queue.append(w)
                if dist[w] == dv:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    # each unordered pair was accumulated from both endpoints
    scale = 1.0 / ((n - 1) * (n - 2))
    return [b * scale for b in bc]


@dataclass(frozen=True)
class QuerySet:
    """Sorted, deduplicated query vertices known to share one component."""

    vertices: tuple[int, ...]

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v) -> bool:
        return v in self.vertices


def make_query(g: Graph, vertices: Iterable[int]) -> QuerySet:
    """Validate query vertices against ``g``.

    Raises ``ValueError`` for an empty set or out-of-range ids and
    :class:`InfeasibleError` when the vertices span several components.
    """
    q = tuple(sorted(set(int(v) for v in vertices)))
    if not q:
        raise ValueError("query set is empty")
    for v in q:
        if not 0 <= v < g.n:
            raise ValueError(f"query vertex {v} out of range for n={g.n}")
    dist = bfs_sssp(g, q[0]).dist
    apart = [v for v in q if dist[v] == INF]
    if apart:
        raise InfeasibleError(f"query vertices {apart} not connected to {q[0]}")
    return QuerySet(q)


@dataclass(frozen=True)
class Connector:
    """A connected vertex set with its cached metrics."""

    vertices: tuple[int, ...]
    wiener: int
    size: int
    density: float
    root: Optional[int] = None
    root_cost: Optional[int] = None
    extra: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_vertices(cls, g: Graph, vertices: Iterable[int], root: Optional[int] = None) -> "Connector":
        s = tuple(sorted(set(vertices)))
        w = wiener_index(g, s)
        cost = root_cost_A(g, s, root) if root is not None else None
        return cls(s, w, len(s), density(g, s), root, cost)

    def contains(self, q: Iterable[int]) -> bool:
        vs = set(self.vertices)
        return all(v in vs for v in q)

    def to_dict(self) -> dict:
        d = {
            "schema": 1,
            "vertices": list(self.vertices),
            "wiener": self.wiener,
            "size": self.size,
            "density": self.density,
        }
        if self.root is not None:
            d["root"] = self.root
            d["root_cost"] = self.root_cost
        return d


def average_betweenness(bc: Sequence[float], vertices: Iterable[int]) -> float:
    s = list(vertices)
    return sum(bc[v] for v in s) / len(s) if s else 0.0
