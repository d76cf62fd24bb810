"""Graph containers and single-source shortest paths.

Vertices are dense integers ``0..n-1``. A :class:`Graph` is immutable after
construction and can be shared freely between threads; every traversal
allocates its own working arrays.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

#: Distance of a vertex not reachable from the source.
INF = math.inf


class Graph:
    """Simple undirected unweighted graph in adjacency-list form.

    Use :meth:`from_edges` to build one from an arbitrary edge list; it
    drops self-loops and collapses parallel edges.
    """

    __slots__ = ("n", "adj", "m", "dropped_self_loops", "dropped_duplicates", "_csr")

    def __init__(self, n: int, adj: Sequence[Sequence[int]]):
        if len(adj) != n:
            raise ValueError(f"adjacency has {len(adj)} rows, expected {n}")
        self.n = n
        self.adj = tuple(tuple(row) for row in adj)
        self.m = sum(len(row) for row in self.adj) // 2
        self.dropped_self_loops = 0
        self.dropped_duplicates = 0
        self._csr = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        loops = dups = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                loops += 1
                continue
            if v in nbrs[u]:
                dups += 1
                continue
            nbrs[u].add(v)
            nbrs[v].add(u)
        g = cls(n, [sorted(s) for s in nbrs])
        g.dropped_self_loops = loops
        g.dropped_duplicates = dups
        return g

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, sorted."""
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.adj[u]
        i = _bisect(row, v)
        return i < len(row) and row[i] == v

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(indptr, indices)`` arrays of the symmetric adjacency, cached."""
        if self._csr is None:
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            indptr[1:] = np.cumsum([len(r) for r in self.adj])
            indices = np.fromiter(
                (v for row in self.adj for v in row), dtype=np.int32, count=2 * self.m
            )
            self._csr = (indptr, indices)
        return self._csr


def _bisect(row: Sequence[int], x: int) -> int:
    lo, hi = 0, len(row)
    while lo < hi:
        mid = (lo + hi) // 2
        if row[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


class WeightedGraph:
    """A :class:`Graph` topology with a positive weight per edge.

    ``data`` is a float array aligned with ``topology.csr()``: the weight of
    the edge ``(u, topology.adj[u][i])`` is ``data[indptr[u] + i]``. Both
    directions of an edge carry the same weight. Entries equal to
    :data:`INF` mark edges outside the region of interest; shortest-path
    routines never relax them.
    """

    __slots__ = ("topology", "data")

    def __init__(self, topology: Graph, data):
        data = np.asarray(data, dtype=np.float64)
        if data.shape != (2 * topology.m,):
            raise ValueError(f"expected {2 * topology.m} weights, got shape {data.shape}")
        if not (data > 0).all():
            raise ValueError("edge weights must be positive")
        self.topology = topology
        self.data = data

    @classmethod
    def from_rows(cls, topology: Graph, rows: Sequence[Sequence[float]]) -> "WeightedGraph":
        return cls(topology, [w for row in rows for w in row])

    @classmethod
    def from_weighted_edges(
        cls, n: int, edges: Iterable[tuple[int, int, float]]
    ) -> "WeightedGraph":
        """Build from ``(u, v, w)`` triples; parallel edges keep the lightest weight."""
        best: dict[tuple[int, int], float] = {}
        for u, v, w in edges:
            if u == v:
                continue
            if not w > 0:
                raise ValueError(f"non-positive weight {w} on edge ({u}, {v})")
            key = (u, v) if u < v else (v, u)
            if key not in best or w < best[key]:
                best[key] = w
        g = Graph.from_edges(n, best)
        return cls.from_rows(g, [[best[(u, v) if u < v else (v, u)] for v in g.adj[u]] for u in range(n)])

    @classmethod
    def unit(cls, g: Graph) -> "WeightedGraph":
        return cls(g, np.ones(2 * g.m))

    @property
    def n(self) -> int:
        return self.topology.n

    def weight(self, u: int, v: int) -> float:
        row = self.topology.adj[u]
        i = _bisect(row, v)
        if i == len(row) or row[i] != v:
            raise KeyError((u, v))
        return float(self.data[self.topology.csr()[0][u] + i])

    def weighted_edges(self) -> list[tuple[int, int, float]]:
        indptr, _ = self.topology.csr()
        data = self.data.tolist()
        return [
            (u, v, data[indptr[u] + i])
            for u in range(self.n)
            for i, v in enumerate(self.topology.adj[u])
            if u < v
        ]

    def total_weight(self, edges: Iterable[tuple[int, int]]) -> float:
        return sum(self.weight(u, v) for u, v in edges)

    def to_sparse(self) -> sparse.csr_matrix:
        """Symmetric CSR matrix of finite weights, for :mod:`scipy.sparse.csgraph`."""
        indptr, indices = self.topology.csr()
        return csr_from_arrays(self.n, indptr, indices, self.data)


def csr_from_arrays(n, indptr, indices, data) -> sparse.csr_matrix:
    """CSR matrix from adjacency arrays, dropping infinite entries."""
    finite = np.isfinite(data)
    if not finite.all():
        rows = np.repeat(np.arange(n), np.diff(indptr))[finite]
        return sparse.csr_matrix((data[finite], (rows, indices[finite])), shape=(n, n))
    return sparse.csr_matrix((data, indices, indptr), shape=(n, n))


@dataclass(frozen=True)
class DistanceMap:
    """Shortest-path distances and a parent tree from ``source``.

    ``dist[v]`` is :data:`INF` and ``parent[v]`` is ``-1`` for unreachable
    vertices; ``parent[source]`` is ``-1`` as well.
    """

    source: int
    dist: tuple
    parent: tuple

    def reachable(self, v: int) -> bool:
        return self.dist[v] != INF

    def path_to(self, v: int) -> list[int]:
        """Vertices on the tree path from ``source`` to ``v``, inclusive."""
        if not self.reachable(v):
            raise ValueError(f"vertex {v} unreachable from {self.source}")
        path = [v]
        while v != self.source:
            v = self.parent[v]
            path.append(v)
        path.reverse()
        return path


def bfs_sssp(g: Graph, source: int) -> DistanceMap:
    """Unweighted single-source shortest paths.

    Neighbours are scanned in increasing id order, so each vertex's parent is
    its smallest-id neighbour on the previous BFS layer.
    """
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range")
    dist = [INF] * g.n
    parent = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    adj = g.adj
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in adj[u]:
            if dist[v] == INF:
                dist[v] = du
                parent[v] = u
                queue.append(v)
    return DistanceMap(source, tuple(dist), tuple(parent))


def bfs_distances(adj: Sequence[Sequence[int]], source: int) -> list:
    """Plain BFS distance list over a raw adjacency structure."""
    dist = [INF] * len(adj)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in adj[u]:
            if dist[v] == INF:
                dist[v] = du
                queue.append(v)
    return dist


def dijkstra_sssp(wg: WeightedGraph, source: int) -> DistanceMap:
    """Weighted single-source shortest paths with a binary heap.

    Ties between equal-length paths go to the predecessor settled first.
    """
    n = wg.n
    if not 0 <= source < n:
        raise ValueError(f"source {source} out of range")
    dist = [INF] * n
    parent = [-1] * n
    done = [False] * n
    dist[source] = 0
    heap = [(0, source)]
    adj = wg.topology.adj
    indptr = wg.topology.csr()[0].tolist()
    data = wg.data.tolist()
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in zip(adj[u], data[indptr[u] : indptr[u + 1]]):
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
    return DistanceMap(source, tuple(dist), tuple(parent))


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int], dict[int, int]]:
    """Subgraph induced by ``vertices``.

    Returns ``(h, to_old, to_new)`` where ``h`` is over ``0..k-1`` with
    vertices renumbered in increasing order of their original ids.
    """
    to_old = sorted(set(vertices))
    for v in to_old:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    to_new = {v: i for i, v in enumerate(to_old)}
    adj = [[to_new[w] for w in g.adj[v] if w in to_new] for v in to_old]
    return Graph(len(to_old), adj), to_old, to_new


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted vertex lists, ordered by their smallest vertex."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            u = stack.pop()
            for v in g.adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def component_of(g: Graph, v: int) -> list[int]:
    return sorted(u for u, d in enumerate(bfs_distances(g.adj, v)) if d != INF)


def is_connected_subset(g: Graph, vertices: Iterable[int]) -> bool:
    """Whether ``g[vertices]`` is connected (the empty set is not)."""
    s = set(vertices)
    if not s:
        return False
    start = next(iter(s))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in g.adj[u]:
            if v in s and v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(s)
