"""Steiner trees: Mehlhorn's 2-approximation, an exact oracle, and the ``st`` baseline."""

from __future__ import annotations

import heapq
import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csgraph

from .errors import InfeasibleError, InstanceTooLargeError
from .graph import Graph, WeightedGraph
from .metrics import Connector, QuerySet


@dataclass(frozen=True)
class RootedTree:
    """Tree given by its edge set (pairs ``(u, v)`` with ``u < v``) and a root."""

    root: int
    edges: frozenset

    @classmethod
    def build(cls, root: int, edges: Iterable[tuple[int, int]]) -> "RootedTree":
        return cls(root, frozenset((u, v) if u < v else (v, u) for u, v in edges))

    @property
    def vertices(self) -> frozenset:
        vs = {self.root}
        for u, v in self.edges:
            vs.add(u)
            vs.add(v)
        return frozenset(vs)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for row in adj.values():
            row.sort()
        return adj

    def children(self) -> dict[int, list[int]]:
        """Children lists when the tree hangs from ``root``, in increasing id order."""
        adj = self.adjacency()
        kids: dict[int, list[int]] = {v: [] for v in adj}
        seen = {self.root}
        stack = [self.root]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    kids[u].append(v)
                    stack.append(v)
        return kids

    def is_tree(self) -> bool:
        vs = self.vertices
        if len(self.edges) != len(vs) - 1:
            return False
        adj = self.adjacency()
        seen = {self.root}
        stack = [self.root]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == len(vs)

    def leaves(self) -> list[int]:
        return sorted(v for v, row in self.adjacency().items() if len(row) <= 1)

    def weight(self, wg: WeightedGraph) -> float:
        return wg.total_weight(self.edges)


class _DisjointSet:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def kruskal(edges: Iterable[tuple[float, int, int]]) -> list[tuple[float, int, int]]:
    """Minimum spanning forest of ``(w, u, v)`` edges.

    Edges are scanned in ``(w, min(u, v), max(u, v))`` order so equal-weight
    ties resolve the same way on every run.
    """
    ordered = sorted((w, min(u, v), max(u, v)) for w, u, v in edges)
    dsu = _DisjointSet()
    return [(w, u, v) for w, u, v in ordered if dsu.union(u, v)]


def prune_leaves(edges: Iterable[tuple[int, int]], keep: Iterable[int]) -> set[tuple[int, int]]:
    """Repeatedly delete leaves not in ``keep``."""
    keep = set(keep)
    adj: dict[int, set[int]] = defaultdict(set)
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    stack = [v for v, row in adj.items() if len(row) == 1 and v not in keep]
    while stack:
        v = stack.pop()
        if v not in adj or len(adj[v]) != 1 or v in keep:
            continue
        (u,) = adj.pop(v)
        adj[u].discard(v)
        if len(adj[u]) == 1 and u not in keep:
            stack.append(u)
        elif not adj[u]:
            del adj[u]
    return {(u, v) for u, row in adj.items() for v in row if u < v}


def voronoi_regions(wg: WeightedGraph, terminals: Sequence[int]):
    """Multi-source shortest paths from all terminals at once.

    Returns ``(dist, pred, owner)`` arrays: distance to the nearest terminal,
    predecessor on that shortest path (``-9999`` at terminals and unreachable
    vertices, following scipy), and the nearest terminal itself (``-9999``
    when unreachable).
    """
    dist, pred, owner = csgraph.dijkstra(
        wg.to_sparse(),
        directed=True,
        indices=np.asarray(terminals, dtype=np.int64),
        return_predecessors=True,
        min_only=True,
    )
    return dist, pred, owner


def _walk_to_owner(v: int, pred: np.ndarray) -> list[tuple[int, int]]:
    edges = []
    p = int(pred[v])
    while p >= 0:
        edges.append((p, v))
        v, p = p, int(pred[p])
    return edges


def mehlhorn_steiner(wg: WeightedGraph, terminals: Iterable[int], root: Optional[int] = None) -> RootedTree:
    """Steiner tree of weight at most twice the optimum (Mehlhorn 1988).

    One multi-source Dijkstra pass gives each vertex its nearest terminal.
    Every edge joining two regions proposes the terminal pair it connects at
    cost ``d(s, u) + w(u, v) + d(v, t)``; a minimum spanning tree over the
    cheapest proposal per pair is expanded back into graph paths, re-spanned
    and stripped of non-terminal leaves.

    Raises
    ------
    InfeasibleError
        If the terminals are not all in one component.
    """
    terms = sorted(set(terminals))
    if not terms:
        raise ValueError("no terminals")
    root = terms[0] if root is None else root
    if root not in terms:
        raise ValueError(f"root {root} is not a terminal")
    if len(terms) == 1:
        return RootedTree(root, frozenset())

    dist, pred, owner = voronoi_regions(wg, terms)
    indptr, indices = wg.topology.csr()
    src = np.repeat(np.arange(wg.n, dtype=np.int64), np.diff(indptr))
    dst = indices.astype(np.int64)
    w = wg.data
    mask = (src < dst) & np.isfinite(w) & (owner[src] >= 0) & (owner[dst] >= 0)
    mask &= owner[src] != owner[dst]
    src, dst, w = src[mask], dst[mask], w[mask]
    cost = dist[src] + w + dist[dst]
    a = np.minimum(owner[src], owner[dst])
    b = np.maximum(owner[src], owner[dst])
    # cheapest boundary edge per terminal pair; ties by edge endpoints
    order = np.lexsort((dst, src, cost, b, a))
    a, b, cost, src, dst = a[order], b[order], cost[order], src[order], dst[order]
    first = np.ones(len(a), dtype=bool)
    first[1:] = (a[1:] != a[:-1]) | (b[1:] != b[:-1])
    pair_edge = {}
    aux = []
    for i in np.flatnonzero(first):
        key = (int(a[i]), int(b[i]))
        pair_edge[key] = (int(src[i]), int(dst[i]))
        aux.append((float(cost[i]), key[0], key[1]))

    aux_tree = kruskal(aux)
    if len(aux_tree) != len(terms) - 1:
        raise InfeasibleError("terminals lie in different components")

    expanded = set()
    for _, s, t in aux_tree:
        u, v = pair_edge[(s, t)]
        expanded.add((min(u, v), max(u, v)))
        for x, y in _walk_to_owner(u, pred) + _walk_to_owner(v, pred):
            expanded.add((min(x, y), max(x, y)))
    spanning = kruskal((wg.weight(u, v), u, v) for u, v in expanded)
    edges = prune_leaves(((u, v) for _, u, v in spanning), terms)
    return RootedTree.build(root, edges)


def _prim_weight(wg: WeightedGraph, vertices: Sequence[int]) -> tuple[float, list[tuple[int, int]]]:
    vs = set(vertices)
    start = min(vs)
    indptr = wg.topology.csr()[0]
    seen = {start}
    heap = []
    tree = []
    total = 0.0

    def push(u):
        base = int(indptr[u])
        for i, v in enumerate(wg.topology.adj[u]):
            if v in vs and v not in seen:
                heapq.heappush(heap, (float(wg.data[base + i]), min(u, v), max(u, v), v))

    push(start)
    while heap and len(seen) < len(vs):
        w, a, b, v = heapq.heappop(heap)
        if v in seen:
            continue
        seen.add(v)
        total += w
        tree.append((a, b))
        push(v)
    if len(seen) < len(vs):
        return float("inf"), []
    return total, tree


def brute_force_steiner(wg: WeightedGraph, terminals: Iterable[int], max_free: int = 20) -> RootedTree:
    """Exact minimum Steiner tree by enumerating every vertex superset.

    Each candidate set ``S`` is scored by the minimum spanning tree weight of
    ``wg[S]`` (Prim); ties go to the smaller, then lexicographically smaller
    set. Refuses instances with more than ``max_free`` non-terminals.
    """
    terms = sorted(set(terminals))
    free = [v for v in range(wg.n) if v not in set(terms)]
    if len(free) > max_free:
        raise InstanceTooLargeError(f"{len(free)} non-terminal vertices exceeds limit {max_free}")
    best = None
    for k in range(len(free) + 1):
        for extra in itertools.combinations(free, k):
            s = sorted(terms + list(extra))
            weight, tree = _prim_weight(wg, s)
            if weight == float("inf"):
                continue
            key = (weight, len(s), s)
            if best is None or key < best[0]:
                best = (key, tree)
    if best is None:
        raise InfeasibleError("terminals lie in different components")
    return RootedTree.build(terms[0], best[1])


def steiner_baseline_st(g: Graph, q: QuerySet) -> Connector:
    """The ``st`` baseline: Mehlhorn on unit weights, scored as an induced subgraph."""
    tree = mehlhorn_steiner(WeightedGraph.unit(g), q.vertices)
    return Connector.from_vertices(g, tree.vertices)
