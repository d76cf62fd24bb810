"""Approximate minimum Wiener connectors.

The pipeline guesses a root ``r`` among the query vertices and a balance
parameter ``lam``, reweights every edge as
``lam + max(d(r, u), d(r, v)) / lam``, solves a Steiner tree on the reweighted
graph, grafts BFS shortcuts into the tree so that no vertex ends up much
farther from ``r`` than in the input graph, and keeps the best vertex set
over all guesses.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

from .errors import DisconnectedError
from .graph import INF, DistanceMap, Graph, WeightedGraph, bfs_sssp, component_of, is_connected_subset
from .metrics import Connector, QuerySet, make_query, root_cost_A, wiener_index
from .steiner import RootedTree, mehlhorn_steiner

ALPHA = 1 + math.sqrt(2)

LAMBDA_POLICIES = ("paper_lemma", "algorithm1_literal", "union")


def approximation_factor(beta: float) -> float:
    """Worst-case ratio to the optimum guaranteed for a given ``beta``."""
    return 792 * (1 + beta) ** 2


@dataclass(frozen=True)
class AlgorithmConfig:
    """Knobs of :func:`wiener_steiner`.

    ``lambda_range_policy`` picks the balance grid: ``paper_lemma`` covers
    ``[1/sqrt(2), sqrt(|V|)]`` with ratio ``1 + beta``; ``algorithm1_literal``
    uses ``(1 + beta)**t`` for ``t = 1 .. ceil(log_{1+beta} |V|)``; ``union``
    takes both. Candidates with at most ``exact_selection_size_cap`` vertices
    are ranked by their exact Wiener index, larger ones by ``A(S, r)``.
    """

    beta: float = 1.0
    lambda_range_policy: str = "union"
    exact_selection_size_cap: int = 1000
    roots: str = "query"
    workers: int = 1
    alpha_threshold: float = field(default=ALPHA, init=False)

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.lambda_range_policy not in LAMBDA_POLICIES:
            raise ValueError(f"unknown lambda policy {self.lambda_range_policy!r}")
        if self.roots not in ("query", "all"):
            raise ValueError("roots must be 'query' or 'all'")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class CandidateSolution:
    vertices: tuple[int, ...]
    root: int
    lam: float
    cost_A: int
    cost_W: Optional[int] = None


def _dist_sum(vertices: Iterable[int], dist_r: DistanceMap) -> int:
    total = 0
    for u in vertices:
        d = dist_r.dist[u]
        if d == INF:
            raise DisconnectedError(f"vertex {u} unreachable from root {dist_r.source}")
        total += d
    return total


def cost_A_tilde(g: Graph, vertices: Iterable[int], r: int, dist_r: DistanceMap) -> int:
    """``|S| * sum_u d_G(u, r)`` with distances taken in the whole graph."""
    s = set(vertices)
    if r not in s:
        raise ValueError(f"root {r} not in vertex set")
    if dist_r.source != r:
        raise ValueError("distance map is not rooted at r")
    return len(s) * _dist_sum(s, dist_r)


def cost_B(vertices: Iterable[int], r: int, lam: float, dist_r: DistanceMap) -> float:
    """Linearised objective ``lam * |S| + sum_u d_G(r, u) / lam``."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    s = set(vertices)
    if r not in s:
        raise ValueError(f"root {r} not in vertex set")
    return lam * len(s) + _dist_sum(s, dist_r) / lam


def build_rooted_weights(g: Graph, dist_r: DistanceMap, lam: float) -> WeightedGraph:
    """Edge weights ``lam + max(d(r, u), d(r, v)) / lam``.

    Edges outside the component of the root get weight :data:`INF`.
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    indptr, indices = g.csr()
    d = np.asarray(dist_r.dist, dtype=np.float64)
    src = np.repeat(np.arange(g.n), np.diff(indptr))
    return WeightedGraph(g, lam + np.maximum(d[src], d[indices]) / lam)


def _exceeds(dist_estimate, bfs_dist) -> bool:
    # dist_estimate > (1 + sqrt 2) * bfs_dist, in exact integer arithmetic
    if dist_estimate == INF:
        return True
    gap = dist_estimate - bfs_dist
    return gap > 0 and gap * gap > 2 * bfs_dist * bfs_dist


def adjust_distances(g: Graph, tree: RootedTree, r: int, bfs_r: DistanceMap) -> RootedTree:
    """Graft BFS-tree paths from ``r`` into ``tree`` so root distances stay short.

    Walks the tree depth-first from ``r`` relaxing each tree edge on the way
    down and back up. Whenever the current distance estimate of a vertex
    exceeds ``(1 + sqrt 2)`` times its BFS distance, the BFS path to it is
    relaxed in from the nearest vertex whose estimate is already exact. The
    result keeps every input vertex, has at most ``(1 + sqrt 2)`` times as
    many vertices, and every vertex within ``(1 + sqrt 2)`` times its graph
    distance from ``r`` along the tree.

    ``bfs_r`` must be :func:`bfs_sssp` from ``r`` over ``g``.
    """
    if bfs_r.source != r:
        raise ValueError("BFS tree is not rooted at r")
    for u, v in tree.edges:
        if not g.has_edge(u, v):
            raise ValueError(f"tree edge ({u}, {v}) is not an edge of the graph")
    if r not in tree.vertices:
        raise ValueError(f"root {r} not in tree")

    d_bfs = bfs_r.dist
    p_bfs = bfs_r.parent
    kids = RootedTree(r, tree.edges).children()
    d = {r: 0}
    parent: dict[int, int] = {}

    def relax(u, v):
        du = d.get(u, INF)
        if d.get(v, INF) > du + 1:
            d[v] = du + 1
            parent[v] = u

    def add_path(u):
        chain = []
        x = u
        while d.get(x, INF) > d_bfs[x]:
            chain.append(x)
            x = p_bfs[x]
        for x in reversed(chain):
            relax(p_bfs[x], x)

    stack = [(r, iter(kids[r]))]
    while stack:
        u, it = stack[-1]
        v = next(it, None)
        if v is None:
            stack.pop()
            if stack:
                relax(u, stack[-1][0])
            continue
        relax(u, v)
        if _exceeds(d[v], d_bfs[v]):
            add_path(v)
        stack.append((v, iter(kids[v])))

    return RootedTree.build(r, ((v, p) for v, p in parent.items()))


def tree_root_distances(tree: RootedTree) -> dict[int, int]:
    adj = tree.adjacency()
    dist = {tree.root: 0}
    stack = [tree.root]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                stack.append(v)
    return dist


def adjustment_report(tree: RootedTree, adjusted: RootedTree, bfs_r: DistanceMap) -> dict[str, bool]:
    """Check the four guarantees of :func:`adjust_distances` exactly.

    Factors involving ``sqrt 2`` are compared in squared integer form.
    """
    before, after = tree.vertices, adjusted.vertices
    k, k2 = len(before), len(after)
    d_tree = tree_root_distances(adjusted)
    stretch_ok = True
    for v in after:
        gap = d_tree.get(v, INF) - bfs_r.dist[v]
        if gap == INF or (gap > 0 and gap * gap > 2 * bfs_r.dist[v] ** 2):
            stretch_ok = False
            break
    s_before = sum(bfs_r.dist[v] for v in before)
    s_after = sum(bfs_r.dist[v] for v in after)
    return {
        "is_tree": adjusted.is_tree() and len(d_tree) == k2,
        "superset": before <= after,
        "size": (k2 - k) ** 2 <= 2 * k * k,
        "stretch": stretch_ok,
        "distance_sum": s_after * s_after <= 2 * s_before * s_before,
    }


def lambda_grid(n: int, beta: float, policy: str = "union") -> list[float]:
    """Balance values tried for a graph on ``n`` vertices."""
    if policy not in LAMBDA_POLICIES:
        raise ValueError(f"unknown lambda policy {policy!r}")
    ratio = 1 + beta
    grid = set()
    if policy in ("paper_lemma", "union"):
        lam = 1 / math.sqrt(2)
        top = math.sqrt(max(n, 1))
        while True:
            grid.add(lam)
            if lam >= top:
                break
            lam *= ratio
    if policy in ("algorithm1_literal", "union"):
        t = 1
        while True:
            grid.add(ratio**t)
            if ratio**t >= n:
                break
            t += 1
    return sorted(grid)


def _root_candidates(g: Graph, terms: tuple[int, ...], r: int, lambdas: list[float]) -> list[CandidateSolution]:
    bfs_r = bfs_sssp(g, r)
    out = []
    steiner_terms = sorted(set(terms) | {r})
    for lam in lambdas:
        wg = build_rooted_weights(g, bfs_r, lam)
        tree = mehlhorn_steiner(wg, steiner_terms, root=r)
        adjusted = adjust_distances(g, tree, r, bfs_r)
        s = tuple(sorted(adjusted.vertices))
        out.append(CandidateSolution(s, r, lam, root_cost_A(g, s, r)))
    return out


def candidate_pool(g: Graph, q: QuerySet, cfg: AlgorithmConfig) -> list[CandidateSolution]:
    """Every (root, lambda) candidate, in root then lambda order."""
    if cfg.roots == "query":
        roots = list(q.vertices)
    else:
        roots = component_of(g, q.vertices[0])
    lambdas = lambda_grid(g.n, cfg.beta, cfg.lambda_range_policy)
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(lambda r: _root_candidates(g, q.vertices, r, lambdas), roots))
    else:
        parts = [_root_candidates(g, q.vertices, r, lambdas) for r in roots]
    return [c for part in parts for c in part]


def select_candidate(g: Graph, pool: list[CandidateSolution], cap: int) -> tuple[tuple[int, ...], CandidateSolution, int]:
    """Best vertex set in the pool.

    Duplicate vertex sets are scored once. Small sets are keyed on their
    Wiener index, sets above ``cap`` on their smallest ``A(S, r)``; the key
    never underestimates the Wiener index, so both kinds compare safely.
    Ties go to the smaller, then lexicographically smaller, set.
    """
    by_set: dict[tuple[int, ...], list[CandidateSolution]] = {}
    for c in pool:
        by_set.setdefault(c.vertices, []).append(c)
    best = None
    for s, cands in by_set.items():
        rep = min(cands, key=lambda c: (c.cost_A, c.root, c.lam))
        key = wiener_index(g, s) if len(s) <= cap else rep.cost_A
        ranked = (key, len(s), s)
        if best is None or ranked < best[0]:
            best = (ranked, rep)
    (key, _, s), rep = best
    return s, rep, key


def wiener_steiner(g: Graph, query: Union[QuerySet, Iterable[int]], cfg: Optional[AlgorithmConfig] = None) -> Connector:
    """Approximate minimum Wiener connector for ``query``.

    The result is the subgraph induced by the chosen vertex set. Its Wiener
    index is within ``approximation_factor(cfg.beta)`` of the optimum.

    Raises
    ------
    InfeasibleError
        If the query vertices span several components.
    """
    cfg = cfg or AlgorithmConfig()
    q = make_query(g, query.vertices if isinstance(query, QuerySet) else query)
    if len(q) == 1:
        return Connector.from_vertices(g, q.vertices, root=q.vertices[0])
    pool = candidate_pool(g, q, cfg)
    s, rep, _ = select_candidate(g, pool, cfg.exact_selection_size_cap)
    c = Connector.from_vertices(g, s, root=rep.root)
    c.extra.update(lam=rep.lam, candidates=len(pool), distinct=len({p.vertices for p in pool}))
    return c


def shortest_path_connector(g: Graph, query: Union[QuerySet, Iterable[int]]) -> Connector:
    """Optimal connector for two query vertices: one BFS shortest path.

    The path follows BFS parents from the smaller terminal, each vertex's
    parent being its smallest-id neighbour one layer closer.
    """
    q = make_query(g, query.vertices if isinstance(query, QuerySet) else query)
    if len(q) != 2:
        raise ValueError("shortest_path_connector needs exactly two query vertices")
    s, t = q.vertices
    return Connector.from_vertices(g, bfs_sssp(g, s).path_to(t))


def local_prune(g: Graph, c: Connector, query: Union[QuerySet, Iterable[int]]) -> Connector:
    """Drop non-query vertices while that keeps ``G[S]`` connected and lowers W.

    Each round removes the vertex giving the largest decrease (smallest id
    on ties) until no removal helps.
    """
    q = set(query.vertices if isinstance(query, QuerySet) else query)
    s = set(c.vertices)
    w = c.wiener
    while True:
        best = None
        for v in sorted(s - q):
            rest = s - {v}
            if not is_connected_subset(g, rest):
                continue
            w2 = wiener_index(g, rest)
            if w2 < w and (best is None or w2 < best[0]):
                best = (w2, v)
        if best is None:
            break
        w, v = best
        s.discard(v)
    if s == set(c.vertices):
        return c
    return Connector.from_vertices(g, s, root=c.root if c.root in s else None)
