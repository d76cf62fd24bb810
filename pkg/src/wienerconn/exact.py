"""Exact minimum Wiener connector by subset enumeration (small instances only)."""

from __future__ import annotations

import itertools
from typing import Iterable, Union

from .errors import InstanceTooLargeError
from .graph import Graph, component_of
from .metrics import Connector, QuerySet, make_query

DEFAULT_BUDGET = 20


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _connected(mask: int, adj: list[int]) -> bool:
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        for v in _bits(frontier):
            nxt |= adj[v]
        frontier = nxt & mask & ~seen
        seen |= frontier
    return seen == mask


def _wiener(mask: int, adj: list[int]) -> int:
    total = 0
    for s in _bits(mask):
        seen = frontier = 1 << s
        level = 0
        while frontier:
            level += 1
            nxt = 0
            for v in _bits(frontier):
                nxt |= adj[v]
            frontier = nxt & mask & ~seen
            seen |= frontier
            total += level * bin(frontier).count("1")
    return total // 2


def brute_force_connector(
    g: Graph, query: Union[QuerySet, Iterable[int]], budget: int = DEFAULT_BUDGET
) -> Connector:
    """Minimum Wiener connector over every vertex superset of the query.

    Only vertices in the query's component can matter. Candidate sets are
    scanned by increasing size; a set is skipped when
    ``2 * C(k, 2) - |E[S]|`` (every non-adjacent pair is at distance at
    least 2) already exceeds the best index found, and the scan stops once
    ``C(k, 2)`` does. Ties go to ``(W, |S|, sorted S)``.

    Raises
    ------
    InstanceTooLargeError
        If more than ``budget`` non-query vertices would have to be enumerated.
    """
    q = make_query(g, query.vertices if isinstance(query, QuerySet) else query)
    comp = component_of(g, q.vertices[0])
    qs = set(q.vertices)
    free = [v for v in comp if v not in qs]
    if len(free) > budget:
        raise InstanceTooLargeError(
            f"{len(free)} candidate vertices outside the query exceeds budget {budget}"
        )
    local = {v: i for i, v in enumerate(comp)}
    adj = [0] * len(comp)
    for v in comp:
        for w in g.adj[v]:
            adj[local[v]] |= 1 << local[w]
    base = 0
    for v in q.vertices:
        base |= 1 << local[v]

    best = None  # (W, size, sorted vertices)
    for k in range(len(free) + 1):
        size = len(qs) + k
        if best is not None and size * (size - 1) // 2 > best[0]:
            break
        for extra in itertools.combinations(free, k):
            mask = base
            for v in extra:
                mask |= 1 << local[v]
            if not _connected(mask, adj):
                continue
            if best is not None:
                edges = sum(bin(adj[i] & mask).count("1") for i in _bits(mask)) // 2
                if size * (size - 1) - edges > best[0]:
                    continue
            w = _wiener(mask, adj)
            key = (w, size, tuple(sorted(qs.union(extra))))
            if best is None or key < best:
                best = key
    return Connector.from_vertices(g, best[2])
