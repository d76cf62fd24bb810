"""Seeded synthetic graphs: Erdos-Renyi G(n, m) and preferential attachment."""

from __future__ import annotations

import math
import random

from .graph import Graph


def _pair_from_index(k: int, n: int) -> tuple[int, int]:
    # rows u hold pairs (u, u+1..n-1); row u starts at u*n - u*(u+1)/2
    u = int(n - 2 - math.floor(math.sqrt(-8 * k + 4 * n * (n - 1) - 7) / 2.0 - 0.5))
    start = u * n - u * (u + 1) // 2
    while start > k:
        u -= 1
        start = u * n - u * (u + 1) // 2
    while start + (n - u - 1) <= k:
        start += n - u - 1
        u += 1
    return u, u + 1 + (k - start)


def erdos_renyi(n: int, m: int, seed: int) -> Graph:
    """``m`` distinct edges drawn uniformly without replacement."""
    total = n * (n - 1) // 2
    if m > total:
        raise ValueError(f"cannot place {m} edges on {n} vertices (max {total})")
    rng = random.Random(seed)
    picks = rng.sample(range(total), m)
    return Graph.from_edges(n, (_pair_from_index(k, n) for k in picks))


def preferential_attachment(n: int, per_node: int, seed: int) -> Graph:
    """Barabasi-Albert style growth; each new vertex links to ``per_node`` targets.

    Targets are drawn with probability proportional to current degree. The
    first ``per_node`` vertices start as a seed set with no edges, so the
    first newcomer links to all of them.
    """
    if per_node < 1 or per_node >= n:
        raise ValueError("need 1 <= per_node < n")
    rng = random.Random(seed)
    edges = []
    repeated: list[int] = []
    targets = list(range(per_node))
    for v in range(per_node, n):
        for t in targets:
            edges.append((v, t))
        repeated.extend(targets)
        repeated.extend([v] * per_node)
        chosen: set[int] = set()
        while len(chosen) < per_node:
            chosen.add(rng.choice(repeated))
        targets = sorted(chosen)
    return Graph.from_edges(n, edges)


def generate_synthetic(model: str, n: int, target_m: int, seed: int) -> Graph:
    """Seeded ER or PL graph; connectivity is not guaranteed.

    For ``PL`` the per-vertex out-degree is ``ceil(target_m / n)``, so the
    edge count is only approximately ``target_m``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if target_m > n * (n - 1) // 2:
        raise ValueError(f"target_m={target_m} exceeds C({n}, 2)")
    model = model.upper()
    if model == "ER":
        return erdos_renyi(n, target_m, seed)
    if model == "PL":
        return preferential_attachment(n, max(1, math.ceil(target_m / n)), seed)
    raise ValueError(f"unknown model {model!r}")
