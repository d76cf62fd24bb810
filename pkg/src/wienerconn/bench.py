"""Query workloads and the benchmark runner behind ``wienerconn bench``.

CSV columns, in order: ``dataset, method, query_id, query_size, query,
status, size, density, bc, wiener`` and, only when timing is requested,
``time_s``. Wall-clock time is left out by default so that two runs with the
same seed produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import random
import statistics
import time
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .connector import AlgorithmConfig, wiener_steiner
from .errors import WienerConnError
from .exact import DEFAULT_BUDGET, brute_force_connector
from .graph import Graph, bfs_distances, connected_components
from .metrics import QuerySet, average_betweenness, brandes_betweenness, make_query
from .steiner import steiner_baseline_st

METHODS = ("ws-q", "st", "exact")
CSV_COLUMNS = ["dataset", "method", "query_id", "query_size", "query", "status", "size", "density", "bc", "wiener"]
BC_EDGE_LIMIT = 100_000


class WorkloadError(WienerConnError):
    """The requested query size / distance combination could not be sampled."""


@dataclass(frozen=True)
class WorkloadSpec:
    sizes: tuple[int, ...]
    target_avg_distance: Optional[float] = None
    repetitions: int = 5
    seed: int = 0
    tolerance: float = 0.5
    max_retries: int = 1000


@dataclass
class Workload:
    queries: list[QuerySet]
    spec: Optional[WorkloadSpec] = None


def giant_component(g: Graph) -> list[int]:
    comps = connected_components(g)
    return max(comps, key=lambda c: (len(c), -c[0])) if comps else []


def mean_pairwise_distance(g: Graph, vertices: Sequence[int]) -> float:
    """Mean graph distance over unordered pairs of ``vertices``."""
    vs = list(vertices)
    if len(vs) < 2:
        return 0.0
    total = 0
    for i, s in enumerate(vs[:-1]):
        dist = bfs_distances(g.adj, s)
        total += sum(dist[t] for t in vs[i + 1 :])
    return total / (len(vs) * (len(vs) - 1) / 2)


def _sample_with_distance(g, comp_arr, rng, k, target, tol, max_retries):
    for _ in range(max_retries):
        first = int(comp_arr[rng.randrange(len(comp_arr))])
        chosen = [first]
        sums = np.asarray(bfs_distances(g.adj, first), dtype=np.float64)[comp_arr]
        pair_total = 0.0
        ok = True
        for c in range(1, k):
            new_pairs = (c + 1) * c / 2
            means = (pair_total + sums) / new_pairs
            fit = np.abs(means - target) <= tol
            fit[np.isin(comp_arr, chosen)] = False
            options = np.flatnonzero(fit)
            if len(options) == 0:
                ok = False
                break
            idx = int(options[rng.randrange(len(options))])
            v = int(comp_arr[idx])
            pair_total += float(sums[idx])
            chosen.append(v)
            sums = sums + np.asarray(bfs_distances(g.adj, v), dtype=np.float64)[comp_arr]
        if ok and abs(mean_pairwise_distance(g, chosen) - target) <= tol:
            return chosen
    raise WorkloadError(
        f"no query of size {k} with mean distance {target}+-{tol} after {max_retries} attempts"
    )


def generate_workload(g: Graph, spec: WorkloadSpec) -> Workload:
    """Random query sets of controlled size and mean pairwise distance.

    Every query lies in the giant component. With a distance target, the
    first vertex is uniform and each further vertex is drawn uniformly among
    those keeping the running mean pairwise distance within ``tolerance`` of
    the target; an attempt that runs out of options restarts. Without a
    target the vertices are a uniform sample.
    """
    if any(k < 1 for k in spec.sizes):
        raise ValueError("query sizes must be >= 1")
    if spec.target_avg_distance is not None and spec.target_avg_distance < 1:
        raise ValueError("target average distance must be >= 1")
    comp = giant_component(g)
    comp_arr = np.asarray(comp, dtype=np.int64)
    rng = random.Random(spec.seed)
    queries = []
    for k in spec.sizes:
        if k > len(comp):
            raise WorkloadError(f"query size {k} exceeds giant component size {len(comp)}")
        for _ in range(spec.repetitions):
            if spec.target_avg_distance is None or k == 1:
                picked = rng.sample(comp, k)
            else:
                picked = _sample_with_distance(
                    g, comp_arr, rng, k, spec.target_avg_distance, spec.tolerance, spec.max_retries
                )
            queries.append(QuerySet(tuple(sorted(picked))))
    return Workload(queries, spec)


@dataclass
class BenchRecord:
    dataset: str
    method: str
    query_id: int
    query: tuple[int, ...]
    vertices: Optional[tuple[int, ...]] = None
    size: Optional[int] = None
    density: Optional[float] = None
    bc: Optional[float] = None
    wiener: Optional[int] = None
    time_s: float = 0.0
    status: str = "ok"

    def row(self, include_timing: bool = False) -> dict:
        out = {
            "dataset": self.dataset,
            "method": self.method,
            "query_id": self.query_id,
            "query_size": len(self.query),
            "query": " ".join(map(str, self.query)),
            "status": self.status,
            "size": self.size,
            "density": None if self.density is None else round(self.density, 10),
            "bc": None if self.bc is None else round(self.bc, 10),
            "wiener": self.wiener,
        }
        if include_timing:
            out["time_s"] = round(self.time_s, 6)
        return out


def _solve(g, q, method, cfg, budget):
    if method == "ws-q":
        return wiener_steiner(g, q, cfg)
    if method == "st":
        return steiner_baseline_st(g, q)
    if method == "exact":
        return brute_force_connector(g, q, budget)
    raise ValueError(f"unknown method {method!r}")


def run_bench(
    g: Graph,
    workload: Workload,
    methods: Iterable[str] = ("ws-q", "st"),
    cfg: Optional[AlgorithmConfig] = None,
    dataset: str = "graph",
    exact_budget: int = DEFAULT_BUDGET,
    bc_edge_limit: int = BC_EDGE_LIMIT,
) -> tuple[list[BenchRecord], dict]:
    """Run every method on every query; failures are recorded, not raised."""
    methods = list(methods)
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
    cfg = cfg or AlgorithmConfig()
    bc = brandes_betweenness(g) if g.m <= bc_edge_limit else None
    records = []
    for qid, q in enumerate(workload.queries):
        for method in methods:
            rec = BenchRecord(dataset, method, qid, q.vertices)
            t0 = time.perf_counter()
            try:
                c = _solve(g, make_query(g, q.vertices), method, cfg, exact_budget)
            except WienerConnError as exc:
                rec.status = f"error: {type(exc).__name__}: {exc}"
            else:
                rec.vertices = c.vertices
                rec.size = c.size
                rec.density = c.density
                rec.wiener = c.wiener
                rec.bc = average_betweenness(bc, c.vertices) if bc is not None else None
            rec.time_s = time.perf_counter() - t0
            records.append(rec)
    records.sort(key=lambda r: (r.dataset, r.method, r.query_id))
    return records, summarize(records, bc_skipped=bc is None)


def _mean(xs):
    xs = [x for x in xs if x is not None]
    return statistics.fmean(xs) if xs else None


def summarize(records: Sequence[BenchRecord], bc_skipped: bool = False, include_timing: bool = False) -> dict:
    """Per (dataset, method, |Q|) averages plus ws-q versus st comparisons."""
    groups: dict[tuple, list[BenchRecord]] = {}
    for r in records:
        groups.setdefault((r.dataset, r.method, len(r.query)), []).append(r)
    rows = []
    for (ds, method, k), recs in sorted(groups.items()):
        ok = [r for r in recs if r.status == "ok"]
        row = {
            "dataset": ds,
            "method": method,
            "query_size": k,
            "queries": len(recs),
            "failed": len(recs) - len(ok),
            "size": _mean(r.size for r in ok),
            "density": _mean(r.density for r in ok),
            "bc": "skipped" if bc_skipped else _mean(r.bc for r in ok),
            "wiener": _mean(r.wiener for r in ok),
        }
        if include_timing:
            row["time_s"] = _mean(r.time_s for r in recs)
        rows.append(row)

    comparisons = []
    by_key = {(r.dataset, r.method, r.query_id): r for r in records}
    datasets = sorted({r.dataset for r in records})
    for ds in datasets:
        pairs = []
        for (d, m, qid), r in sorted(by_key.items()):
            if d != ds or m != "ws-q":
                continue
            st = by_key.get((ds, "st", qid))
            if st is not None and r.status == st.status == "ok":
                pairs.append((r, st))
        if not pairs:
            continue
        comparisons.append({
            "dataset": ds,
            "queries": len(pairs),
            "mean_wiener_wsq": _mean(a.wiener for a, _ in pairs),
            "mean_wiener_st": _mean(b.wiener for _, b in pairs),
            "mean_size_wsq": _mean(a.size for a, _ in pairs),
            "mean_size_st": _mean(b.size for _, b in pairs),
            "wsq_mean_wiener_le_st": _mean(a.wiener for a, _ in pairs) <= _mean(b.wiener for _, b in pairs),
            "wsq_mean_size_le_st": _mean(a.size for a, _ in pairs) <= _mean(b.size for _, b in pairs),
            "size_ratio_st_over_wsq": sorted(b.size / a.size for a, b in pairs),
            "wiener_ratio_st_over_wsq": sorted(
                b.wiener / a.wiener if a.wiener else 1.0 for a, b in pairs
            ),
        })
    return {"schema": 1, "groups": rows, "ws_q_vs_st": comparisons}


def records_csv(records: Sequence[BenchRecord], include_timing: bool = False) -> str:
    buf = io.StringIO()
    cols = CSV_COLUMNS + (["time_s"] if include_timing else [])
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for r in records:
        row = r.row(include_timing)
        writer.writerow({k: "" if v is None else v for k, v in row.items()})
    return buf.getvalue()


def records_json(records: Sequence[BenchRecord], summary: dict, include_timing: bool = False) -> str:
    payload = {
        "schema": 1,
        "records": [
            dict(r.row(include_timing), vertices=list(r.vertices) if r.vertices else None)
            for r in records
        ],
        "summary": summary,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def graph_stats(g: Graph) -> dict:
    """Size, density and degree summary of a graph."""
    degrees = [len(row) for row in g.adj]
    comps = connected_components(g)
    n = g.n
    return {
        "n": n,
        "m": g.m,
        "density": g.m / (n * (n - 1) / 2) if n > 1 else 0.0,
        "avg_degree": 2 * g.m / n if n else 0.0,
        "max_degree": max(degrees, default=0),
        "min_degree": min(degrees, default=0),
        "median_degree": statistics.median(degrees) if degrees else 0,
        "components": len(comps),
        "largest_component": max((len(c) for c in comps), default=0),
    }
