"""Command-line entry point: ``wienerconn <subcommand> ...``.

Exit status is 0 on success, 1 on usage or input errors and 2 when the
query has no connector (vertices in different components).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .bench import (
    METHODS,
    Workload,
    WorkloadSpec,
    generate_workload,
    graph_stats,
    records_csv,
    records_json,
    run_bench,
    summarize,
)
from .connector import AlgorithmConfig, LAMBDA_POLICIES, local_prune, wiener_steiner
from .errors import InfeasibleError, WienerConnError
from .exact import DEFAULT_BUDGET, brute_force_connector
from .generators import generate_synthetic
from .io import connector_json, export_dot, read_graph, write_edge_list
from .ip import export_flow_ip, export_tree_ip
from .metrics import QuerySet, make_query

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _cycles(text: str):
    if text == "none":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--cycles takes 'none' or a length >= 3") from None
    if value < 3:
        raise argparse.ArgumentTypeError("--cycles takes 'none' or a length >= 3")
    return value


def _add_graph_args(p):
    p.add_argument("--graph", required=True, help="graph file")
    p.add_argument("--format", choices=("edgelist", "stp"), default="edgelist")


def _add_query_arg(p):
    p.add_argument("--query", type=_int_list, help="comma-separated 0-based vertex ids "
                   "(defaults to the STP terminals)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wienerconn", description="Minimum Wiener connectors.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("query", help="approximate connector for one query set")
    _add_graph_args(p)
    _add_query_arg(p)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--lambda-policy", choices=LAMBDA_POLICIES, default="union")
    p.add_argument("--prune", action="store_true", help="run the local pruning pass afterwards")
    p.add_argument("--out", choices=("json", "dot"), default="json")
    p.add_argument("--seed", type=int, default=0, help="accepted for interface symmetry; the algorithm is deterministic")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("exact", help="exact connector by subset enumeration")
    _add_graph_args(p)
    _add_query_arg(p)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("bench", help="run methods over a generated workload")
    _add_graph_args(p)
    p.add_argument("--dataset", help="dataset label (defaults to the file stem)")
    p.add_argument("--sizes", type=_int_list, help="query sizes, e.g. 3,5,10")
    p.add_argument("--avg-distance", type=float, help="target mean pairwise distance")
    p.add_argument("--repetitions", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--methods", default="ws-q,st", help=f"comma-separated subset of {','.join(METHODS)}")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="size guard for the exact method")
    p.add_argument("--out", required=True, help="output path; .json writes JSON, anything else CSV")
    p.add_argument("--summary", help="also write the summary JSON here")
    p.add_argument("--timing", action="store_true", help="include wall-clock times (breaks byte-stability)")

    p = sub.add_parser("export-ip", help="write the flow or tree integer program as an LP file")
    _add_graph_args(p)
    _add_query_arg(p)
    p.add_argument("--kind", choices=("flow", "tree"), default="tree")
    p.add_argument("--cycles", type=_cycles, default=None, help="'none' or max cycle length (tree model)")
    p.add_argument("--out", default="-", help="LP file path, '-' for stdout")

    p = sub.add_parser("gen", help="generate a synthetic graph as an edge list")
    p.add_argument("--model", choices=("er", "pl", "ER", "PL"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")

    p = sub.add_parser("stats", help="graph summary")
    _add_graph_args(p)
    return parser


def _emit(text: str, out: str = "-") -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _load(args):
    g, terminals = read_graph(args.graph, args.format)
    return g, terminals


def _query(args, g, terminals) -> QuerySet:
    vertices = args.query if args.query else (terminals.vertices if terminals else None)
    if not vertices:
        raise _UsageError("--query is required for edge-list graphs")
    return make_query(g, vertices)


def _cmd_query(args) -> None:
    g, terms = _load(args)
    q = _query(args, g, terms)
    cfg = AlgorithmConfig(beta=args.beta, lambda_range_policy=args.lambda_policy, workers=args.workers)
    c = wiener_steiner(g, q, cfg)
    if args.prune:
        c = local_prune(g, c, q)
    if args.out == "dot":
        _emit(export_dot(g, q.vertices, c))
    else:
        _emit(connector_json(c, query=list(q.vertices), method="ws-q") + "\n")


def _cmd_exact(args) -> None:
    g, terms = _load(args)
    q = _query(args, g, terms)
    c = brute_force_connector(g, q, args.budget)
    _emit(connector_json(c, query=list(q.vertices), method="exact") + "\n")


def _cmd_bench(args) -> None:
    g, terms = _load(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise _UsageError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
    if args.sizes:
        spec = WorkloadSpec(tuple(args.sizes), args.avg_distance, args.repetitions, args.seed)
        workload = generate_workload(g, spec)
    elif terms is not None:
        workload = Workload([terms])
    else:
        raise _UsageError("--sizes is required for edge-list graphs")
    dataset = args.dataset or Path(args.graph).stem
    cfg = AlgorithmConfig(beta=args.beta)
    records, summary = run_bench(g, workload, methods, cfg, dataset, exact_budget=args.budget)
    if args.timing:
        summary = summarize(records, bc_skipped=summary["groups"] and summary["groups"][0]["bc"] == "skipped",
                            include_timing=True)
    if args.out.endswith(".json"):
        _emit(records_json(records, summary, args.timing), args.out)
    else:
        _emit(records_csv(records, args.timing), args.out)
    if args.summary:
        _emit(json.dumps(summary, indent=2, sort_keys=True) + "\n", args.summary)


def _cmd_export_ip(args) -> None:
    g, terms = _load(args)
    q = _query(args, g, terms)
    if args.kind == "flow":
        if args.cycles is not None:
            raise _UsageError("--cycles applies to the tree model only")
        model = export_flow_ip(g, q)
    else:
        model = export_tree_ip(g, q, args.cycles)
    _emit(model.to_lp(), args.out)


def _cmd_gen(args) -> None:
    g = generate_synthetic(args.model, args.n, args.m, args.seed)
    _emit(write_edge_list(g), args.out)


def _cmd_stats(args) -> None:
    g, _ = _load(args)
    _emit(json.dumps(graph_stats(g), sort_keys=True) + "\n")


_COMMANDS = {
    "query": _cmd_query,
    "exact": _cmd_exact,
    "bench": _cmd_bench,
    "export-ip": _cmd_export_ip,
    "gen": _cmd_gen,
    "stats": _cmd_stats,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"wienerconn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleError as exc:
        print(f"wienerconn: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (WienerConnError, ValueError, OSError) as exc:
        print(f"wienerconn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
