"""Readers for edge lists and SteinLib STP files, DOT and JSON writers."""

from __future__ import annotations

import json
import logging
import re
from pathlib import Path
from typing import Iterable, Optional, TextIO, Union

from .errors import ParseError
from .graph import Graph, WeightedGraph
from .metrics import Connector, QuerySet

log = logging.getLogger(__name__)

_HEADER_N = re.compile(r"^[#%]\s*(?:nodes|vertices|n)\s*[:=]?\s*(\d+)\s*$", re.IGNORECASE)


def _lines(text: Union[str, TextIO]) -> Iterable[str]:
    if isinstance(text, str):
        return text.splitlines()
    return text


def parse_edge_list(text: Union[str, TextIO]) -> Graph:
    """Parse whitespace-separated ``u v`` pairs of 0-based ids.

    Lines starting with ``#`` or ``%`` are comments, except a header such as
    ``# nodes: 40`` which fixes the vertex count (useful for isolated
    trailing vertices). Extra columns after the first two are ignored.
    """
    edges = []
    max_id = -1
    n_header: Optional[int] = None
    for lineno, raw in enumerate(_lines(text), 1):
        line = raw.strip()
        if not line:
            continue
        if line[0] in "#%":
            m = _HEADER_N.match(line)
            if m:
                n_header = int(m.group(1))
            continue
        tok = line.split()
        if len(tok) < 2:
            raise ParseError(f"expected two vertex ids, got {line!r}", line=lineno)
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise ParseError(f"non-integer vertex id in {line!r}", line=lineno) from None
        if u < 0 or v < 0:
            raise ParseError(f"negative vertex id in {line!r}", line=lineno)
        edges.append((u, v))
        max_id = max(max_id, u, v)
    n = max_id + 1
    if n_header is not None:
        if n_header < n:
            raise ParseError(f"header declares {n_header} vertices but ids reach {max_id}")
        n = n_header
    g = Graph.from_edges(n, edges)
    if g.dropped_self_loops or g.dropped_duplicates:
        log.warning(
            "edge list normalised: %d self-loops, %d duplicate edges dropped",
            g.dropped_self_loops,
            g.dropped_duplicates,
        )
    return g


def _number(tok: str, lineno: int, section: str):
    try:
        x = float(tok)
    except ValueError:
        raise ParseError(f"bad number {tok!r}", line=lineno, section=section) from None
    return int(x) if x.is_integer() else x


def parse_stp(text: Union[str, TextIO]) -> tuple[Union[Graph, WeightedGraph], QuerySet]:
    """Parse the Graph and Terminals sections of a SteinLib STP file.

    Ids are shifted from 1-based to 0-based. A plain :class:`Graph` is
    returned when every edge weight equals 1, otherwise a
    :class:`WeightedGraph`. Terminal co-connectivity is not checked here.
    """
    section = None
    seen = set()
    n = None
    declared_m = None
    declared_t = None
    edges = []
    terminals = []
    for lineno, raw in enumerate(_lines(text), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        key = tok[0].upper()
        if key == "SECTION":
            if len(tok) < 2:
                raise ParseError("SECTION without a name", line=lineno)
            section = tok[1].capitalize()
            seen.add(section)
            continue
        if key == "END":
            section = None
            continue
        if key == "EOF":
            break
        if section == "Graph":
            if key == "NODES":
                n = int(_number(tok[1], lineno, section))
            elif key == "EDGES":
                declared_m = int(_number(tok[1], lineno, section))
            elif key in ("E", "A"):
                if n is None:
                    raise ParseError("edge before Nodes declaration", line=lineno, section=section)
                if len(tok) < 3:
                    raise ParseError(f"short edge line {line!r}", line=lineno, section=section)
                u = int(_number(tok[1], lineno, section))
                v = int(_number(tok[2], lineno, section))
                w = _number(tok[3], lineno, section) if len(tok) > 3 else 1
                for x in (u, v):
                    if not 1 <= x <= n:
                        raise ParseError(f"vertex id {x} out of range 1..{n}", line=lineno, section=section)
                if not w > 0:
                    raise ParseError(f"non-positive weight {w}", line=lineno, section=section)
                edges.append((u - 1, v - 1, w))
        elif section == "Terminals":
            if key == "TERMINALS":
                declared_t = int(_number(tok[1], lineno, section))
            elif key == "T":
                if n is None:
                    raise ParseError("terminals before graph", line=lineno, section=section)
                t = int(_number(tok[1], lineno, section))
                if not 1 <= t <= n:
                    raise ParseError(f"terminal {t} out of range 1..{n}", line=lineno, section=section)
                terminals.append(t - 1)
        # other sections (Comment, Coordinates, ...) are skipped
    for required in ("Graph", "Terminals"):
        if required not in seen:
            raise ParseError("missing section", section=required)
    if n is None:
        raise ParseError("missing Nodes declaration", section="Graph")
    if declared_m is not None and declared_m != len(edges):
        log.warning("STP declares %d edges, found %d", declared_m, len(edges))
    if declared_t is not None and declared_t != len(terminals):
        log.warning("STP declares %d terminals, found %d", declared_t, len(terminals))
    if not terminals:
        raise ParseError("no terminals", section="Terminals")
    q = QuerySet(tuple(sorted(set(terminals))))
    if all(w == 1 for _, _, w in edges):
        return Graph.from_edges(n, [(u, v) for u, v, _ in edges]), q
    return WeightedGraph.from_weighted_edges(n, edges), q


def read_graph(path: Union[str, Path], fmt: str = "edgelist"):
    """Read a graph file; returns ``(graph, terminals_or_None)``.

    Weighted STP graphs are reduced to their topology since connectors are
    defined on unweighted graphs.
    """
    with open(path, encoding="utf-8") as fh:
        if fmt == "edgelist":
            return parse_edge_list(fh), None
        if fmt == "stp":
            g, q = parse_stp(fh)
            if isinstance(g, WeightedGraph):
                g = g.topology
            return g, q
    raise ValueError(f"unknown graph format {fmt!r}")


def write_edge_list(g: Graph) -> str:
    lines = [f"# nodes: {g.n}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def export_dot(g: Graph, query: Iterable[int], solution: Union[Connector, Iterable[int]], name: str = "connector") -> str:
    """DOT text for the subgraph induced by ``solution``.

    Query vertices are drawn filled dark grey, the vertices the connector
    added are drawn light grey.
    """
    s = solution.vertices if isinstance(solution, Connector) else tuple(sorted(set(solution)))
    q = set(query)
    if not q <= set(s):
        raise ValueError("solution does not contain every query vertex")
    out = [f"graph {name} {{", "  node [shape=circle, style=filled];"]
    for v in s:
        if v in q:
            out.append(f'  {v} [fillcolor="#404040", fontcolor=white];')
        else:
            out.append(f'  {v} [fillcolor="#d9d9d9"];')
    members = set(s)
    for u in s:
        for v in g.adj[u]:
            if u < v and v in members:
                out.append(f"  {u} -- {v};")
    out.append("}")
    return "\n".join(out) + "\n"


def connector_json(c: Connector, **extra) -> str:
    d = c.to_dict()
    d.update(extra)
    return json.dumps(d, sort_keys=True)
