"""Integer programs for certifying lower bounds on the minimum Wiener index.

Two models are exported as LP files for an external MILP solver:

* ``flow``: exact. Every unordered pair ``s < t`` of chosen vertices routes
  one unit of flow through chosen vertices; the total flow is the Wiener
  index of the chosen set.
* ``tree``: a compact relaxation scoring pairs by their distance in the
  whole graph and asking the chosen vertices to carry a spanning tree
  rooted at the smallest query vertex. Cycle-elimination rows are only
  emitted up to a length cap, so the model optimum is a lower bound.

Variables are ``y_u`` (vertex chosen, binary), ``p_s_t`` (pair chosen),
``f_s_t_u_v`` (flow of pair ``s, t`` on arc ``u -> v``) and ``x_u_v`` (``v``
is the tree parent of ``u``). Only the component containing the query is
modelled.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .errors import DisconnectedError, InstanceTooLargeError, ParseError
from .graph import Graph, bfs_distances, bfs_sssp, component_of, induced_subgraph, is_connected_subset
from .metrics import QuerySet, make_query, wiener_index

DEFAULT_MAX_VARIABLES = 2_000_000
DEFAULT_MAX_CYCLES = 100_000


@dataclass(frozen=True)
class Variable:
    name: str
    binary: bool = False
    lower: float = 0
    upper: Optional[float] = None


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple  # ((coef, var_name), ...)
    sense: str  # "<=", ">=" or "="
    rhs: float


@dataclass
class IPModel:
    kind: str
    variables: list[Variable]
    constraints: list[Constraint]
    objective: list[tuple[float, str]]
    header: list[str] = field(default_factory=list)
    root: Optional[int] = None
    vertices: tuple[int, ...] = ()

    def variable_map(self) -> dict[str, Variable]:
        return {v.name: v for v in self.variables}

    def counts(self) -> dict[str, int]:
        out = {"variables": len(self.variables), "constraints": len(self.constraints)}
        for c in self.constraints:
            family = c.name.split("_", 1)[0]
            out[family] = out.get(family, 0) + 1
        return out

    def to_lp(self) -> str:
        return write_lp(self)


def _pairs(vs):
    return [(s, t) for i, s in enumerate(vs) for t in vs[i + 1 :]]


def _scope(g: Graph, query) -> tuple[QuerySet, list[int], set]:
    q = make_query(g, query.vertices if isinstance(query, QuerySet) else query)
    vs = component_of(g, q.vertices[0])
    return q, vs, set(vs)


def flow_model_size(n: int, m: int, q: int) -> dict[str, int]:
    """Closed-form variable and row counts of the flow model on a connected graph."""
    pairs = n * (n - 1) // 2
    return {
        "variables": n + pairs + pairs * 2 * m,
        "constraints": pairs * n + pairs * 2 * m + pairs + q,
        "flow": pairs * n,
        "cap": pairs * 2 * m,
        "link": pairs,
        "fix": q,
    }


def export_flow_ip(g: Graph, query, max_variables: int = DEFAULT_MAX_VARIABLES) -> IPModel:
    """Exact flow formulation over unordered pairs.

    Linking rows only bound ``p_s_t`` from below; the objective never gains
    from raising it, so no upper link is needed.
    """
    q, vs, inside = _scope(g, query)
    arcs = [(u, v) for u in vs for v in g.adj[u] if v in inside]
    pairs = _pairs(vs)
    size = flow_model_size(len(vs), len(arcs) // 2, len(q))
    if size["variables"] > max_variables:
        raise InstanceTooLargeError(
            f"flow model needs {size['variables']} variables (limit {max_variables})"
        )
    variables = [Variable(f"y_{u}", binary=True, upper=1) for u in vs]
    variables += [Variable(f"p_{s}_{t}") for s, t in pairs]
    rows = []
    objective = []
    for s, t in pairs:
        fvars = [Variable(f"f_{s}_{t}_{u}_{v}") for u, v in arcs]
        variables += fvars
        objective += [(1, fv.name) for fv in fvars]
        for v in vs:
            terms = []
            for u in g.adj[v]:
                if u in inside:
                    terms.append((1, f"f_{s}_{t}_{u}_{v}"))
                    terms.append((-1, f"f_{s}_{t}_{v}_{u}"))
            if v == s:
                terms.append((1, f"p_{s}_{t}"))
            elif v == t:
                terms.append((-1, f"p_{s}_{t}"))
            rows.append(Constraint(f"flow_{s}_{t}_{v}", tuple(terms), "=", 0))
        for u, v in arcs:
            rows.append(Constraint(f"cap_{s}_{t}_{u}_{v}", ((1, f"f_{s}_{t}_{u}_{v}"), (-1, f"y_{u}")), "<=", 0))
    rows += [
        Constraint(f"link_{s}_{t}", ((1, f"p_{s}_{t}"), (-1, f"y_{s}"), (-1, f"y_{t}")), ">=", -1)
        for s, t in pairs
    ]
    rows += [Constraint(f"fix_{u}", ((1, f"y_{u}"),), "=", 1) for u in q.vertices]
    header = [
        "minimum Wiener connector, flow formulation (exact)",
        f"query: {' '.join(map(str, q.vertices))}",
        f"vertices: {len(vs)}  arcs: {len(arcs)}  pairs: {len(pairs)} (unordered, s < t)",
        "objective = Wiener index of the chosen vertex set at any optimum",
    ]
    return IPModel("flow", variables, rows, objective, header, None, tuple(vs))


def enumerate_cycles(g: Graph, max_length: int, vertices: Optional[Iterable[int]] = None,
                     max_count: int = DEFAULT_MAX_CYCLES) -> tuple[list[list[int]], bool]:
    """Simple cycles with at most ``max_length`` vertices, each listed once.

    A cycle is reported starting from its smallest vertex, oriented so the
    second vertex is smaller than the last. Returns ``(cycles, truncated)``
    where ``truncated`` says the ``max_count`` cap was hit.
    """
    allowed = set(range(g.n)) if vertices is None else set(vertices)
    cycles: list[list[int]] = []
    for s in sorted(allowed):
        path = [s]
        on_path = {s}
        stack = [iter([v for v in g.adj[s] if v > s and v in allowed])]
        while stack:
            v = next(stack[-1], None)
            if v is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            path.append(v)
            on_path.add(v)
            nxt = []
            for w in g.adj[v]:
                if w == s and len(path) >= 3 and path[1] < path[-1]:
                    cycles.append(list(path))
                    if len(cycles) >= max_count:
                        return cycles, True
                elif w > s and w in allowed and w not in on_path:
                    nxt.append(w)
            stack.append(iter(nxt if len(path) < max_length else []))
    return cycles, False


def export_tree_ip(g: Graph, query, cycles: Union[None, int] = None,
                   max_cycles: int = DEFAULT_MAX_CYCLES) -> IPModel:
    """Compact tree formulation; its optimum lower-bounds the minimum Wiener index.

    ``cycles=None`` emits no cycle rows; an integer ``L`` emits one row per
    simple cycle of length at most ``L`` (capped at ``max_cycles`` rows).
    Arc capacity rows ``x_u_v + x_v_u <= y_u`` are written for both
    orientations of every edge, so a used edge needs both endpoints chosen.
    """
    q, vs, inside = _scope(g, query)
    root = q.vertices[0]
    arcs = [(u, v) for u in vs for v in g.adj[u] if v in inside]
    edges = [(u, v) for u, v in arcs if u < v]
    pairs = _pairs(vs)
    variables = [Variable(f"y_{u}", binary=True, upper=1) for u in vs]
    variables += [Variable(f"p_{s}_{t}") for s, t in pairs]
    variables += [Variable(f"x_{u}_{v}") for u, v in arcs]
    objective = []
    for s in vs:
        dist = bfs_distances(g.adj, s)
        objective += [(dist[t], f"p_{s}_{t}") for t in vs if t > s]
    rows = []
    for v in vs:
        if v == root:
            continue
        terms = tuple((1, f"x_{v}_{u}") for u in g.adj[v] if u in inside) + ((-1, f"y_{v}"),)
        rows.append(Constraint(f"parent_{v}", terms, "=", 0))
    card = [(1, f"x_{u}_{v}") for u, v in arcs] + [(-1, f"y_{u}") for u in vs]
    rows.append(Constraint("card", tuple(card), "=", -1))
    truncated = False
    n_cycles = 0
    if cycles is not None:
        found, truncated = enumerate_cycles(g, cycles, vs, max_cycles)
        n_cycles = len(found)
        for i, cyc in enumerate(found):
            terms = []
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                terms += [(1, f"x_{a}_{b}"), (1, f"x_{b}_{a}")]
            rows.append(Constraint(f"cycle_{i}", tuple(terms), "<=", len(cyc) - 1))
    for u, v in arcs:
        rows.append(Constraint(f"cap_{u}_{v}", ((1, f"x_{u}_{v}"), (1, f"x_{v}_{u}"), (-1, f"y_{u}")), "<=", 0))
    rows += [
        Constraint(f"link_{s}_{t}", ((1, f"p_{s}_{t}"), (-1, f"y_{s}"), (-1, f"y_{t}")), ">=", -1)
        for s, t in pairs
    ]
    rows += [Constraint(f"fix_{u}", ((1, f"y_{u}"),), "=", 1) for u in q.vertices]
    policy = "none" if cycles is None else f"enumerate_up_to({cycles})"
    exact = len(edges) == len(vs) - 1 or (cycles is not None and not truncated and cycles >= len(vs))
    header = [
        "minimum Wiener connector, tree formulation",
        f"query: {' '.join(map(str, q.vertices))}  tree root: {root}",
        f"vertices: {len(vs)}  edges: {len(edges)}  pairs: {len(pairs)} (unordered, s < t)",
        f"cycle rows: {policy}, {n_cycles} emitted, cap {max_cycles}" + (" (cap reached)" if truncated else ""),
        "pair costs are distances in the whole graph, never more than in the chosen subgraph,",
        "so the optimum of this model is a LOWER BOUND on the minimum Wiener index",
    ]
    if not exact:
        header.append("cycle rows are incomplete: the model is a RELAXATION of the tree constraints")
    return IPModel("tree", variables, rows, objective, header, root, tuple(vs))


# ---------------------------------------------------------------- LP text

_WRAP = 200


def _fmt_num(x) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def _fmt_expr(terms) -> list[str]:
    parts = []
    for coef, name in terms:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        parts.append(f"{sign} {name}" if mag == 1 else f"{sign} {_fmt_num(mag)} {name}")
    lines, cur = [], ""
    for p in parts:
        if cur and len(cur) + len(p) + 1 > _WRAP:
            lines.append(cur)
            cur = p
        else:
            cur = f"{cur} {p}" if cur else p
    lines.append(cur)
    return lines


def write_lp(model: IPModel) -> str:
    """Serialise in the CPLEX LP dialect (Minimize / Subject To / Bounds / Binary)."""
    out = [f"\\ {line}" for line in model.header]
    out.append("Minimize")
    expr = _fmt_expr(model.objective) if model.objective else ["0 y_dummy"]
    out.append(f" obj: {expr[0]}")
    out += [f"   {x}" for x in expr[1:]]
    out.append("Subject To")
    for c in model.constraints:
        expr = _fmt_expr(c.terms)
        expr[-1] = f"{expr[-1]} {c.sense} {_fmt_num(c.rhs)}"
        out.append(f" {c.name}: {expr[0]}")
        out += [f"   {x}" for x in expr[1:]]
    out.append("Bounds")
    for v in model.variables:
        if v.binary:
            continue
        if v.upper is None:
            out.append(f" {v.name} >= {_fmt_num(v.lower)}")
        else:
            out.append(f" {_fmt_num(v.lower)} <= {v.name} <= {_fmt_num(v.upper)}")
    binaries = [v.name for v in model.variables if v.binary]
    if binaries:
        out.append("Binary")
        for i in range(0, len(binaries), 20):
            out.append(" " + " ".join(binaries[i : i + 20]))
    out.append("End")
    return "\n".join(out) + "\n"


_SECTIONS = {
    "minimize": "obj", "minimum": "obj", "min": "obj",
    "subject to": "rows", "such that": "rows", "st": "rows", "s.t.": "rows",
    "bounds": "bounds", "binary": "bin", "binaries": "bin", "end": "end",
}
_TERM = re.compile(r"([+-])\s*(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)?\s*([A-Za-z_][\w.]*)")


def _parse_expr(text: str) -> list[tuple[float, str]]:
    text = text.strip()
    if text and text[0] not in "+-":
        text = "+ " + text
    terms = []
    pos = 0
    for m in _TERM.finditer(text):
        if text[pos : m.start()].strip():
            raise ParseError(f"cannot parse expression near {text[pos:m.start()]!r}")
        coef = float(m.group(2)) if m.group(2) else 1.0
        if coef.is_integer():
            coef = int(coef)
        terms.append((-coef if m.group(1) == "-" else coef, m.group(3)))
        pos = m.end()
    if text[pos:].strip():
        raise ParseError(f"trailing text {text[pos:]!r}")
    return terms


def read_lp(text: str, kind: str = "") -> IPModel:
    """Parse LP text produced by :func:`write_lp` back into an :class:`IPModel`."""
    header = []
    section = None
    chunks: dict[str, list[str]] = {"obj": [], "rows": [], "bounds": [], "bin": []}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("\\"):
            if section is None:
                header.append(line[1:].strip())
            continue
        low = line.lower()
        if low in _SECTIONS:
            section = _SECTIONS[low]
            if section == "end":
                break
            continue
        if section is None:
            raise ParseError(f"text outside any section: {line!r}")
        if section in ("obj", "rows") and raw.startswith("   ") and chunks[section]:
            chunks[section][-1] += " " + line
        else:
            chunks[section].append(line)

    objective = []
    for line in chunks["obj"]:
        name, _, expr = line.partition(":")
        objective = _parse_expr(expr)
    constraints = []
    for line in chunks["rows"]:
        name, _, rest = line.partition(":")
        m = re.match(r"(.*?)(<=|>=|=)\s*(\S+)\s*$", rest)
        if not m:
            raise ParseError(f"bad constraint {line!r}")
        rhs = float(m.group(3))
        constraints.append(Constraint(name.strip(), tuple(_parse_expr(m.group(1))), m.group(2),
                                      int(rhs) if rhs.is_integer() else rhs))
    variables = {}
    for line in chunks["bounds"]:
        tok = line.split()
        if len(tok) == 3 and tok[1] == ">=":
            lo = float(tok[2])
            variables[tok[0]] = Variable(tok[0], lower=int(lo) if lo.is_integer() else lo)
        elif len(tok) == 5 and tok[1] == tok[3] == "<=":
            lo, hi = float(tok[0]), float(tok[4])
            variables[tok[2]] = Variable(tok[2], lower=int(lo) if lo.is_integer() else lo,
                                         upper=int(hi) if hi.is_integer() else hi)
        else:
            raise ParseError(f"unsupported bound {line!r}")
    for line in chunks["bin"]:
        for name in line.split():
            variables[name] = Variable(name, binary=True, upper=1)
    for c in constraints:
        for _, name in c.terms:
            variables.setdefault(name, Variable(name))
    for _, name in objective:
        variables.setdefault(name, Variable(name))
    kind = kind or ("flow" if any(n.startswith("f_") for n in variables) else "tree")
    return IPModel(kind, list(variables.values()), constraints, objective, header)


# ---------------------------------------------------------- verification


@dataclass
class VerificationReport:
    feasible: bool
    objective: float
    wiener: int
    violations: list[dict]

    @property
    def objective_matches(self) -> bool:
        return self.objective == self.wiener

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "objective": self.objective,
            "wiener": self.wiener,
            "violations": self.violations,
        }


def intended_assignment(model: IPModel, g: Graph, vertices: Iterable[int]) -> dict[str, int]:
    """The 0/1 assignment that encodes vertex set ``S`` in ``model``.

    Flow model: one unit along a BFS shortest path of ``G[S]`` per pair.
    Tree model: ``x_u_v = 1`` when ``v`` is the BFS parent of ``u`` in
    ``G[S]`` from the model root.
    """
    s = sorted(set(vertices))
    h, to_old, to_new = induced_subgraph(g, s)
    vals = {f"y_{u}": 1 for u in s}
    vals.update({f"p_{a}_{b}": 1 for a, b in _pairs(s)})
    if model.kind == "flow":
        for a, b in _pairs(s):
            path = [to_old[i] for i in bfs_sssp(h, to_new[a]).path_to(to_new[b])]
            for u, v in zip(path, path[1:]):
                vals[f"f_{a}_{b}_{u}_{v}"] = 1
    else:
        bfs = bfs_sssp(h, to_new[model.root])
        for i, p in enumerate(bfs.parent):
            if p >= 0:
                vals[f"x_{to_old[i]}_{to_old[p]}"] = 1
    return vals


def verify_ip_assignment(model: IPModel, g: Graph, vertices: Iterable[int], query) -> VerificationReport:
    """Check that the intended assignment for ``S`` satisfies every row.

    For the flow model the objective must also equal ``W(G[S])``; for the
    tree model it is the sum of whole-graph distances and may be smaller.
    """
    s = sorted(set(vertices))
    q = set(query.vertices if isinstance(query, QuerySet) else query)
    if not q <= set(s):
        raise ValueError("vertex set does not contain the query")
    if not is_connected_subset(g, s):
        raise DisconnectedError("vertex set does not induce a connected subgraph")
    if model.kind == "tree" and model.root not in s:
        raise ValueError("tree model root missing from vertex set")
    vals = intended_assignment(model, g, s)
    vmap = model.variable_map()
    violations = []
    for name, val in vals.items():
        if name not in vmap:
            violations.append({"row": f"<var {name}>", "lhs": val, "sense": "declared", "rhs": None})
    for v in model.variables:
        val = vals.get(v.name, 0)
        if val < v.lower or (v.upper is not None and val > v.upper):
            violations.append({"row": f"<bound {v.name}>", "lhs": val, "sense": "in", "rhs": [v.lower, v.upper]})
    for c in model.constraints:
        lhs = sum(coef * vals.get(name, 0) for coef, name in c.terms)
        ok = lhs <= c.rhs if c.sense == "<=" else lhs >= c.rhs if c.sense == ">=" else lhs == c.rhs
        if not ok:
            violations.append({"row": c.name, "lhs": lhs, "sense": c.sense, "rhs": c.rhs})
    objective = sum(coef * vals.get(name, 0) for coef, name in model.objective)
    w = wiener_index(g, s)
    if model.kind == "flow" and objective != w:
        violations.append({"row": "objective", "lhs": objective, "sense": "=", "rhs": w})
    return VerificationReport(not violations, objective, w, violations)
