from __future__ import annotations

import io as stdio
import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import (DATA, complete_graph, figure2_graph, floyd_warshall_wiener,
                      path_graph, random_connected_graph)
from wienerconn.errors import DisconnectedError, InfeasibleError, ParseError
from wienerconn.generators import generate_synthetic
from wienerconn.graph import (INF, Graph, WeightedGraph, bfs_sssp, connected_components,
                              dijkstra_sssp, induced_subgraph)
from wienerconn.io import connector_json, export_dot, parse_edge_list, parse_stp, read_graph
from wienerconn.metrics import (Connector, brandes_betweenness, density, induced_distance_sum,
                                make_query, root_cost_A, wiener_index)


@st.composite
def connected_graphs(draw, max_n=14):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    extra = draw(st.integers(0, 2 * n))
    return random_connected_graph(n, extra, random.Random(seed))


# --- parsing ---------------------------------------------------------------

def test_edge_list_path():
    g = parse_edge_list("0 1\n1 2")
    assert (g.n, g.m) == (3, 2)


def test_edge_list_normalization():
    g = parse_edge_list("0 1\n1 0\n0 0")
    assert (g.n, g.m) == (2, 1)
    assert g.dropped_self_loops == 1 and g.dropped_duplicates == 1


def test_edge_list_comments_and_header():
    g = parse_edge_list("# nodes: 5\n% other comment\n0 1\n")
    assert (g.n, g.m) == (5, 1)


def test_edge_list_empty():
    g = parse_edge_list("")
    assert (g.n, g.m) == (0, 0)


def test_edge_list_bad_token_reports_line():
    with pytest.raises(ParseError) as exc:
        parse_edge_list("0 1\n1 x\n")
    assert exc.value.line == 2


def test_edge_list_accepts_stream():
    assert parse_edge_list(stdio.StringIO("0 1\n")).m == 1


def test_karate_counts(karate):
    assert (karate.n, karate.m) == (34, 78)


def test_stp_minimal():
    g, q = parse_stp((DATA / "path3.stp").read_text())
    assert isinstance(g, Graph)
    assert g.edges() == [(0, 1), (1, 2)]
    assert q.vertices == (0, 2)


def test_stp_weighted():
    g, q = parse_stp((DATA / "weighted4.stp").read_text())
    assert isinstance(g, WeightedGraph)
    assert g.weight(0, 1) == 5 and g.weight(1, 0) == 5
    assert q.vertices == (0, 1)


def test_stp_generated_puc_layout():
    g, q = parse_stp((DATA / "hc6_generated.stp").read_text())
    assert (g.n, g.m) == (64, 192)
    assert len(q.vertices) == 32


@pytest.mark.parametrize(
    "text, section",
    [
        ("SECTION Graph\nNodes 2\nE 1 2 1\nEND\n", "Terminals"),
        ("SECTION Graph\nNodes 2\nE 1 3 1\nEND\nSECTION Terminals\nT 1\nEND\n", "Graph"),
        ("SECTION Graph\nNodes 2\nE 1 2 0\nEND\nSECTION Terminals\nT 1\nEND\n", "Graph"),
        ("SECTION Graph\nNodes 2\nE 1 2 1\nEND\nSECTION Terminals\nT 7\nEND\n", "Terminals"),
    ],
)
def test_stp_errors_name_section(text, section):
    with pytest.raises(ParseError) as exc:
        parse_stp(text)
    assert exc.value.section == section


def test_read_graph_reduces_weighted_stp():
    g, q = read_graph(DATA / "weighted4.stp", "stp")
    assert isinstance(g, Graph) and g.m == 5 and q.vertices == (0, 1)


# --- traversal -------------------------------------------------------------

def test_bfs_star():
    g = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
    assert list(bfs_sssp(g, 0).dist) == [0, 1, 1, 1, 1]


def test_bfs_path():
    assert list(bfs_sssp(path_graph(5), 0).dist) == [0, 1, 2, 3, 4]


def test_bfs_unreachable():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    dm = bfs_sssp(g, 0)
    assert dm.dist[2] == INF and dm.dist[3] == INF
    assert not dm.reachable(3)


def test_dijkstra_triangle_relaxation():
    wg = WeightedGraph.from_weighted_edges(3, [(0, 1, 1), (1, 2, 1), (0, 2, 3)])
    dm = dijkstra_sssp(wg, 0)
    assert dm.dist[2] == 2 and dm.parent[2] == 1


def test_dijkstra_unreachable():
    wg = WeightedGraph.from_weighted_edges(3, [(0, 1, 2)])
    assert dijkstra_sssp(wg, 0).dist[2] == INF


@settings(max_examples=60, deadline=None)
@given(connected_graphs(), st.data())
def test_bfs_matches_unit_dijkstra(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    b = bfs_sssp(g, s)
    d = dijkstra_sssp(WeightedGraph.unit(g), s)
    assert list(b.dist) == list(d.dist)
    for v in range(g.n):
        if v != s:
            assert b.dist[b.parent[v]] + 1 == b.dist[v]


@settings(max_examples=60, deadline=None)
@given(connected_graphs())
def test_graph_invariants(g):
    assert sum(len(a) for a in g.adj) == 2 * g.m
    for u, row in enumerate(g.adj):
        assert list(row) == sorted(set(row)) and u not in row
        for v in row:
            assert u in g.adj[v]


def test_induced_subgraph_examples():
    tri = complete_graph(3)
    h, to_old, _ = induced_subgraph(tri, [0, 2])
    assert h.m == 1 and to_old == [0, 2]
    c5 = Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    h, _, _ = induced_subgraph(c5, [0, 1, 2])
    assert h.edges() == [(0, 1), (1, 2)]
    h, _, _ = induced_subgraph(c5, range(5))
    assert h == c5
    with pytest.raises(ValueError):
        induced_subgraph(tri, [5])


# --- metrics ---------------------------------------------------------------

def test_wiener_path_ten():
    assert wiener_index(path_graph(10), range(10)) == 165


@pytest.mark.parametrize("n", range(1, 51))
def test_wiener_closed_forms(n):
    assert wiener_index(path_graph(n), range(n)) == n * (n * n - 1) // 6
    if n <= 30:
        assert wiener_index(complete_graph(n), range(n)) == n * (n - 1) // 2


@pytest.mark.parametrize("k", range(1, 12))
def test_wiener_star(k):
    g = Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])
    assert wiener_index(g, range(k + 1)) == k * k


def test_wiener_single_and_disconnected():
    g = Graph.from_edges(3, [(0, 1)])
    assert wiener_index(g, [2]) == 0
    with pytest.raises(DisconnectedError):
        wiener_index(g, [0, 2])


def test_figure2_values():
    g = figure2_graph()
    line = list(range(10))
    assert wiener_index(g, line) == 165
    assert wiener_index(g, line + [10]) == 151
    assert wiener_index(g, line + [11]) == 151
    assert wiener_index(g, line + [10, 11]) == 142


@settings(max_examples=80, deadline=None)
@given(connected_graphs(max_n=30), st.data())
def test_wiener_matches_floyd_warshall(g, data):
    s = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    expected = floyd_warshall_wiener(g, s)
    if expected == float("inf"):
        with pytest.raises(DisconnectedError):
            wiener_index(g, s)
    else:
        assert wiener_index(g, s) == expected


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=16), st.data())
def test_induced_distances_monotone(g, data):
    # adding a vertex never lengthens a distance among the old vertices
    s = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    extra = data.draw(st.integers(0, g.n - 1))
    h1, _, m1 = induced_subgraph(g, s)
    h2, _, m2 = induced_subgraph(g, s | {extra})
    for a in s:
        d1 = bfs_sssp(h1, m1[a]).dist
        d2 = bfs_sssp(h2, m2[a]).dist
        for b in s:
            assert d2[m2[b]] <= d1[m1[b]]


def test_root_cost_examples():
    p3 = path_graph(3)
    assert root_cost_A(p3, [1], 1) == 0
    assert root_cost_A(p3, [0, 1, 2], 1) == 6
    star = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
    assert root_cost_A(star, range(5), 0) == 20


@settings(max_examples=100, deadline=None)
@given(connected_graphs(max_n=40))
def test_one_source_sandwich(g):
    # min_r sum_v d(v, r) <= 2 W / |S| <= 2 min_r sum_v d(v, r), in integers
    s = list(range(g.n))
    w = wiener_index(g, s)
    best = min(induced_distance_sum(g, s, r) for r in s)
    k = len(s)
    assert k * best <= 2 * w <= 2 * k * best


def test_density():
    assert density(complete_graph(4), range(4)) == 1.0
    assert density(path_graph(3), [0]) == 0.0
    assert density(path_graph(3), range(3)) == pytest.approx(2 / 3)


def test_betweenness_examples():
    assert brandes_betweenness(complete_graph(5)) == [0.0] * 5
    assert brandes_betweenness(path_graph(3)) == [0.0, 1.0, 0.0]
    star = Graph.from_edges(6, [(0, i) for i in range(1, 6)])
    assert brandes_betweenness(star) == [1.0] + [0.0] * 5
    assert brandes_betweenness(path_graph(2)) == [0.0, 0.0]


@settings(max_examples=30, deadline=None)
@given(connected_graphs(max_n=20))
def test_betweenness_matches_networkx(g):
    nx = pytest.importorskip("networkx")
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    ref = nx.betweenness_centrality(h, normalized=True)
    ours = brandes_betweenness(g)
    for v in range(g.n):
        assert ours[v] == pytest.approx(ref[v], abs=1e-12)


def test_make_query_validation():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert make_query(g, [1, 0, 1]).vertices == (0, 1)
    with pytest.raises(ValueError):
        make_query(g, [])
    with pytest.raises(ValueError):
        make_query(g, [9])
    with pytest.raises(InfeasibleError):
        make_query(g, [0, 3])


def test_connector_record():
    c = Connector.from_vertices(path_graph(4), [2, 0, 1])
    assert c.vertices == (0, 1, 2) and c.wiener == 4 and c.size == 3
    d = c.to_dict()
    assert d["schema"] == 1 and d["vertices"] == [0, 1, 2]
    assert '"wiener": 4' in connector_json(c)


# --- generators ------------------------------------------------------------

def test_er_saturates():
    g = generate_synthetic("ER", 5, 10, seed=1)
    assert g == complete_graph(5)


@pytest.mark.parametrize("model", ["ER", "PL"])
def test_generators_deterministic(model):
    a = generate_synthetic(model, 200, 600, seed=7)
    b = generate_synthetic(model, 200, 600, seed=7)
    c = generate_synthetic(model, 200, 600, seed=8)
    assert a == b and a != c


def test_er_exact_edge_count():
    assert generate_synthetic("ER", 300, 1234, seed=3).m == 1234
    with pytest.raises(ValueError):
        generate_synthetic("ER", 4, 7, seed=0)


def test_pl_heavy_tail():
    nx = pytest.importorskip("networkx")
    ratios, ref_ratios = [], []
    for seed in range(20):
        g = generate_synthetic("PL", 1000, 2000, seed)
        deg = sorted(len(a) for a in g.adj)
        assert 1900 <= g.m <= 2000
        ratios.append(deg[-1] / deg[len(deg) // 2])
        h = nx.barabasi_albert_graph(1000, 2, seed=seed)
        rdeg = sorted(d for _, d in h.degree())
        ref_ratios.append(rdeg[-1] / rdeg[len(rdeg) // 2])
    assert min(ratios) > 10
    assert min(ref_ratios) > 10


# --- DOT -------------------------------------------------------------------

def test_dot_single_node():
    text = export_dot(complete_graph(2), [0], [0])
    assert "0 [" in text and "--" not in text


def test_dot_karate_parses(karate):
    pydot = pytest.importorskip("pydot")
    q = [11, 24, 25, 29]
    sol = [0, 11, 24, 25, 29, 31, 33]
    text = export_dot(karate, q, Connector.from_vertices(karate, sol))
    (graph,) = pydot.graph_from_dot_data(text)
    names = sorted(int(n.get_name()) for n in graph.get_nodes() if n.get_name().isdigit())
    assert names == sol
    styled = {int(n.get_name()): n.get("fillcolor") for n in graph.get_nodes() if n.get_name().isdigit()}
    assert {v for v, c in styled.items() if c == '"#404040"'} == set(q)
    expected_edges = {(u, v) for u, v in itertools.combinations(sol, 2) if karate.has_edge(u, v)}
    got = {tuple(sorted((int(e.get_source()), int(e.get_destination())))) for e in graph.get_edges()}
    assert got == expected_edges


def test_components():
    g = Graph.from_edges(5, [(0, 1), (3, 4)])
    assert connected_components(g) == [[0, 1], [2], [3, 4]]
