from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import figure2_graph, path_graph, random_connected_graph
from wienerconn.errors import InfeasibleError, InstanceTooLargeError
from wienerconn.graph import Graph, WeightedGraph
from wienerconn.metrics import make_query
from wienerconn.steiner import (RootedTree, brute_force_steiner, kruskal, mehlhorn_steiner,
                                prune_leaves, steiner_baseline_st, voronoi_regions)


def random_weighted(n, extra, rng, unit=False):
    g = random_connected_graph(n, extra, rng)
    return WeightedGraph.from_weighted_edges(
        n, [(u, v, 1 if unit else rng.randint(1, 9)) for u, v in g.edges()]
    )


@st.composite
def steiner_instances(draw, max_n=10, max_q=4):
    n = draw(st.integers(1, max_n))
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    wg = random_weighted(n, draw(st.integers(0, 2 * n)), rng, unit=draw(st.booleans()))
    q = draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=min(max_q, n)))
    return wg, sorted(q)


def test_path_endpoints():
    wg = WeightedGraph.unit(path_graph(5))
    t = mehlhorn_steiner(wg, [0, 4])
    assert t.vertices == frozenset(range(5)) and len(t.edges) == 4


def test_single_terminal():
    wg = WeightedGraph.unit(path_graph(3))
    t = mehlhorn_steiner(wg, [1])
    assert t.vertices == frozenset({1}) and not t.edges


def test_disconnected_terminals():
    wg = WeightedGraph.unit(Graph.from_edges(4, [(0, 1), (2, 3)]))
    with pytest.raises(InfeasibleError):
        mehlhorn_steiner(wg, [0, 3])


def test_voronoi_terminals_own_themselves():
    wg = WeightedGraph.unit(path_graph(6))
    dist, _, owner = voronoi_regions(wg, [0, 5])
    assert list(owner) == [0, 0, 0, 5, 5, 5]
    assert list(dist) == [0, 1, 2, 2, 1, 0]


@settings(max_examples=250, deadline=None)
@given(steiner_instances())
def test_mehlhorn_two_approximation(inst):
    wg, q = inst
    t = mehlhorn_steiner(wg, q)
    best = brute_force_steiner(wg, q)
    assert t.is_tree()
    assert set(q) <= t.vertices
    assert all(v in q for v in t.leaves()) or len(t.vertices) == 1
    assert t.weight(wg) <= 2 * best.weight(wg) + 1e-9
    for u, v in t.edges:
        assert wg.weight(u, v) < float("inf")


@settings(max_examples=100, deadline=None)
@given(steiner_instances(max_n=12, max_q=12))
def test_all_terminals_gives_mst(inst):
    nx = pytest.importorskip("networkx")
    wg, _ = inst
    q = list(range(wg.n))
    h = nx.Graph()
    h.add_nodes_from(q)
    h.add_weighted_edges_from(wg.weighted_edges())
    mst = sum(d["weight"] for _, _, d in nx.minimum_spanning_edges(h, data=True))
    assert mehlhorn_steiner(wg, q).weight(wg) == mst


@settings(max_examples=60, deadline=None)
@given(steiner_instances())
def test_pruning_idempotent(inst):
    wg, q = inst
    t = mehlhorn_steiner(wg, q)
    assert prune_leaves(t.edges, q) == set(t.edges)


def test_deterministic():
    rng = random.Random(5)
    wg = random_weighted(40, 80, rng)
    q = [1, 7, 19, 33]
    assert mehlhorn_steiner(wg, q) == mehlhorn_steiner(wg, q)


def test_brute_force_spanning_tree_case():
    tree = Graph.from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
    wg = WeightedGraph.unit(tree)
    t = brute_force_steiner(wg, range(5))
    assert set(t.edges) == {tuple(sorted(e)) for e in tree.edges()}


def test_brute_force_four_cycle_tie_break():
    c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    t = brute_force_steiner(WeightedGraph.unit(c4), [0, 2])
    assert t.weight(WeightedGraph.unit(c4)) == 2
    assert t.vertices == frozenset({0, 1, 2})


def test_brute_force_refuses_large():
    with pytest.raises(InstanceTooLargeError):
        brute_force_steiner(WeightedGraph.unit(path_graph(30)), [0, 29])


def test_figure2_steiner_is_the_line():
    g = figure2_graph()
    wg = WeightedGraph.unit(g)
    line = list(range(10))
    assert brute_force_steiner(wg, line).vertices == frozenset(line)
    assert mehlhorn_steiner(wg, line).vertices == frozenset(line)


def test_st_baseline_examples():
    g = path_graph(4)
    c = steiner_baseline_st(g, make_query(g, [1, 2]))
    assert c.vertices == (1, 2) and c.wiener == 1
    c = steiner_baseline_st(g, make_query(g, [0, 3]))
    assert c.vertices == (0, 1, 2, 3)


def test_kruskal_deterministic_order():
    edges = [(1, 2, 3), (1, 0, 1), (1, 1, 2), (1, 0, 2)]
    assert [(u, v) for _, u, v in kruskal(edges)] == [(0, 1), (0, 2), (2, 3)]


def test_rooted_tree_shape():
    t = RootedTree.build(0, [(1, 0), (1, 2), (0, 3)])
    assert t.is_tree() and sorted(t.leaves()) == [2, 3]
    assert t.children()[0] == [1, 3]
    assert not RootedTree.build(0, [(0, 1), (1, 2), (2, 0)]).is_tree()
