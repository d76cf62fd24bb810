"""Minimum Wiener connectors: small connected subgraphs that keep a set of
query vertices close together."""

from .connector import AlgorithmConfig, local_prune, shortest_path_connector, wiener_steiner
from .errors import DisconnectedError, InfeasibleError, InstanceTooLargeError, ParseError
from .exact import brute_force_connector
from .graph import Graph, WeightedGraph, bfs_sssp, dijkstra_sssp, induced_subgraph
from .io import export_dot, parse_edge_list, parse_stp, read_graph
from .metrics import Connector, QuerySet, brandes_betweenness, make_query, root_cost_A, wiener_index
from .steiner import brute_force_steiner, mehlhorn_steiner, steiner_baseline_st

__version__ = "0.1.0"

__all__ = [
    "AlgorithmConfig",
    "Connector",
    "DisconnectedError",
    "Graph",
    "InfeasibleError",
    "InstanceTooLargeError",
    "ParseError",
    "QuerySet",
    "WeightedGraph",
    "bfs_sssp",
    "brandes_betweenness",
    "brute_force_connector",
    "brute_force_steiner",
    "dijkstra_sssp",
    "export_dot",
    "induced_subgraph",
    "local_prune",
    "make_query",
    "mehlhorn_steiner",
    "parse_edge_list",
    "parse_stp",
    "read_graph",
    "root_cost_A",
    "shortest_path_connector",
    "steiner_baseline_st",
    "wiener_index",
    "wiener_steiner",
]
