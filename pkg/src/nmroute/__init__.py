"""Exact constrained shortest paths with the Neighborhoods Method.

The general search lives in :mod:`nmroute.core`, the polynomial special
cases in :mod:`nmroute.fast` and the reference algorithms in
:mod:`nmroute.baselines`.
"""
from .baselines import ebfs, edijkstra, ibf, ksp
from .core import (Counters, Neighborhoods, RouteResult, SearchOptions, backward_pass,
                   build_neighborhoods, dominates, extend_neighborhoods, look_back_violates,
                   solve_csp)
from .estimators import NeighborhoodsRouter
from .exceptions import (ConfigurationError, GraphFormatError, InvalidPathError,
                         MaxLengthExceeded, NegativeCycle, NoFeasiblePath, RoutingError,
                         SearchTimeout, Unreachable)
from .fast import solve_l, solve_l1
from .graph import (AT_LEAST, AT_MOST, ConstraintSpec, EdgeAttr, Graph, LinkBound, PathLabel,
                    edge_feasible, path_distance, path_feasible, read_graph, write_graph)

__version__ = "0.1.0"

__all__ = [
    "AT_LEAST", "AT_MOST", "ConfigurationError", "ConstraintSpec", "Counters", "EdgeAttr",
    "Graph", "GraphFormatError", "InvalidPathError", "LinkBound", "MaxLengthExceeded",
    "NegativeCycle", "Neighborhoods", "NeighborhoodsRouter", "NoFeasiblePath", "PathLabel",
    "RouteResult", "RoutingError", "SearchOptions", "SearchTimeout", "Unreachable",
    "backward_pass", "build_neighborhoods", "dominates", "ebfs", "edge_feasible",
    "edijkstra", "extend_neighborhoods", "ibf", "ksp", "look_back_violates",
    "path_distance", "path_feasible", "read_graph", "solve_csp", "solve_l", "solve_l1",
    "write_graph",
]
