"""scikit-learn style front end.

``fit`` binds a substrate, ``route`` answers one request and ``predict``
maps a batch of ``(src, dst, spec)`` requests to paths (``None`` where no
path qualifies).  Hyper-parameters round-trip through ``get_params`` and
``set_params`` like any other estimator.
"""
from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .baselines import ebfs, edijkstra
from .core import RouteResult, SearchOptions, solve_csp
from .exceptions import ConfigurationError, RoutingError
from .fast import solve_l, solve_l1
from .graph import ConstraintSpec, Graph

ALGORITHMS = ("nm", "nm-l", "nm-l1", "ebfs", "edijkstra")


class NeighborhoodsRouter(BaseEstimator):
    """Constrained shortest paths on a fitted substrate.

    Parameters
    ----------
    algorithm : {"nm", "nm-l", "nm-l1", "ebfs", "edijkstra"}
        ``nm`` is the general search; ``nm-l`` and ``nm-l1`` are the
        link-only and single-bound variants; the rest are baselines.
    objective : {"cost", "hops"}
    dominance, look_back : bool
        Pruning toggles of the general search.
    look_ahead : bool
        Residual-distance pruning for ``ebfs``.
    k : int
        Number of best paths ``route`` returns (general search only).
    max_hops : int or None
    timeout : float or None
        Seconds per query.
    """

    def __init__(self, algorithm="nm", objective="cost", dominance=True, look_back=False,
                 look_ahead=False, k=1, max_hops=None, timeout=None):
        self.algorithm = algorithm
        self.objective = objective
        self.dominance = dominance
        self.look_back = look_back
        self.look_ahead = look_ahead
        self.k = k
        self.max_hops = max_hops
        self.timeout = timeout

    def _options(self) -> SearchOptions:
        return SearchOptions(dominance=self.dominance, look_back=self.look_back, k=self.k,
                             max_hops=self.max_hops, objective=self.objective,
                             timeout=self.timeout)

    def fit(self, g: Graph, y=None):
        if not isinstance(g, Graph):
            raise ConfigurationError(f"fit expects a Graph, got {type(g).__name__}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"algorithm must be one of {ALGORITHMS}")
        self.options_ = self._options()
        self.graph_ = g
        self.n_vertices_ = g.n
        return self

    def route(self, src: int, dst: int, spec: ConstraintSpec) -> RouteResult:
        check_is_fitted(self, "graph_")
        g, opts = self.graph_, self.options_
        if self.algorithm == "nm":
            return solve_csp(g, src, dst, spec, opts)
        if self.algorithm == "nm-l":
            return solve_l(g, src, dst, spec, objective=self.objective)
        if self.algorithm == "nm-l1":
            return solve_l1(g, src, dst, spec)
        if self.algorithm == "ebfs":
            return ebfs(g, src, dst, spec, opts, look_ahead=self.look_ahead)
        return edijkstra(g, src, dst, spec, objective=self.objective)

    def predict(self, X) -> list:
        out = []
        for src, dst, spec in X:
            try:
                out.append(self.route(src, dst, spec).path)
            except RoutingError as exc:
                if isinstance(exc, ConfigurationError):
                    raise
                out.append(None)
        return out
