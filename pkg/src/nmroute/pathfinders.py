"""Named path algorithms the experiment services can plug in.

Every entry maps ``(g, src, dst, spec)`` to a :class:`RouteResult` and
raises a :class:`~nmroute.exceptions.RoutingError` subclass when no path
qualifies.  The NM entries minimize hop count, which under a uniform
demand is the resource-optimal constrained path.
"""
from __future__ import annotations

import math

from .baselines import ebfs, edijkstra, ibf
from .core import SearchOptions, solve_csp
from .exceptions import ConfigurationError
from .fast import solve_l, solve_l1


def _finite_bounds(spec):
    return [i for i, b in enumerate(spec.path_bounds) if math.isfinite(b)]


def nm(g, src, dst, spec, timeout=None):
    """Fewest-hop constrained path, via the polynomial variants when they apply."""
    finite = _finite_bounds(spec)
    if not finite:
        return solve_l(g, src, dst, spec, objective="hops")
    if len(finite) == 1 and timeout is None:
        return solve_l1(g, src, dst, spec, metric=finite[0])
    return solve_csp(g, src, dst, spec, SearchOptions(objective="hops", timeout=timeout))


def nm_lb(g, src, dst, spec, timeout=None):
    return solve_csp(g, src, dst, spec,
                     SearchOptions(objective="hops", look_back=True, timeout=timeout))


def nm_general(g, src, dst, spec, timeout=None):
    return solve_csp(g, src, dst, spec, SearchOptions(objective="hops", timeout=timeout))


def ebfs_plain(g, src, dst, spec, timeout=None):
    return ebfs(g, src, dst, spec, SearchOptions(objective="hops", timeout=timeout))


def ebfs_la(g, src, dst, spec, timeout=None):
    return ebfs(g, src, dst, spec, SearchOptions(objective="hops", timeout=timeout),
                look_ahead=True)


def edijkstra_metric(g, src, dst, spec, timeout=None):
    """Minimum-delay path (first path metric) over link-feasible edges."""
    return edijkstra(g, src, dst, spec, objective="metric", metric=0)


def edijkstra_hops(g, src, dst, spec, timeout=None):
    return edijkstra(g, src, dst, spec, objective="hops")


def ibf_metric(g, src, dst, spec, timeout=None):
    finite = _finite_bounds(spec)
    return ibf(g, src, dst, spec, metric=finite[0] if len(finite) == 1 else None)


PATHFINDERS = {
    "nm": nm,
    "nm-general": nm_general,
    "nm-lb": nm_lb,
    "ebfs": ebfs_plain,
    "ebfs-la": ebfs_la,
    "edijkstra": edijkstra_metric,
    "edijkstra-hops": edijkstra_hops,
    "ibf": ibf_metric,
}


def get_pathfinder(name: str):
    try:
        return PATHFINDERS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown algorithm {name!r}; choose from {sorted(PATHFINDERS)}") from None
