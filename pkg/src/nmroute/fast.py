"""Polynomial-time Neighborhoods variants.

``solve_l`` handles link constraints only; ``solve_l1`` adds a single
additive path bound and returns the fewest-hop path meeting it.  Both work
on the pre-routed graph, where link-infeasible edges are simply absent
(equivalently, carry infinite weight).
"""
from __future__ import annotations

import math
import time

from ._sssp import dijkstra, trace
from .core import Counters, RouteResult
from .exceptions import ConfigurationError, NegativeCycle, NoFeasiblePath, Unreachable
from .graph import ConstraintSpec, Graph, PathLabel, path_distance


def single_bound(spec: ConstraintSpec, metric: int | None = None) -> tuple[int, float]:
    """Index and value of the one path bound an l+1 query carries.

    With ``metric`` given, that bound is used and every other one must be
    infinite.  Otherwise the spec must hold exactly one path bound, or
    exactly one finite bound among several.
    """
    bounds = spec.path_bounds
    if metric is not None:
        if not 0 <= metric < len(bounds):
            raise ConfigurationError(f"metric {metric} out of range for {len(bounds)} bounds")
        others = [b for i, b in enumerate(bounds) if i != metric and math.isfinite(b)]
        if others:
            raise ConfigurationError("more than one finite path bound")
        return metric, bounds[metric]
    if len(bounds) == 1:
        return 0, bounds[0]
    finite = [i for i, b in enumerate(bounds) if math.isfinite(b)]
    if len(finite) != 1:
        raise ConfigurationError(
            f"an l+1 query needs exactly one path bound, got {len(finite)} finite of {len(bounds)}")
    return finite[0], bounds[finite[0]]


def _reachable(adj, src, dst) -> bool:
    seen = {src}
    stack = [src]
    while stack:
        u = stack.pop()
        if u == dst:
            return True
        for entry in adj[u]:
            if entry[0] not in seen:
                seen.add(entry[0])
                stack.append(entry[0])
    return False


def _trivial(g, src, spec, t0):
    label = PathLabel((src,), 0.0, (0.0,) * g.p_arity, ())
    return RouteResult([label], Counters(), time.perf_counter() - t0, levels=[{src}])


def solve_l(g: Graph, src: int, dst: int, spec: ConstraintSpec,
            objective: str = "hops") -> RouteResult:
    """Link-constrained routing: fewest hops or cheapest cost over feasible edges.

    Path bounds, if present, are ignored.  In ``hops`` mode each vertex
    joins exactly one neighborhood, so the levels (returned in
    ``RouteResult.levels`` as vertex sets) are pairwise disjoint.
    """
    if objective not in ("hops", "cost"):
        raise ConfigurationError(f"objective must be 'hops' or 'cost', got {objective!r}")
    t0 = time.perf_counter()
    g._check_vertex(src)
    g._check_vertex(dst)
    if src == dst:
        return _trivial(g, src, spec, t0)
    adj = g.feasible_adjacency(_link_only(spec, g))
    counters = Counters()
    if objective == "cost":
        dist, _, pred, relaxed = dijkstra(adj, src, lambda e: e[2], dst)
        counters.traversed_paths = relaxed
        if math.isinf(dist[dst]):
            raise Unreachable(f"{dst} is unreachable from {src}")
        verts, arcs = trace(pred, src, dst)
        label = path_distance(g, verts, arcs=arcs)
        return RouteResult([label], counters, time.perf_counter() - t0)

    pred = {src: None}
    levels = [{src}]
    frontier = [src]
    while dst not in pred:
        nxt = []
        for u in frontier:
            for v, _, _, a in adj[u]:
                counters.traversed_paths += 1
                if v not in pred:
                    pred[v] = (u, a)
                    nxt.append(v)
        if not nxt:
            raise Unreachable(f"{dst} is unreachable from {src}")
        counters.neighborhoods_built += 1
        levels.append(set(nxt))
        frontier = nxt
    verts, arcs = trace(pred, src, dst)
    label = path_distance(g, verts, arcs=arcs)
    return RouteResult([label], counters, time.perf_counter() - t0, levels=levels)


def _link_only(spec: ConstraintSpec, g: Graph) -> ConstraintSpec:
    bounds = spec.path_bounds if len(spec.path_bounds) == g.p_arity else (math.inf,) * g.p_arity
    return ConstraintSpec(spec.demand, spec.link_bounds, bounds)


def solve_l1(g: Graph, src: int, dst: int, spec: ConstraintSpec,
             metric: int | None = None) -> RouteResult:
    """Fewest-hop path whose single additive distance meets its bound.

    Levels are built with a label-correcting relaxation: ``v`` enters level
    ``k`` when some ``u`` of level ``k-1`` gives ``D(u) + w(u, v) < D(v)``
    and the result stays within the bound, where ``D(u)`` is the value
    recorded when ``u`` joined level ``k-1``.  The path is recovered by
    following the per-level predecessors back from ``dst``.

    Raises
    ------
    Unreachable
        ``dst`` is disconnected from ``src`` on link-feasible edges.
    NoFeasiblePath
        Every path breaks the bound.
    NegativeCycle
        Relaxations were still happening after ``|V|`` levels.
    """
    t0 = time.perf_counter()
    g._check_vertex(src)
    g._check_vertex(dst)
    idx, bound = single_bound(spec, metric)
    if src == dst:
        return _trivial(g, src, spec, t0)
    adj = g.feasible_adjacency(spec)
    if not _reachable(adj, src, dst):
        raise Unreachable(f"{dst} is unreachable from {src}")
    counters = Counters()
    best = [math.inf] * g.n
    best[src] = 0.0
    levels = [{src: (None, None, 0.0)}]
    while dst not in levels[-1]:
        if len(levels) >= g.n:
            if levels[-1]:
                raise NegativeCycle("relaxations continue after |V| neighborhoods")
            break
        level = {}
        for u, (_, _, du) in levels[-1].items():
            for v, w, _, a in adj[u]:
                counters.traversed_paths += 1
                dist = du + w[idx]
                if dist < best[v] and dist <= bound:
                    best[v] = dist
                    level[v] = (u, a, dist)
        if not level:
            break
        counters.neighborhoods_built += 1
        levels.append(level)
    if dst not in levels[-1]:
        raise NoFeasiblePath(f"no path {src}->{dst} meets bound {bound}")
    verts, arcs = [dst], []
    v = dst
    for k in range(len(levels) - 1, 0, -1):
        u, a, _ = levels[k][v]
        verts.append(u)
        arcs.append(a)
        v = u
    verts.reverse()
    arcs.reverse()
    if len(set(verts)) != len(verts):
        raise NegativeCycle("back-tracked walk repeats a vertex")
    label = path_distance(g, verts, arcs=arcs)
    return RouteResult([label], counters, time.perf_counter() - t0, levels=levels)
