"""Reference algorithms the Neighborhoods Method is compared against."""
from __future__ import annotations

import heapq
import math
import time

from ._sssp import dijkstra, reverse_distances, trace
from .core import Counters, RouteResult, SearchOptions, _Search
from .exceptions import ConfigurationError, NegativeCycle, NoFeasiblePath, Unreachable
from .fast import single_bound
from .graph import ConstraintSpec, Graph, PathLabel, path_distance

EDIJKSTRA_OBJECTIVES = ("hops", "cost", "metric")


def _trivial(g, src, t0):
    return RouteResult([PathLabel((src,), 0.0, (0.0,) * g.p_arity, ())], Counters(),
                       time.perf_counter() - t0)


def edijkstra(g: Graph, src: int, dst: int, spec: ConstraintSpec, objective: str = "hops",
              metric: int | None = None) -> RouteResult:
    """Dijkstra on the graph with link-infeasible edges removed.

    ``hops`` and ``cost`` ignore path bounds entirely, so the returned path
    may violate them.  ``metric`` minimizes the one bounded path metric and
    raises :class:`NoFeasiblePath` when even its minimum breaks the bound.
    """
    if objective not in EDIJKSTRA_OBJECTIVES:
        raise ConfigurationError(f"objective must be one of {EDIJKSTRA_OBJECTIVES}")
    t0 = time.perf_counter()
    g._check_vertex(src)
    g._check_vertex(dst)
    bound = math.inf
    if objective == "metric":
        idx, bound = single_bound(spec, metric)
        weight = lambda e: e[1][idx]  # noqa: E731
    elif objective == "cost":
        weight = lambda e: e[2]  # noqa: E731
    else:
        weight = lambda e: 1.0  # noqa: E731
    if src == dst:
        return _trivial(g, src, t0)
    spec.check_arity(g.l_arity, g.p_arity)
    adj = g.feasible_adjacency(spec)
    dist, _, pred, relaxed = dijkstra(adj, src, weight, dst)
    counters = Counters(traversed_paths=relaxed)
    if math.isinf(dist[dst]):
        raise Unreachable(f"{dst} is unreachable from {src}")
    if dist[dst] > bound:
        raise NoFeasiblePath(f"minimum metric {dist[dst]} exceeds bound {bound}")
    verts, arcs = trace(pred, src, dst)
    return RouteResult([path_distance(g, verts, arcs=arcs)], counters, time.perf_counter() - t0)


def ibf(g: Graph, src: int, dst: int, spec: ConstraintSpec,
        metric: int | None = None) -> RouteResult:
    """Iterative Bellman-Ford: round ``h`` yields the best ``<= h``-hop distance.

    The first round whose distance at ``dst`` meets the bound gives the
    fewest-hop feasible path.  Without any path bound this is plain
    min-hop routing.
    """
    t0 = time.perf_counter()
    g._check_vertex(src)
    g._check_vertex(dst)
    spec.check_arity(g.l_arity, g.p_arity)
    if all(math.isinf(b) for b in spec.path_bounds) and metric is None:
        idx, bound = None, math.inf
    else:
        idx, bound = single_bound(spec, metric)
    if src == dst:
        return _trivial(g, src, t0)
    adj = g.feasible_adjacency(spec)
    if not _reachable(adj, src, dst):
        raise Unreachable(f"{dst} is unreachable from {src}")
    counters = Counters()
    dist = [math.inf] * g.n
    dist[src] = 0.0
    rounds = [{src: None}]  # rounds[h][v] = (u, arc) for vertices improved in round h
    changed = [src]
    found = False
    for _ in range(1, g.n):
        new = list(dist)
        preds = {}
        for u in changed:
            du = dist[u]
            for v, w, _, a in adj[u]:
                counters.traversed_paths += 1
                nd = du + (1.0 if idx is None else w[idx])
                if nd < new[v]:
                    new[v] = nd
                    preds[v] = (u, a)
        dist = new
        rounds.append(preds)
        changed = sorted(preds)
        if dst in preds and dist[dst] <= bound:
            found = True
            break
        if not changed:
            break
    if not found:
        if changed and idx is not None and any(
                dist[u] + w[idx] < dist[v] for u in changed for v, w, _, _ in adj[u]):
            raise NegativeCycle("Bellman-Ford still relaxing after |V|-1 rounds")
        raise NoFeasiblePath(f"no path {src}->{dst} meets bound {bound}")
    verts, arcs = [dst], []
    v, r = dst, len(rounds) - 1
    while v != src:
        while v not in rounds[r]:
            r -= 1
        u, a = rounds[r][v]
        verts.append(u)
        arcs.append(a)
        v, r = u, r - 1
    verts.reverse()
    arcs.reverse()
    return RouteResult([path_distance(g, verts, arcs=arcs)], counters, time.perf_counter() - t0)


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


def ebfs(g: Graph, src: int, dst: int, spec: ConstraintSpec,
         opts: SearchOptions | None = None, look_ahead: bool = False) -> RouteResult:
    """Exhaustive breadth-first enumeration of simple paths from ``src``.

    Uses the same dominance store, bound pruning and stopping rule as
    :func:`nmroute.core.solve_csp`, so both return identical optima.  With
    ``look_ahead`` a partial path is dropped when its distance plus the best
    remaining distance to ``dst`` (one reverse Dijkstra per path metric,
    timed as part of the query) breaks a bound.  ``opts.look_back`` is
    ignored.
    """
    opts = SearchOptions() if opts is None else opts
    t0 = time.perf_counter()
    search = _Search(g, src, dst, spec, opts)
    if src == dst:
        return _trivial(g, src, t0)
    p = search.p
    bounds = search.bounds
    if look_ahead:
        rev = g.feasible_adjacency(spec, reverse=True)
        resid = [reverse_distances(rev, dst, i) for i in range(p)]
        # transpose to per-vertex tuples
        resid = [tuple(r[v] for r in resid) for v in range(g.n)]
    max_hops = g.n - 1 if opts.max_hops is None else min(opts.max_hops, g.n - 1)
    counters = search.counters
    use_dom = search.use_dominance
    bound_prune = opts.dominance
    store = search.store
    front = search.front
    out_adj = search.out_adj
    tick = 0
    frontier = [[(src,), (), (0.0,) * (p + 1), True]]
    trace_hops = []
    for h in range(1, max_hops + 1):
        if search.kth_cost() <= search.min_arc_cost * h:
            break
        trace_hops.append(h)
        cap = search.kth_cost()
        new = []
        done = []
        for lab in frontier:
            if not lab[3]:
                continue
            verts, arcs, vec = lab[0], lab[1], lab[2]
            for v, w, a in out_adj[verts[-1]]:
                if v in verts:
                    continue
                counters.traversed_paths += 1
                tick += 1
                if tick >= 2048:
                    tick = 0
                    search.check_deadline()
                nvec = tuple([x + y for x, y in zip(vec, w)])
                if look_ahead:
                    rv = resid[v]
                    bad = any(nvec[i] + rv[i] > bounds[i] for i in range(p))
                else:
                    bad = any(nvec[i] > bounds[i] for i in range(p))
                if bad:
                    counters.infeasibility_pruned += 1
                    continue
                if bound_prune and nvec[p] > cap:
                    counters.dominance_pruned += 1
                    continue
                label = [verts + (v,), arcs + (a,), nvec, True]
                if use_dom and not search._admit(store, front, v, label):
                    counters.dominance_pruned += 1
                    continue
                if v == dst:
                    done.append(label)
                else:
                    new.append(label)
        for lab in done:
            if lab[3]:
                search.offer(lab[2][-1], search.make_label(lab[0], lab[1], lab[2]), lab[2])
        frontier = new
        if not frontier:
            break
    if not search.best:
        raise search.failure(f" within {max_hops} hops")
    return RouteResult([label for _, label in search.best], counters,
                       time.perf_counter() - t0, trace_hops)


def ksp(g: Graph, src: int, dst: int, k: int, scalar: str = "hops",
        spec: ConstraintSpec | None = None) -> list:
    """The ``k`` shortest loop-free paths by hop count or cost.

    Deviation-based enumeration over the link-pruned graph (all edges when
    ``spec`` is omitted).  Order is (scalar, hops, vertex sequence); fewer
    than ``k`` paths are returned when fewer exist.
    """
    if k < 1:
        raise ConfigurationError("k must be at least 1")
    if scalar not in ("hops", "cost"):
        raise ConfigurationError(f"scalar must be 'hops' or 'cost', got {scalar!r}")
    g._check_vertex(src)
    g._check_vertex(dst)
    if src == dst:
        return [PathLabel((src,), 0.0, (0.0,) * g.p_arity, ())]
    if spec is None:
        adj = _all_arcs(g)
    else:
        adj = g.feasible_adjacency(spec)
    weight = (lambda e: 1.0) if scalar == "hops" else (lambda e: e[2])  # noqa: E731

    def score(label):
        val = float(label.hop_count) if scalar == "hops" else label.cost
        return (val, label.hop_count, label.vertices)

    dist, _, pred, _ = dijkstra(adj, src, weight, dst)
    if math.isinf(dist[dst]):
        return []
    verts, arcs = trace(pred, src, dst)
    accepted = [path_distance(g, verts, arcs=arcs)]
    seen = {accepted[0].vertices}
    heap = []
    while len(accepted) < k:
        last = accepted[-1]
        for i in range(last.hop_count):
            root_v = last.vertices[:i + 1]
            root_a = last.arcs[:i]
            spur = root_v[-1]
            banned_arcs = set()
            for p in accepted:
                if p.vertices[:i + 1] == root_v:
                    banned_arcs.add(p.arcs[i])
                    banned_arcs.update(_twin_arcs(g, p.arcs[i]))
            banned_v = set(root_v[:-1])
            d2, _, pr2, _ = dijkstra(adj, spur, weight, dst, banned_v, banned_arcs)
            if math.isinf(d2[dst]):
                continue
            sv, sa = trace(pr2, spur, dst)
            cand_v = root_v[:-1] + sv
            if cand_v in seen:
                continue
            seen.add(cand_v)
            lab = path_distance(g, cand_v, arcs=root_a + sa)
            heapq.heappush(heap, (score(lab), lab.arcs, lab))
        if not heap:
            break
        accepted.append(heapq.heappop(heap)[2])
    return accepted


def _twin_arcs(g, arc):
    # parallel arcs between the same ordered pair deviate to the same vertex sequence
    return g.arcs_between(g.arc_tail[arc], g.arc_head[arc])


def _all_arcs(g):
    adj = []
    for u in range(g.n):
        row = []
        for a in g.out_arcs[u]:
            attr = g.attr(a)
            row.append((g.arc_head[a], attr.path_metrics, attr.cost, a))
        row.sort(key=lambda t: (t[0], t[2], t[1], t[3]))
        adj.append(row)
    return adj
