"""Exhaustive reference answers computed by plain depth-first enumeration."""
from __future__ import annotations

import math

import numpy as np

from nmroute.graph import ConstraintSpec, Graph


def all_simple_paths(g: Graph, src: int, dst: int):
    """Yield ``(vertices, arcs)`` for every simple arc sequence ``src -> dst``."""
    if src == dst:
        yield (src,), ()
        return
    stack = [(src, (src,), ())]
    while stack:
        u, verts, arcs = stack.pop()
        for a in g.out_arcs[u]:
            v = g.arc_head[a]
            if v in verts:
                continue
            if v == dst:
                yield verts + (v,), arcs + (a,)
            else:
                stack.append((v, verts + (v,), arcs + (a,)))


def _link_ok(g, a, spec):
    e = g.arc_edge[a]
    attr = g.edges[e][2]
    if g.residual[e] < spec.demand:
        return False
    for b in spec.link_bounds:
        x = attr.link_metrics[b.metric]
        if b.direction == "at-least" and x < b.bound:
            return False
        if b.direction == "at-most" and x > b.bound:
            return False
    return True


def feasible_paths(g: Graph, src: int, dst: int, spec: ConstraintSpec):
    """``(cost, hops, vertices, path_dist)`` for every fully feasible simple path."""
    out = []
    for verts, arcs in all_simple_paths(g, src, dst):
        if not all(_link_ok(g, a, spec) for a in arcs):
            continue
        cost = 0.0
        dist = [0.0] * g.p_arity
        for a in arcs:
            attr = g.edges[g.arc_edge[a]][2]
            cost += attr.cost
            for i, w in enumerate(attr.path_metrics):
                dist[i] += w
        if all(d <= b for d, b in zip(dist, spec.path_bounds)):
            out.append((cost, len(verts) - 1, verts, tuple(dist)))
    return out


def best_cost(g, src, dst, spec):
    paths = feasible_paths(g, src, dst, spec)
    return min(p[0] for p in paths) if paths else None


def min_hops(g, src, dst, spec):
    paths = feasible_paths(g, src, dst, spec)
    return min(p[1] for p in paths) if paths else None


def link_reachable(g, src, dst, spec):
    seen, stack = {src}, [src]
    while stack:
        u = stack.pop()
        for a in g.out_arcs[u]:
            v = g.arc_head[a]
            if v not in seen and _link_ok(g, a, spec):
                seen.add(v)
                stack.append(v)
    return dst in seen


def random_instance(seed: int, n_range=(4, 10), p_arity=2, unit_cost=False):
    """Seeded random graph plus query for the oracle corpus.

    Vertices sit on the unit square; delay is Euclidean length, the second
    path metric and the objective cost are independent uniform draws.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    xy = rng.random((n, 2))
    target = min(n * (n - 1) // 2, 2 * n)
    order = [int(x) for x in rng.permutation(n)]
    pairs = {tuple(sorted((order[i], order[i + 1]))) for i in range(n - 1)}  # spanning chain
    while len(pairs) < target:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u != v:
            pairs.add((min(u, v), max(u, v)))
    g = Graph(n, directed=bool(rng.random() < 0.2), l_arity=0, p_arity=p_arity)
    for u, v in sorted(pairs):
        delay = float(math.hypot(*(xy[u] - xy[v])))
        metrics = (delay, float(rng.integers(1, 11)))[:p_arity]
        cost = 1.0 if unit_cost else float(rng.integers(1, 11))
        bw = float(rng.integers(1, 10))
        if g.directed and rng.random() < 0.5:
            u, v = v, u
        g.add_edge(u, v, bw, (), metrics, cost)
        if rng.random() < 0.1:  # occasional parallel link
            g.add_edge(u, v, float(rng.integers(1, 10)), (),
                       (delay * 1.5, float(rng.integers(1, 11)))[:p_arity],
                       1.0 if unit_cost else float(rng.integers(1, 11)))
    src, dst = (int(x) for x in rng.choice(n, size=2, replace=False))
    demand = float(rng.integers(1, 6))
    bounds = (float(rng.uniform(0.5, 2.5)), float(rng.integers(8, 30)))[:p_arity]
    return g, src, dst, ConstraintSpec(demand, (), bounds)
