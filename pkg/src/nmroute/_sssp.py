"""Dijkstra over a pre-routed adjacency, ordered by (scalar, hops)."""
from __future__ import annotations

import heapq
import math


def dijkstra(adj, src, weight, dst=None, banned_vertices=None, banned_arcs=None):
    """Single-source shortest paths with hop count as the tie-breaker.

    ``adj[u]`` holds ``(v, path_metrics, cost, arc)`` entries and ``weight``
    maps an entry to a non-negative scalar.  Returns ``(dist, hops, pred,
    relaxed)`` where ``pred[v]`` is ``(u, arc)`` or ``None`` and ``relaxed``
    counts edge scans; the run stops early once ``dst`` is settled.
    """
    n = len(adj)
    dist = [math.inf] * n
    hops = [0] * n
    pred = [None] * n
    done = [False] * n
    dist[src] = 0.0
    heap = [(0.0, 0, src)]
    relaxed = 0
    while heap:
        d, h, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        if u == dst:
            break
        for entry in adj[u]:
            v = entry[0]
            if done[v] or (banned_vertices and v in banned_vertices) or (
                    banned_arcs and entry[3] in banned_arcs):
                continue
            relaxed += 1
            nd = d + weight(entry)
            if nd < dist[v] or (nd == dist[v] and h + 1 < hops[v]):
                dist[v] = nd
                hops[v] = h + 1
                pred[v] = (u, entry[3])
                heapq.heappush(heap, (nd, h + 1, v))
    return dist, hops, pred, relaxed


def trace(pred, src, dst):
    """Vertex and arc sequences from ``src`` to ``dst`` following ``pred``."""
    verts, arcs = [dst], []
    v = dst
    while v != src:
        u, a = pred[v]
        verts.append(u)
        arcs.append(a)
        v = u
    verts.reverse()
    arcs.reverse()
    return tuple(verts), tuple(arcs)


def reverse_distances(rev_adj, dst, metric):
    """Best distance from every vertex to ``dst`` on ``path_metrics[metric]``."""
    dist, _, _, _ = dijkstra(rev_adj, dst, lambda e: e[1][metric])
    return dist
