"""Small hand-built instances used by the worked examples and tests.

``figure3`` is a reconstruction: only link (X,A) = [5, 5, 4], the distance
vectors of X-A-Y (6, 5) and X-B-Y (2, 5), the A-Y delay of 1 and the
bandwidth violation on B-Y are fixed by the source; the remaining values
were chosen so every one of those facts holds at once.
"""
from __future__ import annotations

from .graph import Graph

X, A, B, Y = 0, 1, 2, 3

# (u, v, bandwidth, delay, cost-metric)
_FIG3_LINKS = [
    (X, A, 5, 5, 4),
    (X, B, 5, 1, 1),
    (A, Y, 5, 1, 1),
    (B, Y, 3, 1, 4),
    (A, B, 5, 3, 2),
]


def figure3() -> Graph:
    """Four-vertex network with [bandwidth, delay, cost] links and unit objective cost."""
    g = Graph(4, directed=False, l_arity=0, p_arity=2)
    for u, v, bw, delay, cost in _FIG3_LINKS:
        g.add_edge(u, v, bw, (), (delay, cost), 1.0)
    g.labels.update({X: "X", A: "A", B: "B", Y: "Y"})
    return g


def figure5() -> Graph:
    """Same network with the delay as its single path metric."""
    g = Graph(4, directed=False, l_arity=0, p_arity=1)
    for u, v, bw, delay, _ in _FIG3_LINKS:
        g.add_edge(u, v, bw, (), (delay,), 1.0)
    g.labels.update({X: "X", A: "A", B: "B", Y: "Y"})
    return g


def figure1() -> Graph:
    """Triangle A, B, C: the direct A-B link is slow, the detour via C is fast."""
    g = Graph(3, directed=False, l_arity=0, p_arity=1)
    a, b, c = 0, 1, 2
    g.add_edge(a, b, 10, (), (15,), 1.0)
    g.add_edge(a, c, 10, (), (4,), 1.0)
    g.add_edge(c, b, 10, (), (4,), 1.0)
    g.labels.update({a: "A", b: "B", c: "C"})
    return g
