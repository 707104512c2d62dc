import math

import pytest

from nmroute import fixtures
from nmroute.exceptions import ConfigurationError, GraphFormatError, InvalidPathError
from nmroute.graph import (AT_LEAST, AT_MOST, ConstraintSpec, EdgeAttr, Graph, LinkBound,
                           dumps, edge_feasible, format_float, loads, path_distance,
                           path_feasible, path_link_feasible)
from oracle import random_instance

X, A, B, Y = fixtures.X, fixtures.A, fixtures.B, fixtures.Y


def test_edge_feasible_capacity_meets_demand():
    attr = EdgeAttr(5, (), (5, 4), 1)
    assert edge_feasible(attr, ConstraintSpec(5, (), (5, 5)), residual=5)


def test_edge_feasible_rejects_thin_link():
    g = fixtures.figure3()
    (arc,) = g.arcs_between(B, Y)
    assert not edge_feasible(g.attr(arc), ConstraintSpec(5, (), (5, 5)), g.residual[g.arc_edge[arc]])


def test_edge_feasible_without_link_bounds():
    assert edge_feasible(EdgeAttr(2), ConstraintSpec(1), residual=1.5)


def test_edge_feasible_link_bounds():
    attr = EdgeAttr(10, (3.0, 7.0))
    spec = ConstraintSpec(1, ((0, AT_LEAST, 3.0), (1, AT_MOST, 7.0)))
    assert edge_feasible(attr, spec)
    assert not edge_feasible(attr, ConstraintSpec(1, ((1, AT_MOST, 6.9),)))


def test_edge_feasible_arity_mismatch():
    with pytest.raises(ConfigurationError):
        edge_feasible(EdgeAttr(10, ()), ConstraintSpec(1, ((0, AT_LEAST, 1),)))


def test_spec_rejects_nonpositive_demand():
    with pytest.raises(ConfigurationError):
        ConstraintSpec(0)
    with pytest.raises(ConfigurationError):
        LinkBound(0, "sideways", 1)


def test_path_distance_worked_example():
    label = path_distance(fixtures.figure3(), [X, A, Y])
    assert label.path_dist == (6.0, 5.0)
    assert label.hop_count == 2


def test_path_distance_single_vertex():
    label = path_distance(fixtures.figure3(), [Y])
    assert (label.hop_count, label.cost, label.path_dist) == (0, 0.0, (0.0, 0.0))


def test_path_distance_matches_naive_sum():
    g, *_ = random_instance(11, n_range=(6, 6))
    # walk the first simple path out of vertex 0 greedily
    verts, seen = [0], {0}
    while True:
        nxt = [g.arc_head[a] for a in g.out_arcs[verts[-1]] if g.arc_head[a] not in seen]
        if not nxt or len(verts) == 5:
            break
        verts.append(min(nxt))
        seen.add(verts[-1])
    label = path_distance(g, verts)
    cost, dist = 0.0, [0.0] * g.p_arity
    for u, v in zip(verts, verts[1:]):
        arc = min(g.arcs_between(u, v),
                  key=lambda a: (g.attr(a).cost, g.attr(a).path_metrics, a))
        cost += g.attr(arc).cost
        dist = [d + w for d, w in zip(dist, g.attr(arc).path_metrics)]
    assert label.cost == cost and label.path_dist == tuple(dist)


def test_path_distance_rejects_gap():
    with pytest.raises(InvalidPathError):
        path_distance(fixtures.figure3(), [X, Y])


@pytest.mark.parametrize("delay, ok", [(6.0, False), (5.0, True)])
def test_path_feasible_boundary(delay, ok):
    g = fixtures.figure5()
    label = path_distance(g, [X, A, Y] if delay == 6.0 else [X, B, A, Y])
    assert label.path_dist == (delay,)
    assert path_feasible(label, ConstraintSpec(5, (), (5,))) is ok


def test_path_feasible_zero_length():
    label = path_distance(fixtures.figure3(), [X])
    assert path_feasible(label, ConstraintSpec(1, (), (0, 0)))


def test_self_loop_rejected():
    with pytest.raises(ConfigurationError):
        Graph(2).add_edge(1, 1, 1)


def test_undirected_arcs_share_residual():
    g = fixtures.figure3()
    label = path_distance(g, [Y, A])
    g.allocate(label, 2)
    back = path_distance(g, [A, Y])
    assert g.residual[g.arc_edge[back.arcs[0]]] == 3
    assert not path_link_feasible(g, back, ConstraintSpec(4, (), (math.inf, math.inf)))
    g.release(label, 2)
    assert g.residual == [attr.capacity for _, _, attr in g.edges]


def test_allocate_is_all_or_nothing():
    g = fixtures.figure3()
    before = list(g.residual)
    with pytest.raises(ConfigurationError):
        g.allocate(path_distance(g, [X, B, Y]), 4)
    assert g.residual == before


def test_text_format_round_trip():
    g = fixtures.figure3()
    g.set_vertex_capacity([1.5, 2, 3, 0.1])
    text = dumps(g)
    assert dumps(loads(text)) == text
    assert text.startswith("# format-version 1\ngraph undirected 4 0 2\n")


def test_text_format_error_has_line_number():
    with pytest.raises(GraphFormatError, match="line 3"):
        loads("graph directed 3 0 1\nedge 0 1 1 1 1\nedge 1 2 x 1 1\n")


def test_format_float_shortest_round_trip():
    assert format_float(5.0) == "5"
    assert format_float(0.1) == "0.1"
    assert float(format_float(1 / 3)) == 1 / 3
    assert format_float(math.inf) == "inf"


def test_shipped_fixture_files_match_builders():
    from importlib.resources import files
    for name in ("figure1", "figure3", "figure5"):
        text = files("nmroute").joinpath("data", f"{name}.txt").read_text(encoding="utf-8")
        assert text == dumps(getattr(fixtures, name)())
