"""Substrate network model, constraint evaluation and path arithmetic.

A :class:`Graph` holds dense integer vertices and edges carrying an
:class:`EdgeAttr`.  Undirected edges are stored as two arcs that share one
residual-capacity cell, so allocating along either direction consumes the
same physical link.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import ConfigurationError, GraphFormatError, InvalidPathError

AT_LEAST = "at-least"
AT_MOST = "at-most"
FORMAT_VERSION = 1


def format_float(x: float) -> str:
    """Shortest round-trip text for ``x``; integral values drop the ``.0``."""
    x = float(x)
    if math.isfinite(x) and x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


@dataclass(frozen=True)
class EdgeAttr:
    capacity: float
    link_metrics: tuple = ()
    path_metrics: tuple = ()
    cost: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "capacity", float(self.capacity))
        object.__setattr__(self, "link_metrics", tuple(float(x) for x in self.link_metrics))
        object.__setattr__(self, "path_metrics", tuple(float(x) for x in self.path_metrics))
        object.__setattr__(self, "cost", float(self.cost))


@dataclass(frozen=True)
class LinkBound:
    """A per-edge bound on ``link_metrics[metric]``."""

    metric: int
    direction: str
    bound: float

    def __post_init__(self):
        if self.direction not in (AT_LEAST, AT_MOST):
            raise ConfigurationError(f"unknown bound direction {self.direction!r}")
        if self.metric < 0:
            raise ConfigurationError("link metric index must be non-negative")

    def holds(self, value: float) -> bool:
        if self.direction == AT_LEAST:
            return value >= self.bound
        return value <= self.bound


@dataclass(frozen=True)
class ConstraintSpec:
    """A routing request: bandwidth ``demand``, per-edge and end-to-end bounds.

    ``path_bounds[i]`` caps the sum of ``path_metrics[i]`` along the path;
    use ``math.inf`` for an unconstrained metric.
    """

    demand: float
    link_bounds: tuple = ()
    path_bounds: tuple = ()

    def __post_init__(self):
        demand = float(self.demand)
        if not demand > 0:
            raise ConfigurationError(f"demand must be positive, got {self.demand!r}")
        object.__setattr__(self, "demand", demand)
        bounds = tuple(b if isinstance(b, LinkBound) else LinkBound(*b) for b in self.link_bounds)
        object.__setattr__(self, "link_bounds", bounds)
        object.__setattr__(self, "path_bounds", tuple(float(b) for b in self.path_bounds))

    @property
    def p(self) -> int:
        return len(self.path_bounds)

    def with_demand(self, demand: float) -> "ConstraintSpec":
        return ConstraintSpec(demand, self.link_bounds, self.path_bounds)

    def check_arity(self, l_arity: int, p_arity: int) -> None:
        if len(self.path_bounds) != p_arity:
            raise ConfigurationError(
                f"spec has {len(self.path_bounds)} path bounds, graph has {p_arity} path metrics"
            )
        for b in self.link_bounds:
            if b.metric >= l_arity:
                raise ConfigurationError(
                    f"link bound on metric {b.metric}, graph has {l_arity} link metrics"
                )


@dataclass(frozen=True)
class PathLabel:
    """A path with its accumulated cost and additive path metrics."""

    vertices: tuple
    cost: float
    path_dist: tuple
    arcs: tuple = field(default=(), compare=False)

    @property
    def hop_count(self) -> int:
        return len(self.vertices) - 1

    @property
    def vector(self) -> tuple:
        """Comparison vector used by dominance: ``path_dist`` followed by cost."""
        return self.path_dist + (self.cost,)

    def sort_key(self):
        return (self.cost, self.hop_count, self.vertices)


class Graph:
    """Directed or undirected multigraph with capacities and metric vectors.

    Parameters
    ----------
    n : int
        Number of vertices, indexed ``0..n-1``.
    directed : bool
    l_arity, p_arity : int
        Lengths of every edge's ``link_metrics`` and ``path_metrics``.
    """

    def __init__(self, n: int, directed: bool = False, l_arity: int = 0, p_arity: int = 0):
        if n < 1:
            raise ConfigurationError("graph needs at least one vertex")
        self.n = int(n)
        self.directed = bool(directed)
        self.l_arity = int(l_arity)
        self.p_arity = int(p_arity)
        self.edges: list[tuple[int, int, EdgeAttr]] = []
        self.residual: list[float] = []
        self.arc_tail: list[int] = []
        self.arc_head: list[int] = []
        self.arc_edge: list[int] = []
        self.out_arcs: list[list[int]] = [[] for _ in range(self.n)]
        self.in_arcs: list[list[int]] = [[] for _ in range(self.n)]
        self.labels: dict[int, str] = {}
        # (width, height, propagation rate) of the plane the topology was drawn on
        self.plane: tuple[float, float, float] | None = None
        self.vertex_capacity: list[float] | None = None
        self.vertex_residual: list[float] | None = None
        self._table = None

    # -- construction -----------------------------------------------------
    def add_edge(self, u, v, capacity, link_metrics=(), path_metrics=(), cost=0.0) -> int:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise ConfigurationError(f"self-loop on vertex {u} rejected")
        attr = capacity if isinstance(capacity, EdgeAttr) else EdgeAttr(
            capacity, link_metrics, path_metrics, cost)
        if len(attr.link_metrics) != self.l_arity or len(attr.path_metrics) != self.p_arity:
            raise ConfigurationError(
                f"edge ({u},{v}) metric arity ({len(attr.link_metrics)},{len(attr.path_metrics)})"
                f" != graph arity ({self.l_arity},{self.p_arity})"
            )
        if attr.capacity < 0 or attr.cost < 0:
            raise ConfigurationError("capacity and cost must be non-negative")
        if not all(math.isfinite(x) for x in attr.path_metrics):
            raise ConfigurationError("path metrics must be finite")
        eid = len(self.edges)
        self._table = None
        self.edges.append((int(u), int(v), attr))
        self.residual.append(attr.capacity)
        self._add_arc(u, v, eid)
        if not self.directed:
            self._add_arc(v, u, eid)
        return eid

    def _add_arc(self, u, v, eid):
        a = len(self.arc_tail)
        self.arc_tail.append(int(u))
        self.arc_head.append(int(v))
        self.arc_edge.append(eid)
        self.out_arcs[u].append(a)
        self.in_arcs[v].append(a)

    def _check_vertex(self, v):
        if not (isinstance(v, (int,)) or hasattr(v, "__index__")) or not 0 <= v < self.n:
            raise ConfigurationError(f"vertex {v!r} out of range [0, {self.n})")

    def set_vertex_capacity(self, caps: Sequence[float]) -> None:
        if len(caps) != self.n:
            raise ConfigurationError("one capacity per vertex required")
        self.vertex_capacity = [float(c) for c in caps]
        self.vertex_residual = list(self.vertex_capacity)

    # -- queries ------------------------------------------------------------
    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_arcs(self) -> int:
        return len(self.arc_tail)

    def mean_degree(self) -> float:
        if self.directed:
            return self.num_edges / self.n
        return 2.0 * self.num_edges / self.n

    def attr(self, arc: int) -> EdgeAttr:
        return self.edges[self.arc_edge[arc]][2]

    def arcs_between(self, u: int, v: int) -> list[int]:
        return [a for a in self.out_arcs[u] if self.arc_head[a] == v]

    def name(self, v: int) -> str:
        return self.labels.get(v, str(v))

    def vertex_by_name(self, token: str) -> int:
        for v, s in self.labels.items():
            if s == token:
                return v
        try:
            v = int(token)
        except ValueError:
            raise ConfigurationError(f"unknown vertex {token!r}") from None
        self._check_vertex(v)
        return v

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for a in self.out_arcs[u] + self.in_arcs[u]:
                for w in (self.arc_head[a], self.arc_tail[a]):
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return len(seen) == self.n

    def utilizations(self) -> list[float]:
        """Per-edge ``1 - residual/capacity`` (zero-capacity edges count as idle)."""
        out = []
        for (_, _, attr), r in zip(self.edges, self.residual):
            out.append(0.0 if attr.capacity <= 0 else 1.0 - r / attr.capacity)
        return out

    def min_cost(self) -> float:
        return min((e[2].cost for e in self.edges), default=0.0)

    # -- residual bookkeeping ----------------------------------------------
    def copy(self) -> "Graph":
        g = Graph(self.n, self.directed, self.l_arity, self.p_arity)
        for u, v, attr in self.edges:
            g.add_edge(u, v, attr)
        g.residual = list(self.residual)
        g.labels = dict(self.labels)
        g.plane = self.plane
        if self.vertex_capacity is not None:
            g.vertex_capacity = list(self.vertex_capacity)
            g.vertex_residual = list(self.vertex_residual)
        return g

    def reset_residual(self) -> None:
        self.residual = [attr.capacity for _, _, attr in self.edges]
        if self.vertex_capacity is not None:
            self.vertex_residual = list(self.vertex_capacity)

    def allocate(self, label: PathLabel, amount: float) -> None:
        """Reserve ``amount`` on every edge of ``label``; all-or-nothing."""
        arcs = label.arcs or path_distance(self, label.vertices).arcs
        edges = [self.arc_edge[a] for a in arcs]
        for e in edges:
            if self.residual[e] < amount:
                raise ConfigurationError(f"edge {e} lacks {amount} residual capacity")
        for e in edges:
            self.residual[e] -= amount

    def release(self, label: PathLabel, amount: float) -> None:
        arcs = label.arcs or path_distance(self, label.vertices).arcs
        for a in arcs:
            e = self.arc_edge[a]
            self.residual[e] = min(self.edges[e][2].capacity, self.residual[e] + amount)

    # -- pre-routing ----------------------------------------------------------
    def arc_table(self) -> "ArcTable":
        """Structure-only view of the arcs, rebuilt after any ``add_edge``."""
        if self._table is None:
            self._table = ArcTable(self)
        return self._table

    def feasible_edges(self, spec: ConstraintSpec) -> list[bool]:
        """Per edge: does it pass :func:`edge_feasible` at its current residual?"""
        spec.check_arity(self.l_arity, self.p_arity)
        demand = spec.demand
        if not spec.link_bounds:
            return [r >= demand for r in self.residual]
        return [r >= demand and all(b.holds(e[2].link_metrics[b.metric]) for b in spec.link_bounds)
                for r, e in zip(self.residual, self.edges)]

    def feasible_adjacency(self, spec: ConstraintSpec, reverse: bool = False):
        """Adjacency restricted to link-feasible arcs.

        Returns, per vertex, a list of ``(neighbor, path_metrics, cost, arc)``
        sorted by neighbor.  Parallel arcs dominated by a sibling on
        ``path_metrics + (cost,)`` are dropped.  With ``reverse`` the lists hold
        incoming arcs keyed by their tail.
        """
        ok = self.feasible_edges(spec)
        table = self.arc_table()
        rows = table.in_rows if reverse else table.out_rows
        adj = []
        for v in range(self.n):
            row = [(x[0], x[1], x[2], x[3]) for x in rows[v] if ok[x[4]]]
            if table.parallel[reverse][v] and len(row) > 1:
                row = _drop_dominated_parallels(row)
            adj.append(row)
        return adj


class ArcTable:
    """Arc structure of a graph in the shapes the search loops want.

    ``out_rows[u]`` / ``in_rows[v]`` list ``(neighbor, path_metrics, cost,
    arc, edge, metrics_and_cost, metrics_and_one)`` sorted by neighbor;
    ``parallel[reverse][v]`` flags rows holding two arcs to one neighbor.
    The numpy arrays index arcs: ``tail``, ``head``, ``edge`` and the
    weight matrices ``w_cost`` / ``w_unit`` of shape ``(arcs, p + 1)``.
    """

    def __init__(self, g: Graph):
        p = g.p_arity
        out_rows = [[] for _ in range(g.n)]
        in_rows = [[] for _ in range(g.n)]
        w_cost = np.zeros((g.num_arcs, p + 1))
        w_unit = np.ones((g.num_arcs, p + 1))
        for a in range(g.num_arcs):
            u, v, e = g.arc_tail[a], g.arc_head[a], g.arc_edge[a]
            attr = g.edges[e][2]
            pm = attr.path_metrics
            ext_c = pm + (attr.cost,)
            ext_u = pm + (1.0,)
            out_rows[u].append((v, pm, attr.cost, a, e, ext_c, ext_u))
            in_rows[v].append((u, pm, attr.cost, a, e, ext_c, ext_u))
            w_cost[a] = ext_c
            w_unit[a, :p] = pm
        key = lambda t: (t[0], t[1], t[2], t[3])  # noqa: E731
        for rows in (out_rows, in_rows):
            for row in rows:
                row.sort(key=key)
        self.out_rows = out_rows
        self.in_rows = in_rows
        self.parallel = (
            [len({x[0] for x in row}) != len(row) for row in out_rows],
            [len({x[0] for x in row}) != len(row) for row in in_rows],
        )
        self.tail = np.asarray(g.arc_tail, dtype=np.int64)
        self.head = np.asarray(g.arc_head, dtype=np.int64)
        self.edge = np.asarray(g.arc_edge, dtype=np.int64)
        self.w_cost = w_cost
        self.w_unit = w_unit
        self.min_cost = g.min_cost()


def _drop_dominated_parallels(row):
    kept = []
    for entry in row:
        vec = entry[1] + (entry[2],)
        dominated = False
        for other in row:
            if other is entry or other[0] != entry[0]:
                continue
            ovec = other[1] + (other[2],)
            if ovec != vec and all(a <= b for a, b in zip(ovec, vec)):
                dominated = True
                break
            if ovec == vec and other[3] < entry[3]:
                dominated = True
                break
        if not dominated:
            kept.append(entry)
    return kept


# ---------------------------------------------------------------------------
# constraint evaluation
# ---------------------------------------------------------------------------
def edge_feasible(attr: EdgeAttr, spec: ConstraintSpec, residual: float | None = None,
                  _checked: bool = False) -> bool:
    """True iff ``residual >= demand`` and every link bound holds on ``attr``."""
    if not _checked:
        for b in spec.link_bounds:
            if b.metric >= len(attr.link_metrics):
                raise ConfigurationError(
                    f"link bound on metric {b.metric}, edge has {len(attr.link_metrics)}")
    if residual is None:
        residual = attr.capacity
    if residual < spec.demand:
        return False
    for b in spec.link_bounds:
        if not b.holds(attr.link_metrics[b.metric]):
            return False
    return True


def path_distance(g: Graph, vertices: Sequence[int], spec: ConstraintSpec | None = None,
                  arcs: Sequence[int] | None = None) -> PathLabel:
    """Sum cost and path metrics along ``vertices``.

    Where parallel arcs exist the link-feasible one (if ``spec`` is given)
    with the smallest ``(cost, path_metrics)`` is used, unless ``arcs`` pins
    the choice.  Feasibility is not checked.
    """
    vertices = tuple(int(v) for v in vertices)
    if not vertices:
        raise InvalidPathError("empty vertex sequence")
    for v in vertices:
        g._check_vertex(v)
    chosen = []
    for i in range(len(vertices) - 1):
        u, v = vertices[i], vertices[i + 1]
        if arcs is not None:
            a = arcs[i]
            if g.arc_tail[a] != u or g.arc_head[a] != v:
                raise InvalidPathError(f"arc {a} does not join {u}->{v}")
            chosen.append(a)
            continue
        cands = g.arcs_between(u, v)
        if not cands:
            raise InvalidPathError(f"vertices {u} and {v} are not adjacent")
        if spec is not None:
            feas = [a for a in cands
                    if edge_feasible(g.attr(a), spec, g.residual[g.arc_edge[a]])]
            cands = feas or cands
        chosen.append(min(cands, key=lambda a: (g.attr(a).cost, g.attr(a).path_metrics, a)))
    cost = 0.0
    dist = [0.0] * g.p_arity
    for a in chosen:
        attr = g.attr(a)
        cost += attr.cost
        for i, w in enumerate(attr.path_metrics):
            dist[i] += w
    return PathLabel(vertices, cost, tuple(dist), tuple(chosen))


def path_feasible(label: PathLabel, spec: ConstraintSpec) -> bool:
    if len(label.path_dist) != len(spec.path_bounds):
        raise ConfigurationError("label and spec path arity differ")
    return all(d <= b for d, b in zip(label.path_dist, spec.path_bounds))


def path_link_feasible(g: Graph, label: PathLabel, spec: ConstraintSpec) -> bool:
    """Every arc of ``label`` passes :func:`edge_feasible` at current residuals."""
    arcs = label.arcs or path_distance(g, label.vertices, spec).arcs
    return all(edge_feasible(g.attr(a), spec, g.residual[g.arc_edge[a]]) for a in arcs)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------
def dumps(g: Graph) -> str:
    buf = io.StringIO()
    write_graph(g, buf)
    return buf.getvalue()


def write_graph(g: Graph, dest) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            write_graph(g, fh)
        return
    w = dest.write
    w(f"# format-version {FORMAT_VERSION}\n")
    w(f"graph {'directed' if g.directed else 'undirected'} {g.n} {g.l_arity} {g.p_arity}\n")
    if g.plane is not None:
        w("plane " + " ".join(format_float(x) for x in g.plane) + "\n")
    for v in sorted(g.labels):
        w(f"label {v} {g.labels[v]}\n")
    if g.vertex_capacity is not None:
        for v, c in enumerate(g.vertex_capacity):
            w(f"vcap {v} {format_float(c)}\n")
    for u, v, attr in g.edges:
        fields = [str(u), str(v), format_float(attr.capacity)]
        fields += [format_float(x) for x in attr.link_metrics]
        fields += [format_float(x) for x in attr.path_metrics]
        fields.append(format_float(attr.cost))
        w("edge " + " ".join(fields) + "\n")


def loads(text: str) -> Graph:
    return read_graph(io.StringIO(text))


def read_graph(src) -> Graph:
    """Parse the line-oriented graph format; errors carry the line number."""
    if isinstance(src, (str, Path)):
        with open(src, encoding="utf-8") as fh:
            return read_graph(fh)
    g = None
    vcaps = {}
    for lineno, raw in enumerate(src, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        try:
            if kind == "graph":
                if g is not None:
                    raise GraphFormatError("duplicate graph header", lineno)
                if len(tok) != 5 or tok[1] not in ("directed", "undirected"):
                    raise GraphFormatError(
                        "expected 'graph <directed|undirected> <n> <l> <p>'", lineno)
                g = Graph(int(tok[2]), tok[1] == "directed", int(tok[3]), int(tok[4]))
                continue
            if g is None:
                raise GraphFormatError(f"{kind!r} record before graph header", lineno)
            if kind == "edge":
                want = 4 + g.l_arity + g.p_arity + 1
                if len(tok) != want:
                    raise GraphFormatError(f"edge record needs {want} fields, got {len(tok)}", lineno)
                nums = [float(x) for x in tok[3:]]
                l, p = g.l_arity, g.p_arity
                g.add_edge(int(tok[1]), int(tok[2]), nums[0], nums[1:1 + l],
                           nums[1 + l:1 + l + p], nums[1 + l + p])
            elif kind == "label":
                if len(tok) != 3:
                    raise GraphFormatError("expected 'label <v> <name>'", lineno)
                v = int(tok[1])
                g._check_vertex(v)
                g.labels[v] = tok[2]
            elif kind == "plane":
                if len(tok) != 4:
                    raise GraphFormatError("expected 'plane <width> <height> <rate>'", lineno)
                g.plane = tuple(float(x) for x in tok[1:])
            elif kind == "vcap":
                if len(tok) != 3:
                    raise GraphFormatError("expected 'vcap <v> <capacity>'", lineno)
                vcaps[int(tok[1])] = float(tok[2])
            else:
                raise GraphFormatError(f"unknown record {kind!r}", lineno)
        except GraphFormatError:
            raise
        except (ValueError, ConfigurationError) as exc:
            raise GraphFormatError(str(exc), lineno) from exc
    if g is None:
        raise GraphFormatError("missing graph header")
    if vcaps:
        if sorted(vcaps) != list(range(g.n)):
            raise GraphFormatError("vcap records must cover every vertex")
        g.set_vertex_capacity([vcaps[v] for v in range(g.n)])
    return g


def from_edges(n: int, edges: Iterable[tuple], directed: bool = False, l_arity: int = 0,
               p_arity: int = 0, labels: dict | None = None) -> Graph:
    """Build a graph from ``(u, v, capacity, link_metrics, path_metrics, cost)`` tuples."""
    g = Graph(n, directed, l_arity, p_arity)
    for e in edges:
        g.add_edge(*e)
    if labels:
        g.labels.update(labels)
    return g
