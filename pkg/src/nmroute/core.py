"""Neighborhoods Method for any number of link and path constraints.

The search alternates a forward pass, which grows hop-indexed neighborhoods
from the source, with a backward pass that rebuilds every simple path of the
current hop count from the destination while only stepping into vertices of
the preceding neighborhood.  Candidates are validated in ascending hop
count; the cheapest feasible ones are kept.

Each neighborhood maps a vertex to the component-wise smallest
``(path metrics..., cost)`` over walks of exactly that many hops from the
source (a label-correcting sweep per level).  Walks never re-enter the
source or leave the destination, and vertices whose record already breaks
a path bound are left out.

Two prunings can be toggled:

* dominance - a partial path is dropped when another partial path at the
  same vertex, or a feasible complete path, is no worse on every
  ``(path metrics..., cost)`` component and better on one.  The incumbent's
  cost also acts as a bound, both on partial paths and on neighborhood
  records.
* look-back - a partial path from ``v`` to the destination is dropped when
  its distance plus ``v``'s record in the neighborhood it would occupy
  breaks a path bound or the incumbent's cost.

The backward search tree survives across passes, so a partial path is
generated (and counted) once however many passes revisit it.  The search
stops once the hop budget is spent, no longer path can beat the incumbent,
a neighborhood comes out empty, or the tree has no untried extension left.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (ConfigurationError, MaxLengthExceeded, NoFeasiblePath,
                         SearchTimeout, Unreachable)
from .graph import ConstraintSpec, Graph, PathLabel

OBJECTIVES = ("cost", "hops")


@dataclass
class SearchOptions:
    dominance: bool = True
    look_back: bool = False
    k: int = 1
    max_hops: int | None = None
    objective: str = "cost"
    timeout: float | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError("k must be at least 1")
        if self.objective not in OBJECTIVES:
            raise ConfigurationError(f"objective must be one of {OBJECTIVES}")
        if self.max_hops is not None and self.max_hops < 0:
            raise ConfigurationError("max_hops must be non-negative")


@dataclass
class Counters:
    traversed_paths: int = 0
    dominance_pruned: int = 0
    infeasibility_pruned: int = 0
    neighborhoods_built: int = 0

    def as_dict(self) -> dict:
        return {
            "traversed_paths": self.traversed_paths,
            "dominance_pruned": self.dominance_pruned,
            "infeasibility_pruned": self.infeasibility_pruned,
            "neighborhoods_built": self.neighborhoods_built,
        }


@dataclass
class RouteResult:
    paths: list
    counters: Counters = field(default_factory=Counters)
    elapsed: float = 0.0
    # hop counts validated, in order (NM) or the level structure (fast variants)
    trace: list = field(default_factory=list)
    levels: object = None

    @property
    def path(self) -> PathLabel | None:
        return self.paths[0] if self.paths else None

    @property
    def cost(self) -> float:
        return self.paths[0].cost

    @property
    def hops(self) -> int:
        return self.paths[0].hop_count


@dataclass
class Neighborhoods:
    """``levels[k]`` maps each vertex reachable in exactly ``k`` feasible hops
    to its best ``(path metrics..., cost)`` from the source at that hop count."""

    levels: list
    source: int
    destination: int

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def __len__(self):
        return len(self.levels)


def dominates(a, b) -> bool:
    """True iff ``a`` is no worse than ``b`` everywhere and strictly better once.

    Accepts :class:`PathLabel` objects (compared on ``path_dist + (cost,)``)
    or plain sequences.
    """
    va = a.vector if isinstance(a, PathLabel) else tuple(a)
    vb = b.vector if isinstance(b, PathLabel) else tuple(b)
    if len(va) != len(vb):
        raise ConfigurationError("dominance needs equal-length vectors")
    strict = False
    for x, y in zip(va, vb):
        if x > y:
            return False
        if x < y:
            strict = True
    return strict


def look_back_violates(partial_dist, best_from_source, bounds) -> bool:
    """The look-back test for a partial path from ``v`` to the destination."""
    return any(d + s > b for d, s, b in zip(partial_dist, best_from_source, bounds))


class _Rows:
    """Per-vertex ``(neighbor, metrics_and_objective, arc)`` lists, built on first use."""

    __slots__ = ("base", "ok", "slot", "parallel", "cache")

    def __init__(self, base, ok, slot, parallel):
        self.base, self.ok, self.slot, self.parallel = base, ok, slot, parallel
        self.cache = {}

    def __getitem__(self, u):
        row = self.cache.get(u)
        if row is None:
            ok, slot = self.ok, self.slot
            row = [(x[0], x[slot], x[3]) for x in self.base[u] if ok[x[4]]]
            if self.parallel[u] and len(row) > 1:
                row = _drop_parallel(row)
            self.cache[u] = row
        return row


def _drop_parallel(row):
    kept = []
    for entry in row:
        v, vec, a = entry
        dominated = False
        for other in row:
            if other is entry or other[0] != v:
                continue
            ovec = other[1]
            if ovec == vec:
                if other[2] < a:
                    dominated = True
                    break
            elif all(x <= y for x, y in zip(ovec, vec)):
                dominated = True
                break
        if not dominated:
            kept.append(entry)
    return kept


class _Search:
    """Per-query working state shared by the forward and backward passes."""

    CHECK_EVERY = 2048
    # below this many vertices a level is swept in Python, above it with numpy
    DENSE_LEVEL = 24

    def __init__(self, g: Graph, src: int, dst: int, spec: ConstraintSpec, opts: SearchOptions):
        g._check_vertex(src)
        g._check_vertex(dst)
        self.g, self.src, self.dst, self.spec, self.opts = g, src, dst, spec, opts
        self.bounds = spec.path_bounds
        self.p = len(self.bounds)
        unit = opts.objective == "hops"
        self.ok = g.feasible_edges(spec)
        table = self.table = g.arc_table()
        slot = 6 if unit else 5
        self.out_adj = _Rows(table.out_rows, self.ok, slot, table.parallel[0])
        self.in_adj = _Rows(table.in_rows, self.ok, slot, table.parallel[1])
        self._arrays = None
        self.counters = Counters()
        self.store: dict[int, list] = {}
        self.root = None
        self.front: list = []
        self.best: list = []
        self.deadline = None if opts.timeout is None else time.perf_counter() + opts.timeout
        self._tick = 0
        self.min_arc_cost = 1.0 if unit else table.min_cost

    # -- shared helpers -------------------------------------------------------
    def check_deadline(self):
        if self.deadline is not None and time.perf_counter() > self.deadline:
            err = SearchTimeout(f"query {self.src}->{self.dst} exceeded {self.opts.timeout}s")
            err.counters = self.counters
            raise err

    def reachable(self) -> bool:
        seen = {self.src}
        stack = [self.src]
        while stack:
            u = stack.pop()
            if u == self.dst:
                return True
            for v, _, _ in self.out_adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return False

    def failure(self, what: str):
        """The error to raise when no path was found: unreachable or infeasible."""
        if not self.reachable():
            err = Unreachable(f"{self.dst} is unreachable from {self.src}")
        else:
            err = NoFeasiblePath(f"no feasible path {self.src}->{self.dst}{what}")
        err.counters = self.counters
        return err

    @property
    def use_dominance(self) -> bool:
        # a k-best search cannot discard dominated candidates: they may be among the k
        return self.opts.dominance and self.opts.k == 1

    def kth_cost(self) -> float:
        if len(self.best) < self.opts.k:
            return math.inf
        return self.best[self.opts.k - 1][0]

    def offer(self, obj: float, label: PathLabel, vec: tuple) -> None:
        best = self.best
        best.append((obj, label))
        best.sort(key=lambda t: (t[0], t[1].hop_count, t[1].vertices))
        del best[self.opts.k:]
        if self.use_dominance:
            if not any(c == vec or all(x <= y for x, y in zip(c, vec)) for c in self.front):
                self.front[:] = [c for c in self.front
                                 if not all(x <= y for x, y in zip(vec, c))] + [vec]

    def make_label(self, verts, arcs, vec) -> PathLabel:
        if self.opts.objective == "hops":
            cost = 0.0
            for a in arcs:
                cost += self.g.attr(a).cost
        else:
            cost = vec[-1]
        return PathLabel(tuple(verts), cost, tuple(vec[:-1]), tuple(arcs))

    # -- forward pass -----------------------------------------------------------
    def first_level(self) -> dict:
        return {self.src: (0.0,) * (self.p + 1)}

    def next_level(self, prev: dict) -> dict:
        bounds = self.bounds
        p = self.p
        cap = self.kth_cost() if self.opts.dominance else math.inf
        if len(prev) <= self.DENSE_LEVEL:
            new = self._sweep(prev)
            new = {v: new[v] for v in sorted(new)
                   if new[v][p] <= cap and all(x <= b for x, b in zip(new[v], bounds))}
        else:
            new = self._sweep_dense(prev, cap, bounds)
        self.counters.neighborhoods_built += 1
        return new

    def _sweep(self, prev: dict) -> dict:
        new: dict[int, tuple] = {}
        out_adj = self.out_adj
        src, dst = self.src, self.dst
        for u, best_u in prev.items():
            if u == dst:
                continue  # a simple path ends at dst; walks through it lead nowhere
            for v, w, _ in out_adj[u]:
                if v == src:
                    continue
                cand = tuple([x + y for x, y in zip(best_u, w)])
                cur = new.get(v)
                if cur is None:
                    new[v] = cand
                elif cur != cand:
                    new[v] = tuple([x if x <= y else y for x, y in zip(cur, cand)])
        return new

    def _sweep_dense(self, prev: dict, cap: float, bounds: tuple) -> dict:
        if self._arrays is None:
            t = self.table
            ok = np.fromiter(self.ok, dtype=bool, count=len(self.ok))
            mask = ok[t.edge] & (t.head != self.src) & (t.tail != self.dst)
            heads = t.head[mask]
            order = np.argsort(heads, kind="stable")
            w = t.w_unit if self.opts.objective == "hops" else t.w_cost
            self._arrays = (t.tail[mask][order], heads[order], w[mask][order])
        tails, heads, w = self._arrays
        p = self.p
        arr = np.full((self.g.n, p + 1), math.inf)
        arr[np.fromiter(prev.keys(), dtype=np.int64, count=len(prev))] = list(prev.values())
        sel = arr[tails, p] < math.inf
        h = heads[sel]
        new = np.full_like(arr, math.inf)
        if h.size:
            starts = np.flatnonzero(np.r_[True, h[1:] != h[:-1]])
            new[h[starts]] = np.minimum.reduceat(arr[tails[sel]] + w[sel], starts, axis=0)
        keep = new[:, p] <= cap
        if bounds:
            keep &= (new[:, :p] <= np.asarray(bounds)).all(axis=1)
        idx = np.flatnonzero(keep)
        return dict(zip(idx.tolist(), map(tuple, new[idx].tolist())))

    def build(self) -> Neighborhoods:
        levels = [self.first_level()]
        n = self.g.n
        while self.dst not in levels[-1]:
            if len(levels) >= n:
                raise Unreachable(f"{self.dst} not reached within {n - 1} hops of {self.src}")
            nxt = self.next_level(levels[-1])
            if not nxt:
                raise Unreachable(f"{self.dst} is unreachable from {self.src}")
            levels.append(nxt)
        return Neighborhoods(levels, self.src, self.dst)

    def extend(self, nh: Neighborhoods) -> Neighborhoods:
        if len(nh.levels) >= self.g.n:
            raise MaxLengthExceeded(
                f"{len(nh.levels)} neighborhoods already span every simple-path length")
        nh.levels.append(self.next_level(nh.levels[-1]))
        return nh

    # -- backward pass ----------------------------------------------------------
    def backward(self, nh: Neighborhoods) -> list:
        """All surviving simple paths with exactly ``nh.depth`` hops.

        Partial paths are nodes of a search tree rooted at the destination
        that persists across passes: a node is ``[vertices, arcs, vector,
        alive, children]`` and ``children`` maps an arc to the extension it
        produced (``None`` when that extension was pruned).  A later pass
        re-walks the cached extensions that fit its levels and only
        generates, and counts, the ones never tried before.  Pruning by
        infeasibility, bound and dominance is permanent; the look-back test
        depends on the level and is re-applied on every visit.
        """
        levels = nh.levels
        depth = len(levels) - 1
        if self.dst not in levels[depth]:
            return []
        p = self.p
        src = self.src
        bounds = self.bounds
        look_back = self.opts.look_back
        use_dom = self.use_dominance
        bound_prune = self.opts.dominance
        in_adj = self.in_adj
        counters = self.counters
        store = self.store
        front = self.front
        lb_cap = self.kth_cost()
        cap = lb_cap if bound_prune else math.inf
        if self.root is None:
            self.root = [(self.dst,), (), (0.0,) * (p + 1), True, {}]
        frontier = [self.root]
        for n in range(depth - 1, -1, -1):
            level = levels[n]
            new = []
            for node in frontier:
                if not node[3]:
                    continue
                verts, arcs, vec, _, kids = node
                for u, w, a in in_adj[verts[0]]:
                    if u not in level or u in verts or (n and u == src):
                        continue
                    best_u = level[u]
                    if best_u[p] > cap:
                        continue
                    if a in kids:
                        child = kids[a]
                        if child is None or not child[3]:
                            continue
                        cvec = child[2]
                        if bound_prune and cvec[p] > cap:
                            continue
                        if use_dom and any(c != cvec and all(x <= y for x, y in zip(c, cvec))
                                           for c in front):
                            child[3] = False
                            continue
                    else:
                        counters.traversed_paths += 1
                        self._tick += 1
                        if self._tick >= self.CHECK_EVERY:
                            self._tick = 0
                            self.check_deadline()
                        kids[a] = None
                        cvec = tuple([x + y for x, y in zip(vec, w)])
                        if any(cvec[i] > bounds[i] for i in range(p)):
                            counters.infeasibility_pruned += 1
                            continue
                        if bound_prune and cvec[p] > cap:
                            counters.dominance_pruned += 1
                            continue
                        child = [(u,) + verts, (a,) + arcs, cvec, True, {}]
                        if use_dom and not self._admit(store, front, u, child):
                            counters.dominance_pruned += 1
                            continue
                        kids[a] = child
                    if look_back:
                        if cvec[p] + best_u[p] > lb_cap or any(
                                cvec[i] + best_u[i] > bounds[i] for i in range(p)):
                            counters.infeasibility_pruned += 1
                            continue
                    new.append(child)
            frontier = new
            if not frontier:
                return []
        return [(lab[2][-1], self.make_label(lab[0], lab[1], lab[2]), lab[2])
                for lab in frontier if lab[3]]

    def exhausted(self) -> bool:
        """True once no live partial path has an untried extension.

        The cached tree is then the complete pruned search space and every
        candidate it holds has already been validated.
        """
        if self.root is None:
            return False
        in_adj = self.in_adj
        stack = [self.root]
        while stack:
            node = stack.pop()
            verts, kids = node[0], node[4]
            if verts[0] == self.src:
                continue
            for u, _, a in in_adj[verts[0]]:
                if u in verts:
                    continue
                if a not in kids:
                    return False
                child = kids[a]
                if child is not None and child[3]:
                    stack.append(child)
        return True

    @staticmethod
    def _admit(store, front, v, label) -> bool:
        vec = label[2]
        for c in front:
            if c != vec and all(x <= y for x, y in zip(c, vec)):
                return False
        bucket = store.get(v)
        if bucket is None:
            store[v] = [label]
            return True
        equal = False
        for other in bucket:
            ov = other[2]
            if ov == vec:
                equal = True
            elif all(x <= y for x, y in zip(ov, vec)):
                return False
        survivors = []
        for other in bucket:
            ov = other[2]
            if ov != vec and all(x <= y for x, y in zip(vec, ov)):
                other[3] = False
            else:
                survivors.append(other)
        if not equal:
            survivors.append(label)
        store[v] = survivors
        return True


def _options(opts):
    return SearchOptions() if opts is None else opts


def build_neighborhoods(g: Graph, src: int, dst: int, spec: ConstraintSpec,
                        opts: SearchOptions | None = None) -> Neighborhoods:
    """Forward pass: grow neighborhoods until ``dst`` appears in the newest one."""
    return _Search(g, src, dst, spec, _options(opts)).build()


def extend_neighborhoods(nh: Neighborhoods, g: Graph, spec: ConstraintSpec,
                         opts: SearchOptions | None = None) -> Neighborhoods:
    """Append exactly one neighborhood to ``nh`` (in place) and return it."""
    return _Search(g, nh.source, nh.destination, spec, _options(opts)).extend(nh)


def backward_pass(nh: Neighborhoods, g: Graph, spec: ConstraintSpec,
                  opts: SearchOptions | None = None, counters: Counters | None = None) -> list:
    """Every surviving simple ``src -> dst`` path with ``nh.depth`` hops.

    Runs with fresh dominance state.  ``counters``, when given, receives the
    pass's instrumentation.
    """
    search = _Search(g, nh.source, nh.destination, spec, _options(opts))
    if counters is not None:
        search.counters = counters
    return [label for _, label, _ in search.backward(nh)]


def solve_csp(g: Graph, src: int, dst: int, spec: ConstraintSpec,
              opts: SearchOptions | None = None) -> RouteResult:
    """Cheapest simple path meeting every link and path bound.

    Hop counts are validated in ascending order until ``max_hops`` (default
    ``|V| - 1``) or until no longer path can beat the ``k``-th best cost found.

    Raises
    ------
    Unreachable
        ``dst`` is disconnected from ``src`` once link-infeasible edges go.
    NoFeasiblePath
        Every simple path within the hop budget breaks a path bound.
    """
    opts = _options(opts)
    t0 = time.perf_counter()
    spec.check_arity(g.l_arity, g.p_arity)
    search = _Search(g, src, dst, spec, opts)
    if src == dst:
        label = PathLabel((src,), 0.0, (0.0,) * search.p, ())
        return RouteResult([label], search.counters, time.perf_counter() - t0)
    max_hops = g.n - 1 if opts.max_hops is None else min(opts.max_hops, g.n - 1)
    trace = []
    try:
        nh = search.build()
    except Unreachable:
        raise search.failure("") from None
    while nh.depth <= max_hops:
        if search.kth_cost() <= search.min_arc_cost * nh.depth:
            break
        trace.append(nh.depth)
        for obj, label, vec in search.backward(nh):
            search.offer(obj, label, vec)
        if nh.depth == max_hops or len(nh.levels) >= g.n or search.exhausted():
            break
        search.extend(nh)
        if not nh.levels[-1]:
            break
    if not search.best:
        raise search.failure(f" within {max_hops} hops")
    return RouteResult([label for _, label in search.best], search.counters,
                       time.perf_counter() - t0, trace)
