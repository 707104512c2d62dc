"""Two-stage virtual network embedding.

The node stage maps virtual vertices greedily, one at a time, onto the
distinct substrate vertex with the most residual CPU.  The link stage then
routes each virtual edge with the configured pathfinder under its
bandwidth and latency bounds.  A request commits in full or not at all.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..exceptions import ConfigurationError, RoutingError
from ..graph import ConstraintSpec, Graph
from ..pathfinders import get_pathfinder
from ..topology import make_rng, stretch


@dataclass
class VNRequest:
    """Virtual vertices with CPU demands; edges are ``(i, j, bandwidth, latency)``."""

    cpu: list
    edges: list

    def __post_init__(self):
        for i, j, bw, lat in self.edges:
            if not (0 <= i < len(self.cpu) and 0 <= j < len(self.cpu)) or i == j:
                raise ConfigurationError(f"virtual edge ({i},{j}) is invalid")
            if not bw > 0 or not lat > 0:
                raise ConfigurationError("virtual edge demands must be positive")


@dataclass
class VNResult:
    accepted: bool
    stage: str | None = None  # where a rejection happened: "node" or "link"
    reason: str = ""
    hosts: list = field(default_factory=list)
    paths: list = field(default_factory=list)


def _node_stage(g, req):
    taken = set()
    hosts = []
    for i, demand in enumerate(req.cpu):
        pick = None
        for v in range(g.n):
            if v in taken or g.vertex_residual[v] < demand:
                continue
            if pick is None or g.vertex_residual[v] > g.vertex_residual[pick]:
                pick = v
        if pick is None:
            return None, f"no host for virtual node {i} (cpu {demand})"
        taken.add(pick)
        hosts.append(pick)
    return hosts, ""


def vne_embed(g: Graph, req: VNRequest, pathfinder: str = "nm") -> VNResult:
    """Embed ``req`` on ``g``, consuming residual CPU and bandwidth on success."""
    if g.vertex_residual is None:
        raise ConfigurationError("substrate has no vertex capacities")
    if g.p_arity < 1:
        raise ConfigurationError("substrate needs a delay metric")
    find = get_pathfinder(pathfinder)
    hosts, why = _node_stage(g, req)
    if hosts is None:
        return VNResult(False, "node", why)
    saved = list(g.residual)
    paths = []
    for k, (i, j, bw, lat) in enumerate(req.edges):
        spec = ConstraintSpec(bw, (), (lat,) + (math.inf,) * (g.p_arity - 1))
        try:
            label = find(g, hosts[i], hosts[j], spec).path
        except RoutingError as exc:
            g.residual = saved
            return VNResult(False, "link", f"virtual edge {k}: {exc}", hosts)
        g.allocate(label, bw)
        paths.append(label)
    for v, demand in zip(hosts, req.cpu):
        g.vertex_residual[v] -= demand
    return VNResult(True, None, "", hosts, paths)


def make_vn_requests(g: Graph, count: int = 40, size: int = 6, degree: float = 1.0,
                     seed: int = 0, demand_range=(1.0, 10.0), latency_range=(1.0, 4.0)) -> list:
    """Random connected virtual networks.

    Each is a random chain over ``size`` vertices plus random extra edges
    until the mean virtual degree reaches ``degree`` (1 keeps it linear).
    Latency bounds are drawn as multiples of the substrate's stretch.
    """
    if size < 1 or count < 0:
        raise ConfigurationError("size must be positive and count non-negative")
    rng = make_rng(seed)
    unit = stretch(g)
    out = []
    for _ in range(count):
        order = rng.permutation(size).tolist()
        pairs = [(order[t], order[t + 1]) for t in range(size - 1)]
        want = min(max(len(pairs), int(math.floor(size * degree / 2 + 0.5))), size * (size - 1) // 2)
        have = {frozenset(p) for p in pairs}
        while len(pairs) < want:
            i, j = rng.integers(0, size, size=2).tolist()
            if i != j and frozenset((i, j)) not in have:
                have.add(frozenset((i, j)))
                pairs.append((i, j))
        cpu = rng.uniform(*demand_range, size=size).tolist()
        bws = rng.uniform(*demand_range, size=len(pairs)).tolist()
        lats = (rng.uniform(*latency_range, size=len(pairs)) * unit).tolist()
        out.append(VNRequest(cpu, [(i, j, b, lt) for (i, j), b, lt in zip(pairs, bws, lats)]))
    return out


def vne_run(g: Graph, requests, pathfinder: str = "nm") -> tuple[float, list]:
    """Offer ``requests`` in order; returns the acceptance ratio and per-request results."""
    results = [vne_embed(g, r, pathfinder) for r in requests]
    ratio = sum(r.accepted for r in results) / len(results) if results else 0.0
    return ratio, results
