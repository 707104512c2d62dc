"""Random substrates and request sets for the experiments.

All randomness comes from numpy's PCG64 generator seeded with the caller's
seed, so a ``(GenSpec, seed)`` pair always yields the same graph.  Vertices
are dropped uniformly on a unit square; an edge's first path metric is its
propagation delay (Euclidean length times ``rate``) and its second is its
cost, which is also the objective cost.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import ConfigurationError
from .graph import ConstraintSpec, Graph

MODELS = ("waxman", "barabasi-albert")
WAXMAN_ALPHA = 0.15
WAXMAN_BETA = 0.2
_BATCH = 4096


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class GenSpec:
    model: str = "waxman"
    n: int = 100
    avg_degree: float = 4.0
    seed: int = 0
    bw_range: tuple = (1.0, 9.0)
    cost_range: tuple = (1.0, 10.0)
    rate: float = 1.0
    cpu_range: tuple | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigurationError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.n < 2:
            raise ConfigurationError("n must be at least 2")
        if self.avg_degree < 1:
            raise ConfigurationError("avg_degree must be at least 1")
        if self.avg_degree >= self.n:
            raise ConfigurationError(f"mean degree {self.avg_degree} unreachable with {self.n} vertices")
        for name in ("bw_range", "cost_range", "cpu_range"):
            rng = getattr(self, name)
            if rng is not None and not rng[0] <= rng[1]:
                raise ConfigurationError(f"{name} must satisfy lo <= hi")
        if not self.rate > 0:
            raise ConfigurationError("rate must be positive")


# named attribute presets
GEN_PRESETS = {
    "scalability": dict(bw_range=(1.0, 9.0), cost_range=(1.0, 10.0)),
    "te": dict(bw_range=(1.0, 10.0), cost_range=(1.0, 10.0)),
    "vne": dict(bw_range=(0.0, 100.0), cost_range=(1.0, 10.0), cpu_range=(0.0, 100.0)),
}


def preset_spec(preset: str, **overrides) -> GenSpec:
    try:
        base = GEN_PRESETS[preset]
    except KeyError:
        raise ConfigurationError(f"unknown generation preset {preset!r}") from None
    return replace(GenSpec(**base), **overrides)


@dataclass(frozen=True)
class SLOPreset:
    """Request bounds: ``delay_factor`` multiplies the plane's propagation stretch."""

    name: str
    bw_bound: float
    delay_factor: float
    cost_bound: float = math.inf

    def __post_init__(self):
        if not self.delay_factor > 0:
            raise ConfigurationError("delay_factor must be positive")
        if not self.bw_bound > 0:
            raise ConfigurationError("bw_bound must be positive")


SLO_PRESETS = {
    "scal-low": SLOPreset("scal-low", 1.0, 4.0, 100.0),
    "scal-medium": SLOPreset("scal-medium", 4.0, 2.5, 50.0),
    "te-low": SLOPreset("te-low", 1.0, 4.0),
    "te-medium": SLOPreset("te-medium", 1.0, 1.5),
    "te-high": SLOPreset("te-high", 1.0, 1.0),
}


def slo_preset(name: str) -> SLOPreset:
    try:
        return SLO_PRESETS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown SLO preset {name!r}; choose from {sorted(SLO_PRESETS)}") from None


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def _components(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    comps = {}
    for v in range(n):
        comps.setdefault(find(v), []).append(v)
    return sorted(comps.values(), key=lambda c: (-len(c), c[0]))


def _patch_connected(n, edges, xy):
    """Join every minor component to the giant one through its closest vertex pair."""
    comps = _components(n, edges)
    if len(comps) == 1:
        return edges
    giant = list(comps[0])
    for comp in comps[1:]:
        a = xy[comp]
        b = xy[giant]
        d = ((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2)
        i, j = np.unravel_index(int(np.argmin(d)), d.shape)
        u, v = comp[i], giant[j]
        edges.add((min(u, v), max(u, v)))
        giant.extend(comp)
    return edges


def _waxman(n, target, xy, rng):
    scale = WAXMAN_BETA * math.sqrt(2.0)
    edges = set()
    while len(edges) < target:
        pairs = rng.integers(0, n, size=(_BATCH, 2))
        coins = rng.random(_BATCH)
        d = np.sqrt(((xy[pairs[:, 0]] - xy[pairs[:, 1]]) ** 2).sum(axis=1))
        accept = coins < WAXMAN_ALPHA * np.exp(-d / scale)
        for (u, v), ok in zip(pairs.tolist(), accept.tolist()):
            if not ok or u == v:
                continue
            e = (u, v) if u < v else (v, u)
            if e in edges:
                continue
            edges.add(e)
            if len(edges) >= target:
                break
    return edges


def _barabasi_albert(n, avg_degree, rng):
    edges = set()
    degree = np.zeros(n)
    carry = _round_half_up(avg_degree / 2)  # attachments early vertices could not make
    for i in range(1, n):
        want = _round_half_up((i + 1) * avg_degree / 2) - _round_half_up(i * avg_degree / 2)
        m = max(1, min(want + carry, i))
        carry += want - m
        w = degree[:i]
        total = w.sum()
        if total > 0:
            picks = rng.choice(i, size=m, replace=False, p=w / total)
        else:
            picks = rng.choice(i, size=m, replace=False)
        for j in sorted(int(x) for x in picks):
            edges.add((j, i))
            degree[i] += 1
            degree[j] += 1
    return edges


def generate(spec: GenSpec) -> Graph:
    """A connected random substrate with uniform bandwidths and costs."""
    rng = make_rng(spec.seed)
    n = spec.n
    xy = rng.random((n, 2))
    max_edges = n * (n - 1) // 2
    target = min(max(_round_half_up(n * spec.avg_degree / 2), n - 1), max_edges)
    if spec.model == "waxman":
        edges = _waxman(n, target, xy, rng)
    else:
        edges = _barabasi_albert(n, spec.avg_degree, rng)
    edges = sorted(_patch_connected(n, edges, xy))
    m = len(edges)
    bw = rng.uniform(spec.bw_range[0], spec.bw_range[1], size=m).tolist()
    cost = rng.uniform(spec.cost_range[0], spec.cost_range[1], size=m).tolist()
    g = Graph(n, directed=False, l_arity=0, p_arity=2)
    for (u, v), b, c in zip(edges, bw, cost):
        delay = math.hypot(*(xy[u] - xy[v]).tolist()) * spec.rate
        g.add_edge(u, v, b, (), (delay, c), c)
    g.plane = (1.0, 1.0, float(spec.rate))
    if spec.cpu_range is not None:
        g.set_vertex_capacity(rng.uniform(spec.cpu_range[0], spec.cpu_range[1], size=n).tolist())
    return g


def stretch(g: Graph) -> float:
    """Propagation delay across the diagonal of the plane the graph was drawn on."""
    if g.plane is None:
        raise ConfigurationError("graph carries no plane coordinates")
    w, h, rate = g.plane
    return math.hypot(w, h) * rate


def slo_spec(g: Graph, preset: SLOPreset, demand: float | None = None) -> ConstraintSpec:
    """Bounds for a (delay, cost) substrate under ``preset``."""
    if g.p_arity != 2:
        raise ConfigurationError("SLO presets expect (delay, cost) path metrics")
    return ConstraintSpec(preset.bw_bound if demand is None else demand, (),
                          (preset.delay_factor * stretch(g), preset.cost_bound))


def make_requests(g: Graph, amount, preset: SLOPreset, seed: int) -> list:
    """Distinct ordered ``(src, dst, spec)`` requests.

    An ``int`` is a count; a ``float`` in ``(0, 1]`` is a fraction of the
    vertex count (rounded half up, at least one).
    """
    if isinstance(amount, float):
        if not 0 < amount <= 1:
            raise ConfigurationError("request fraction must lie in (0, 1]")
        count = max(1, _round_half_up(amount * g.n))
    else:
        count = int(amount)
        if count < 0:
            raise ConfigurationError("request count must be non-negative")
    if count > g.n * (g.n - 1):
        raise ConfigurationError(f"{count} requests exceed the {g.n * (g.n - 1)} ordered pairs")
    spec = slo_spec(g, preset)
    rng = make_rng(seed)
    seen = set()
    out = []
    while len(out) < count:
        for s, d in rng.integers(0, g.n, size=(max(64, 2 * count), 2)).tolist():
            if s == d or (s, d) in seen:
                continue
            seen.add((s, d))
            out.append((s, d, spec))
            if len(out) == count:
                break
    return out
