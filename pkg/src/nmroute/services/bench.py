"""Scalability sweep: identical query sequences fed to several algorithms.

For each ``(size, preset, seed)`` cell a substrate is generated and 10% of
its vertex count is drawn as source-destination pairs.  Queries are
answered in order on a shared residual state: every algorithm sees the
same residuals, then the path of the first algorithm that found one is
allocated with the preset's fixed demand.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass

from ..exceptions import NoFeasiblePath, SearchTimeout, Unreachable
from ..pathfinders import get_pathfinder
from ..topology import generate, make_requests, preset_spec, slo_preset

BENCH_ALGORITHMS = ("nm", "nm-lb", "ebfs", "ebfs-la")
OUTCOMES = ("found", "no-feasible", "unreachable", "timeout")
# nm-general is the plain NM search; the registry's "nm" shortcut is for services
_OUTCOME = {NoFeasiblePath: "no-feasible", Unreachable: "unreachable", SearchTimeout: "timeout"}
_SOLVER = {"nm": "nm-general", "nm-lb": "nm-lb", "ebfs": "ebfs", "ebfs-la": "ebfs-la"}


@dataclass
class BenchRecord:
    algorithm: str
    n: int
    preset: str
    seed: int
    query: int
    src: int
    dst: int
    traversed_paths: int
    elapsed: float
    outcome: str
    hops: int = -1
    cost: float = -1.0

    FIELDS = ("algorithm", "n", "preset", "seed", "query", "src", "dst",
              "traversed_paths", "elapsed", "outcome", "hops", "cost")

    def as_row(self) -> dict:
        return asdict(self)


def check_algorithms(algorithms) -> None:
    for a in algorithms:
        get_pathfinder(_SOLVER.get(a, a))


def run_queries(g, requests, algorithms, timeout=None, meta=None) -> list:
    """Answer ``requests`` with each algorithm and allocate as described above."""
    meta = meta or {}
    solvers = [(a, get_pathfinder(_SOLVER.get(a, a))) for a in algorithms]
    out = []
    for q, (src, dst, spec) in enumerate(requests):
        chosen = None
        for name, solve in solvers:
            t0 = time.perf_counter()
            hops, cost, traversed = -1, -1.0, 0
            try:
                res = solve(g, src, dst, spec, timeout=timeout)
                outcome, traversed = "found", res.counters.traversed_paths
                hops, cost = res.path.hop_count, res.path.cost
                if chosen is None:
                    chosen = res.path
            except (NoFeasiblePath, Unreachable, SearchTimeout) as exc:
                outcome = _OUTCOME[type(exc)]
                if exc.counters is not None:
                    traversed = exc.counters.traversed_paths
            elapsed = time.perf_counter() - t0
            out.append(BenchRecord(name, g.n, meta.get("preset", ""), meta.get("seed", 0), q,
                                   src, dst, traversed, elapsed, outcome, hops, cost))
        if chosen is not None and chosen.hop_count > 0:
            g.allocate(chosen, spec.demand)
    return out


def bench_scalability(sizes, presets, algorithms=BENCH_ALGORITHMS, seeds=(0,),
                      fraction: float = 0.1, timeout: float | None = 60.0,
                      model: str = "waxman", avg_degree: float = 4.0) -> list:
    """One :class:`BenchRecord` per (size, preset, seed, query, algorithm)."""
    check_algorithms(algorithms)
    records = []
    for n in sizes:
        for preset in presets:
            slo = slo_preset(preset)
            for seed in seeds:
                g = generate(preset_spec("scalability", model=model, n=n,
                                         avg_degree=avg_degree, seed=seed))
                reqs = make_requests(g, float(fraction), slo, seed)
                records.extend(run_queries(g, reqs, algorithms, timeout,
                                           {"preset": slo.name, "seed": seed}))
    return records
