"""Greedy max-min traffic engineering by progressive filling.

Flows have unbounded demand and equal priority, so the fairness of a flow
is simply its allocated throughput.  Each step grows the worst-off flow by
one quantum along its current tunnel; a new tunnel is computed only when
the current one can no longer carry a full quantum.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..exceptions import ConfigurationError, RoutingError
from ..graph import Graph, PathLabel
from ..pathfinders import get_pathfinder
from ..topology import SLOPreset, slo_preset, slo_spec


@dataclass
class FlowState:
    src: int
    dst: int
    preset: str
    allocated: float = 0.0
    current_path: PathLabel | None = None
    tunnels: list = field(default_factory=list)
    growable: bool = True


@dataclass
class TEResult:
    flows: list
    utilizations: list

    @property
    def total(self) -> float:
        return sum(f.allocated for f in self.flows)

    @property
    def min_fairness(self) -> float:
        return min((f.allocated for f in self.flows), default=0.0)

    def mean_hops(self) -> float:
        """Mean hop count over every tunnel any flow installed."""
        hops = [t.hop_count for f in self.flows for t in f.tunnels]
        return sum(hops) / len(hops) if hops else 0.0


def _carries(g, path, quantum):
    return all(g.residual[g.arc_edge[a]] >= quantum for a in path.arcs)


def te_greedy(g: Graph, flows, pathfinder: str = "nm", quantum: float = 1.0,
              preset: str | SLOPreset = "te-low") -> TEResult:
    """Progressive filling on ``g`` (residuals are consumed in place).

    ``flows`` holds ``(src, dst)`` pairs or ``(src, dst, spec)`` triples;
    pairs get the bounds of ``preset`` with demand ``quantum``.
    """
    if not quantum > 0:
        raise ConfigurationError("quantum must be positive")
    find = get_pathfinder(pathfinder)
    slo = slo_preset(preset) if isinstance(preset, str) else preset
    states, specs = [], []
    for f in flows:
        src, dst = f[0], f[1]
        g._check_vertex(src)
        g._check_vertex(dst)
        if src == dst:
            raise ConfigurationError(f"flow {src}->{dst} has identical endpoints")
        spec = f[2].with_demand(quantum) if len(f) > 2 else slo_spec(g, slo, demand=quantum)
        states.append(FlowState(src, dst, slo.name if len(f) == 2 else "custom"))
        specs.append(spec)
    while True:
        pick = None
        for i, st in enumerate(states):
            if st.growable and (pick is None or st.allocated < states[pick].allocated):
                pick = i
        if pick is None:
            break
        st = states[pick]
        if st.current_path is None or not _carries(g, st.current_path, quantum):
            try:
                st.current_path = find(g, st.src, st.dst, specs[pick]).path
            except RoutingError:
                st.current_path = None
                st.growable = False
                continue
            st.tunnels.append(st.current_path)
        g.allocate(st.current_path, quantum)
        st.allocated += quantum
    return TEResult(states, g.utilizations())
