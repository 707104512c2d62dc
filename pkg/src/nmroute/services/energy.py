"""Linear interface energy model.

An interface draws ``E0`` watts idle and ``M`` at full load, linearly in
between, so a network's draw is ``sum((M - E0) * U_e + E0)`` over its
edges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..exceptions import ConfigurationError


@dataclass(frozen=True)
class EnergyParams:
    M: float = 2.0
    E0: float = 1.7

    def __post_init__(self):
        if not (math.isfinite(self.M) and math.isfinite(self.E0)) or not self.M >= self.E0 >= 0:
            raise ConfigurationError(f"need M >= E0 >= 0, got M={self.M}, E0={self.E0}")


def energy(utilizations, params: EnergyParams | None = None) -> tuple[float, float]:
    """Absolute draw in watts and the increase over the idle network in percent.

    >>> energy([1.0])
    (2.0, 17.647058823529417)
    """
    params = EnergyParams() if params is None else params
    us = [float(u) for u in utilizations]
    for i, u in enumerate(us):
        if not 0.0 <= u <= 1.0:
            raise ConfigurationError(f"utilization {i} = {u} outside [0, 1]")
    slope = params.M - params.E0
    absolute = math.fsum(slope * u + params.E0 for u in us)
    idle = len(us) * params.E0
    if idle == 0:
        return absolute, 0.0
    return absolute, (absolute - idle) / idle * 100.0
