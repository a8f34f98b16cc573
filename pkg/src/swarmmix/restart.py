"""Convergence/stagnation detection for a running swarm.

Any of three conditions ends the current run segment: the personal bests
collapsed in space, their values collapsed (which also catches swarms
frozen on a plateau of a step function), or the global best stopped
improving for too long.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Particle


@dataclass
class RestartThresholds:
    eps_x: float
    eps_f: float
    max_stall_iterations: int


@dataclass
class RestartState:
    thresholds: RestartThresholds
    iterations_since_improvement: int = 0
    location_spread: float = 0.0
    value_spread: float = 0.0

    def observe(self, improved: bool):
        """Call once per iteration after all particles moved."""
        if improved:
            self.iterations_since_improvement = 0
        else:
            self.iterations_since_improvement += 1


def spreads(swarm: list[Particle]) -> tuple[float, float]:
    """(max per-dimension range of personal-best locations,
    range of personal-best values)."""
    bests = np.array([p.best.x for p in swarm])
    values = np.array([p.best.value for p in swarm])
    loc = float(np.max(bests.max(axis=0) - bests.min(axis=0)))
    val = float(values.max() - values.min())
    return loc, val


def should_continue(state: RestartState, swarm: list[Particle]) -> tuple[bool, str | None]:
    """False (and the trigger name) when the segment should be restarted."""
    t = state.thresholds
    loc, val = spreads(swarm)
    state.location_spread = loc
    state.value_spread = val
    if loc < t.eps_x:
        return False, "location_spread"
    if val < t.eps_f:
        return False, "value_spread"
    if state.iterations_since_improvement > t.max_stall_iterations:
        return False, "stall"
    return True, None
