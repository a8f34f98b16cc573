"""Search-space management across restarts: remembers each segment's best
sample as a local-optimum estimation and derives the next initialization
bounding box from the collection, then builds the initial swarm."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import Bounds, Particle, Sample


class InitStrategy(Enum):
    FULL = "full"
    RANDOM_BOX = "random_box"
    NEAR_BEST = "near_best"


@dataclass
class InitStrategyWeights:
    p_full: float = 0.5
    p_random_box: float = 0.3
    p_near_best: float = 0.2

    def __post_init__(self):
        probs = (self.p_full, self.p_random_box, self.p_near_best)
        if any(p < 0 for p in probs):
            raise ValueError("strategy probabilities must be non-negative")
        if abs(sum(probs) - 1.0) > 1e-9:
            raise ValueError("strategy probabilities must sum to 1")


@dataclass
class OptimaLedger:
    """Best sample of every completed run segment, append-only."""

    entries: list[Sample] = field(default_factory=list)

    def append(self, s: Sample):
        self.entries.append(s)

    def __len__(self) -> int:
        return len(self.entries)

    def best(self) -> Sample:
        return min(self.entries, key=lambda s: s.value)

    def dump_csv(self, path):
        dim = len(self.entries[0].x) if self.entries else 0
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["restart_index"] + [f"x_{d + 1}" for d in range(dim)] + ["value"])
            for i, s in enumerate(self.entries):
                w.writerow([i] + [repr(float(v)) for v in s.x] + [repr(s.value)])


def next_bounds(ledger: OptimaLedger, full: Bounds, weights: InitStrategyWeights,
                rng, box_margin: float = 0.1, near_best_halfwidth: float = 0.01,
                ) -> tuple[Bounds, InitStrategy]:
    """Draw an initialization box for the next segment.

    RANDOM_BOX spans two distinct ledger entries inflated by ``box_margin``
    of the box's own width per side; NEAR_BEST is a cube of half-width
    ``near_best_halfwidth`` (fraction of the full width) around the
    lowest-valued entry.  Fewer than two entries always yields FULL.
    """
    strategies = (InitStrategy.FULL, InitStrategy.RANDOM_BOX, InitStrategy.NEAR_BEST)
    drawn = strategies[rng.roulette([weights.p_full, weights.p_random_box, weights.p_near_best])]
    if len(ledger) < 2:
        drawn = InitStrategy.FULL
    if drawn is InitStrategy.FULL:
        return Bounds(full.lower.copy(), full.upper.copy()), drawn
    if drawn is InitStrategy.RANDOM_BOX:
        i, j = rng.index_pair(len(ledger))
        a, b = ledger.entries[i].x, ledger.entries[j].x
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        margin = box_margin * (hi - lo)
        box = Bounds(lo - margin, hi + margin)
        return box.intersect(full), drawn
    center = ledger.best().x
    half = near_best_halfwidth * full.width
    box = Bounds(center - half, center + half)
    return box.intersect(full), drawn


def init_swarm(bounds: Bounds, n: int, rng, evaluate_fn) -> list[Particle]:
    """Uniform positions in ``bounds``; each particle's velocity is half
    the difference to a uniformly drawn partner.  ``evaluate_fn`` maps a
    position to a Sample (the initial personal best)."""
    if n < 2:
        raise ValueError("population must have at least 2 particles")
    dim = bounds.dim
    positions = [bounds.lower + rng.uniform_vector(0.0, 1.0, dim) * bounds.width
                 for _ in range(n)]
    velocities = []
    for i in range(n):
        j = rng.integer(n - 1)
        if j >= i:
            j += 1
        velocities.append((positions[i] - positions[j]) / 2.0)
    swarm = []
    for i in range(n):
        sample = evaluate_fn(positions[i])
        ring = [(i - 1) % n, i, (i + 1) % n]
        swarm.append(Particle(x=positions[i].copy(), v=velocities[i],
                              best=sample, neighborhood=ring))
    return swarm
