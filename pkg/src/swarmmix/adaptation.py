"""Behavior pool: weighted roulette assignment of behaviors to particles,
with optional adaptation of the weights from each behavior's contribution
to improving the global best.

Per-behavior contribution is a moving average of improvement per use.
Weights are floor + average, so the ranking is invariant under rescaling
every improvement by a constant.  After a configurable number of
iterations without any improvement the averages are equalized, which
makes all enabled behaviors equally likely again.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .behaviors import BehaviorKind

KINDS = (BehaviorKind.PSO, BehaviorKind.DE, BehaviorKind.QUADRATIC, BehaviorKind.POLYNOMIAL)


@dataclass
class BehaviorPool:
    initial_weights: dict[BehaviorKind, float]
    adapt: bool = False
    alpha: float = 0.1
    floor: float = 1.0
    equalization_horizon: int = 50

    weights: dict[BehaviorKind, float] = field(init=False)
    usage_count: dict[BehaviorKind, int] = field(init=False)
    improvement_ema: dict[BehaviorKind, float] = field(init=False)

    def __post_init__(self):
        for kind in KINDS:
            self.initial_weights.setdefault(kind, 0.0)
        if any(w < 0 for w in self.initial_weights.values()):
            raise ValueError("behavior weights must be non-negative")
        if all(w == 0 for w in self.initial_weights.values()):
            raise ValueError("at least one behavior weight must be positive")
        self.weights = dict(self.initial_weights)
        self.usage_count = {k: 0 for k in KINDS}
        # the moving average starts at weight-floor so that alpha=0 keeps
        # the initial mixture frozen
        self.improvement_ema = {
            k: max(0.0, self.initial_weights[k] - self.floor) if self.enabled(k) else 0.0
            for k in KINDS
        }
        self._window_delta = {k: 0.0 for k in KINDS}
        self._stall_iterations = 0

    def enabled(self, kind: BehaviorKind) -> bool:
        return self.initial_weights[kind] > 0.0

    def enabled_kinds(self) -> list[BehaviorKind]:
        return [k for k in KINDS if self.enabled(k)]

    def probabilities(self) -> dict[BehaviorKind, float]:
        total = sum(self.weights.values())
        return {k: self.weights[k] / total for k in KINDS}

    def sample(self, rng) -> BehaviorKind:
        """Roulette draw; counts one use of the drawn behavior."""
        kinds = [k for k in KINDS if self.weights[k] > 0.0]
        idx = rng.roulette([self.weights[k] for k in kinds])
        kind = kinds[idx]
        self.usage_count[kind] += 1
        return kind

    def draw_static(self, rng) -> BehaviorKind:
        """Roulette draw without a usage count (static assignment setup)."""
        kinds = [k for k in KINDS if self.weights[k] > 0.0]
        return kinds[rng.roulette([self.weights[k] for k in kinds])]

    def count_usage(self, kind: BehaviorKind):
        self.usage_count[kind] += 1

    def note_fallback(self, drawn: BehaviorKind):
        """A model behavior fell back to PSO: the use belongs to PSO."""
        self.usage_count[drawn] -= 1
        self.usage_count[BehaviorKind.PSO] += 1

    def register_improvement(self, kind: BehaviorKind, delta: float):
        """Accumulate a global-best improvement into the current window."""
        self._window_delta[kind] += max(0.0, float(delta))

    def recompute_probabilities(self) -> bool:
        """End-of-iteration update; returns whether anything improved."""
        improved = any(d > 0.0 for d in self._window_delta.values())
        if improved:
            self._stall_iterations = 0
        else:
            self._stall_iterations += 1
        if self.adapt:
            for k in self.enabled_kinds():
                per_use = self._window_delta[k] / max(1, self.usage_count[k])
                self.improvement_ema[k] = (
                    (1.0 - self.alpha) * self.improvement_ema[k] + self.alpha * per_use
                )
            if self._stall_iterations >= self.equalization_horizon:
                for k in self.enabled_kinds():
                    self.improvement_ema[k] = 0.0
            self.weights = {
                k: (self.floor + self.improvement_ema[k]) if self.enabled(k) else 0.0
                for k in KINDS
            }
        self._window_delta = {k: 0.0 for k in KINDS}
        self.usage_count = {k: 0 for k in KINDS}
        return improved
