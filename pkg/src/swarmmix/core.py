"""Domain types shared by every module: bounds, samples, particles,
objective functions and the seeded random stream."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class NonFiniteValueError(RuntimeError):
    """An objective returned NaN/inf.  The benchmark suite never does, so
    this always signals a harness bug and aborts the run."""

    def __init__(self, x):
        self.x = np.asarray(x, dtype=float)
        super().__init__(f"objective returned a non-finite value at x={self.x.tolist()}")


@dataclass
class Bounds:
    """Axis-aligned box: one [lower, upper] interval per dimension."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if self.lower.ndim != 1 or self.lower.shape != self.upper.shape:
            raise ValueError("lower/upper must be 1-d vectors of equal length")
        if self.lower.size < 1:
            raise ValueError("bounds need at least one dimension")
        if np.any(self.lower > self.upper):
            raise ValueError("lower[d] must not exceed upper[d]")

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def intersect(self, other: "Bounds") -> "Bounds":
        return Bounds(np.maximum(self.lower, other.lower),
                      np.minimum(self.upper, other.upper))

    @staticmethod
    def cube(lower: float, upper: float, dim: int) -> "Bounds":
        return Bounds(np.full(dim, float(lower)), np.full(dim, float(upper)))


@dataclass
class Sample:
    """An evaluated point: coordinates plus objective value."""

    x: np.ndarray
    value: float

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.value = float(self.value)


@dataclass
class Particle:
    x: np.ndarray
    v: np.ndarray
    best: Sample
    neighborhood: list[int] = field(default_factory=list)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        if not (len(self.x) == len(self.v) == len(self.best.x)):
            raise ValueError("x, v and best.x must share one dimension")


class ObjectiveFunction:
    """Base class for minimization targets.

    Subclasses implement ``_raw(x) -> float``.  ``evaluate`` validates the
    input, counts true evaluations and rejects non-finite results.
    """

    def __init__(self, dim: int, bounds: Bounds):
        if dim < 1:
            raise ValueError("dim must be positive")
        if bounds.dim != dim:
            raise ValueError("bounds dimension mismatch")
        self.dim = dim
        self.bounds = bounds
        self.evaluations = 0

    def _raw(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def evaluate(self, x) -> Sample:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"expected a vector of length {self.dim}, got shape {x.shape}")
        value = float(self._raw(x))
        self.evaluations += 1
        if not np.isfinite(value):
            raise NonFiniteValueError(x)
        return Sample(x.copy(), value)

    def __call__(self, x) -> float:
        return self.evaluate(x).value


def evaluate(f: ObjectiveFunction, x) -> Sample:
    """Evaluate ``f`` at ``x``; counts one true evaluation."""
    return f.evaluate(x)


def clamp(x, b: Bounds) -> np.ndarray:
    """Project every coordinate of ``x`` into the box ``b``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (b.dim,):
        raise ValueError("dimension mismatch in clamp")
    return np.minimum(np.maximum(x, b.lower), b.upper)


class RngStream:
    """Seeded random stream with a fixed, documented generator (NumPy PCG64).

    Identical seeds give identical draw sequences; every stochastic choice
    in a run flows through one stream, which is what makes runs replayable.
    """

    def __init__(self, seed):
        # seed may be an int or a sequence of ints (sub-stream derivation)
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        return float(low + (high - low) * self._gen.random())

    def uniform_vector(self, low, high, n: int) -> np.ndarray:
        return low + (high - low) * self._gen.random(n)

    def integer(self, n: int) -> int:
        """Uniform draw from {0, ..., n-1}."""
        return int(self._gen.integers(n))

    def index_pair(self, n: int, exclude: int | None = None) -> tuple[int, int]:
        """Two distinct indices from range(n), optionally avoiding one.

        Uses the skip trick instead of rejection so the number of draws is
        fixed (two) regardless of outcome.
        """
        pool = n if exclude is None else n - 1

        def lift(i):
            return i if exclude is None or i < exclude else i + 1

        a = self.integer(pool)
        b = self.integer(pool - 1)
        if b >= a:
            b += 1
        return lift(a), lift(b)

    def roulette(self, weights) -> int:
        """Index drawn with probability proportional to its weight."""
        w = np.asarray(weights, dtype=float)
        total = w.sum()
        if total <= 0:
            raise ValueError("roulette needs a positive total weight")
        r = self.uniform(0.0, total)
        acc = 0.0
        for i, wi in enumerate(w):
            acc += wi
            if r < acc:
                return i
        return int(len(w) - 1)
