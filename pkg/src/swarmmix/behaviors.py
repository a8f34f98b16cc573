"""Sampling behaviors: each one turns a particle's state (plus swarm or
archive context) into a new velocity.

Four kinds: the SPSO-2007 velocity update, DE/best/1/bin, a separable
quadratic surrogate move and a per-dimension polynomial surrogate move.
The surrogate moves are deterministic given the archive contents; the two
sampling behaviors draw from the run's random stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .archive import SampleArchive
from .core import Bounds, Particle, Sample

GRID_POINTS = 1000
CONDITION_LIMIT = 1e10


class BehaviorKind(Enum):
    PSO = "pso"
    DE = "de"
    QUADRATIC = "quadratic"
    POLYNOMIAL = "polynomial"


class FallbackRequired(Exception):
    """The behavior cannot produce a proposal; the caller should run the
    PSO update for this particle instead."""


class FitFailedError(FallbackRequired):
    """Singular or hopelessly ill-conditioned least-squares system."""


@dataclass
class PsoParams:
    c1: float = 1.4
    c2: float = 1.4
    omega: float = 0.64


@dataclass
class DeParams:
    crossover_probability: float = 0.9
    f_range: tuple[float, float] = (0.0, 1.4)


@dataclass
class QuadraticModel:
    a: np.ndarray  # per-dimension square coefficients
    b: np.ndarray  # per-dimension linear coefficients
    c: float


@dataclass
class PolynomialModel:
    degree: int
    coeffs: np.ndarray   # shape (degree,), powers 1..degree
    intercept: float


def pso_velocity(p: Particle, neighborhood_best: Sample, params: PsoParams, rng) -> np.ndarray:
    """SPSO-2007 update.  The social term is dropped when the particle is
    its own neighborhood best (same best coordinates)."""
    dim = len(p.x)
    r1 = rng.uniform_vector(0.0, 1.0, dim)
    v = params.omega * p.v + params.c1 * r1 * (p.best.x - p.x)
    if not np.array_equal(neighborhood_best.x, p.best.x):
        r2 = rng.uniform_vector(0.0, 1.0, dim)
        v = v + params.c2 * r2 * (neighborhood_best.x - p.x)
    return v


def de_trial(p: Particle, global_best: Sample, population: list[Sample],
             params: DeParams, rng, self_index: int) -> np.ndarray:
    """DE/best/1/bin trial position.

    Mutant = best + F*(x_r1 - x_r2) over the personal-best population
    (donors exclude the target's own best), crossed binomially with the
    target's personal best.  F is redrawn uniformly per invocation.
    """
    n = len(population)
    if n < 3:
        raise FallbackRequired("DE needs at least 3 population members")
    dim = len(p.x)
    f = rng.uniform(params.f_range[0], params.f_range[1])
    r1, r2 = rng.index_pair(n, exclude=self_index)
    mutant = global_best.x + f * (population[r1].x - population[r2].x)
    j_rand = rng.integer(dim)
    cross = rng.uniform_vector(0.0, 1.0, dim) < params.crossover_probability
    cross[j_rand] = True
    return np.where(cross, mutant, p.best.x)


def de_velocity(p: Particle, trial) -> np.ndarray:
    """Velocity that moves the particle exactly onto the trial point."""
    return np.asarray(trial, dtype=float) - p.x


def fit_quadratic(samples: list[Sample]) -> QuadraticModel:
    """Least-squares fit of value ~ sum_d (a_d x_d^2 + b_d x_d) + c.

    Solved through the normal equations; systems with condition estimate
    above CONDITION_LIMIT are rejected as failed fits.
    """
    if not samples:
        raise FitFailedError("no samples")
    dim = len(samples[0].x)
    if len(samples) < 2 * dim + 1:
        raise FitFailedError("need at least 2*dim+1 samples")
    xs = np.array([s.x for s in samples])
    ys = np.array([s.value for s in samples])
    design = np.hstack([xs ** 2, xs, np.ones((len(samples), 1))])
    coeffs = _solve_normal(design, ys)
    return QuadraticModel(a=coeffs[:dim], b=coeffs[dim:2 * dim], c=float(coeffs[-1]))


def _solve_normal(design: np.ndarray, ys: np.ndarray) -> np.ndarray:
    gram = design.T @ design
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise FitFailedError(f"normal system condition {cond:.3g} exceeds limit")
    return np.linalg.solve(gram, design.T @ ys)


def bounded_parabola_peak(a: float, b: float, lower: float, upper: float) -> float:
    """Minimizer of a*x^2 + b*x constrained to [lower, upper].

    Interior vertex only for a > 0; otherwise (including a == 0) the
    better endpoint, ties resolved to the lower one.
    """
    if a > 0.0:
        vertex = -b / (2.0 * a)
        if lower <= vertex <= upper:
            return vertex
    val_lo = a * lower * lower + b * lower
    val_hi = a * upper * upper + b * upper
    return lower if val_lo <= val_hi else upper


def quadratic_move(p: Particle, archive: SampleArchive, k: int, bounds: Bounds) -> np.ndarray:
    """Fit the separable quadratic on the k samples nearest the particle's
    personal best and jump to its per-dimension bounded minimum."""
    dim = len(p.x)
    if archive.count < 2 * dim + 1:
        raise FallbackRequired("too few archived samples for a quadratic fit")
    neighbors = archive.nearest_to_point(p.best.x, k)
    model = fit_quadratic(neighbors)
    peak = np.array([
        bounded_parabola_peak(model.a[d], model.b[d], bounds.lower[d], bounds.upper[d])
        for d in range(dim)
    ])
    return peak - p.x


def fit_polynomial_1d(samples: list[Sample], d: int, degree: int) -> PolynomialModel:
    """Fit value ~ sum_i a_i * x_d^i + c using only coordinate d."""
    if degree < 2:
        raise ValueError("degree must be at least 2")
    if len(samples) < degree + 1:
        raise FitFailedError("need at least degree+1 samples")
    xd = np.array([s.x[d] for s in samples])
    if len(np.unique(xd)) < degree + 1:
        raise FitFailedError("not enough distinct coordinates in this dimension")
    ys = np.array([s.value for s in samples])
    design = np.column_stack([xd ** i for i in range(1, degree + 1)] + [np.ones(len(xd))])
    coeffs = _solve_normal(design, ys)
    return PolynomialModel(degree=degree, coeffs=coeffs[:degree], intercept=float(coeffs[-1]))


def poly_value(model: PolynomialModel, x):
    """Evaluate the 1-d polynomial model (Horner form)."""
    # np.polyval wants highest power first and includes the intercept
    full = np.concatenate([model.coeffs[::-1], [model.intercept]])
    return np.polyval(full, x)


def poly_grid_min(model: PolynomialModel, zeta_lower: float, zeta_upper: float) -> float:
    """Grid search over GRID_POINTS equally spaced points (both endpoints
    included); ties resolve to the smallest coordinate."""
    if zeta_lower > zeta_upper:
        raise ValueError("zeta_lower must not exceed zeta_upper")
    if zeta_lower == zeta_upper:
        return zeta_lower
    grid = np.linspace(zeta_lower, zeta_upper, GRID_POINTS)
    values = poly_value(model, grid)
    return float(grid[int(np.argmin(values))])


def polynomial_move(p: Particle, archive: SampleArchive, degree: int, k: int,
                    bounds: Bounds) -> np.ndarray:
    """Per dimension: fit a polynomial on the k samples nearest the axis
    line through the particle's current position, grid-minimize over the
    fitting set's coordinate range, and assemble the proposal."""
    dim = len(p.x)
    if archive.count < k:
        raise FallbackRequired("too few archived samples for polynomial fits")
    proposal = np.empty(dim)
    for d in range(dim):
        neighbors = archive.nearest_to_line(p.x, d, k)
        model = fit_polynomial_1d(neighbors, d, degree)
        xd = [s.x[d] for s in neighbors]
        proposal[d] = poly_grid_min(model, min(xd), max(xd))
    proposal = np.minimum(np.maximum(proposal, bounds.lower), bounds.upper)
    return proposal - p.x
