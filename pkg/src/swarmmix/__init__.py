"""swarmmix: hybrid swarm optimization with behavior mixing, a spatial
sample archive, surrogate local models, restart management and a
benchmark harness measuring evaluations-to-target."""

from .adaptation import BehaviorPool
from .archive import InsufficientSamplesError, SampleArchive
from .behaviors import (BehaviorKind, DeParams, FallbackRequired,
                        FitFailedError, PsoParams, bounded_parabola_peak,
                        de_trial, de_velocity, fit_polynomial_1d,
                        fit_quadratic, poly_grid_min, polynomial_move,
                        pso_velocity, quadratic_move)
from .config import AlgorithmSettings, ConfigError, ExperimentConfig, apply_preset
from .core import (Bounds, NonFiniteValueError, ObjectiveFunction, Particle,
                   RngStream, Sample, clamp, evaluate)
from .restart import RestartState, RestartThresholds, should_continue
from .runner import RunRecord, ecdf, run
from .searchspace import (InitStrategy, InitStrategyWeights, OptimaLedger,
                          init_swarm, next_bounds)
from .suite import FUNCTION_IDS, SUPPORTED_DIMS, BenchFunction, make_function

__version__ = "0.1.0"

__all__ = [
    "AlgorithmSettings", "BehaviorKind", "BehaviorPool", "BenchFunction",
    "Bounds", "ConfigError", "DeParams", "ExperimentConfig",
    "FUNCTION_IDS", "FallbackRequired", "FitFailedError", "InitStrategy",
    "InitStrategyWeights", "InsufficientSamplesError", "NonFiniteValueError",
    "ObjectiveFunction", "OptimaLedger", "Particle", "PsoParams",
    "RestartState", "RestartThresholds", "RngStream", "RunRecord",
    "SUPPORTED_DIMS", "Sample", "SampleArchive", "apply_preset",
    "bounded_parabola_peak", "clamp", "de_trial", "de_velocity", "ecdf",
    "evaluate", "fit_polynomial_1d", "fit_quadratic", "init_swarm",
    "make_function", "next_bounds", "poly_grid_min", "polynomial_move",
    "pso_velocity", "quadratic_move", "run", "should_continue",
]
