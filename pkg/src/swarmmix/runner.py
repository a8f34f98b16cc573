"""The optimization loop: restart-managed segments of behavior-mixed
particle moves over a shared sample archive, recorded as evaluations-to-
target benchmark data."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .adaptation import BehaviorPool
from .archive import SampleArchive
from .behaviors import (BehaviorKind, DeParams, FallbackRequired, PsoParams,
                        de_trial, de_velocity, polynomial_move, pso_velocity,
                        quadratic_move)
from .config import DEFAULT_TARGETS, AlgorithmSettings, ExperimentConfig
from .core import RngStream, Sample, clamp
from .restart import RestartState, RestartThresholds, should_continue
from .searchspace import InitStrategyWeights, OptimaLedger, init_swarm, next_bounds
from .suite import FUNCTION_IDS, make_function


@dataclass
class RestartEvent:
    iteration: int
    evaluations: int
    trigger: str
    best_value: float


@dataclass
class ShareRow:
    iteration: int
    p_pso: float
    p_de: float
    p_quadratic: float
    p_polynomial: float
    improved: bool


@dataclass
class RunRecord:
    """Everything one run produced, enough to rebuild every CSV."""

    function: str
    instance: int
    dim: int
    seed: int
    budget: int
    f_opt: float
    targets: tuple[float, ...]
    trajectory: list[tuple[int, float]] = field(default_factory=list)
    first_hits: dict[float, int | None] = field(default_factory=dict)
    restarts: list[RestartEvent] = field(default_factory=list)
    shares: list[ShareRow] = field(default_factory=list)
    evaluations_used: int = 0
    best_value: float = math.inf


class _Tracker:
    """Best-so-far bookkeeping: trajectory points and target first hits."""

    def __init__(self, record: RunRecord):
        self.record = record
        self.best = math.inf
        targets = sorted(record.targets)
        self.tightest = targets[0]
        self.pending = list(record.targets)
        self.done = False

    def update(self, value: float, eval_index: int):
        if value >= self.best:
            return
        self.best = value
        self.record.trajectory.append((eval_index, value))
        delta = value - self.record.f_opt
        for t in [t for t in self.pending if delta <= t]:
            self.record.first_hits[t] = eval_index
            self.pending.remove(t)
        if delta <= self.tightest:
            self.done = True


class _CachedObjective:
    """Algorithm-1 evaluation path: archive lookup first, true evaluation
    (and store) only on a miss.  Cache hits consume no budget."""

    def __init__(self, fn, archive: SampleArchive, tracker: _Tracker):
        self.fn = fn
        self.archive = archive
        self.tracker = tracker

    @property
    def evaluations(self) -> int:
        return self.fn.evaluations

    def __call__(self, x) -> Sample:
        cached = self.archive.lookup_exact(x)
        if cached is not None:
            return cached
        sample = self.fn.evaluate(x)
        self.archive.store(sample)
        self.tracker.update(sample.value, self.fn.evaluations)
        return sample


def run_seed_stream(master_seed: int, fid: str, dim: int, instance: int) -> RngStream:
    """Deterministic per-run sub-stream of the master seed."""
    return RngStream([master_seed, FUNCTION_IDS.index(fid), dim, instance])


def run(config: ExperimentConfig, fid: str, dim: int, instance: int) -> RunRecord:
    """Execute one full run; deterministic given the config and master seed."""
    s: AlgorithmSettings = config.settings
    fn = make_function(fid, instance, dim)
    budget = config.resolved_budget(dim)
    population = s.resolved_population(dim)
    quad_k = s.resolved_quad_k(dim)
    poly_k = s.resolved_poly_k(dim)
    domain_width = float(np.max(fn.bounds.width))
    thresholds = RestartThresholds(
        eps_x=s.resolved_eps_x(domain_width),
        eps_f=s.restart_eps_f,
        max_stall_iterations=s.resolved_max_stall(dim),
    )
    rng = run_seed_stream(config.seed, fid, dim, instance)
    record = RunRecord(function=fid, instance=instance, dim=dim, seed=config.seed,
                       budget=budget, f_opt=fn.f_opt, targets=tuple(config.targets),
                       first_hits={t: None for t in config.targets})
    tracker = _Tracker(record)
    archive = SampleArchive(dim, s.archive_capacity)
    evaluator = _CachedObjective(fn, archive, tracker)
    pool = BehaviorPool(
        initial_weights={
            BehaviorKind.PSO: s.weight_pso,
            BehaviorKind.DE: s.weight_de,
            BehaviorKind.QUADRATIC: s.weight_quadratic,
            BehaviorKind.POLYNOMIAL: s.weight_polynomial,
        },
        adapt=s.adaptation, alpha=s.adaptation_alpha,
        floor=s.adaptation_floor, equalization_horizon=s.adaptation_horizon,
    )
    pso_params = PsoParams(c1=s.pso_c1, c2=s.pso_c2, omega=s.pso_omega)
    de_params = DeParams(crossover_probability=s.de_cr, f_range=s.de_f_range)
    init_weights = InitStrategyWeights(s.init_p_full, s.init_p_random_box,
                                       s.init_p_near_best)
    ledger = OptimaLedger()
    iteration = 0

    while fn.evaluations < budget and not tracker.done:
        bounds, _strategy = next_bounds(ledger, fn.bounds, init_weights, rng,
                                        box_margin=s.init_box_margin,
                                        near_best_halfwidth=s.init_near_best_halfwidth)
        if s.archive_reset_on_restart:
            archive.clear()
        swarm = init_swarm(bounds, population, rng, evaluator)
        static_kinds = None
        if s.assignment == "static":
            static_kinds = [pool.draw_static(rng) for _ in swarm]
        segment_best = min((p.best for p in swarm), key=lambda b: b.value)
        state = RestartState(thresholds)

        restarted = False
        while fn.evaluations < budget and not tracker.done:
            go_on, trigger = should_continue(state, swarm)
            if not go_on:
                record.restarts.append(RestartEvent(iteration, fn.evaluations,
                                                    trigger, segment_best.value))
                restarted = True
                break
            probs = pool.probabilities()
            for i, p in enumerate(swarm):
                if fn.evaluations >= budget or tracker.done:
                    break
                if static_kinds is not None:
                    kind = static_kinds[i]
                    pool.count_usage(kind)
                else:
                    kind = pool.sample(rng)
                kind, v = _velocity(kind, i, p, swarm, segment_best, archive,
                                    fn.bounds, pso_params, de_params, quad_k,
                                    poly_k, s.poly_degree, rng, pool)
                if kind is not BehaviorKind.PSO and not np.all(np.isfinite(v)):
                    # a wildly extrapolated surrogate can overflow; treat it
                    # like any other failed proposal
                    pool.note_fallback(kind)
                    kind = BehaviorKind.PSO
                    v = _pso_step(i, p, swarm, pso_params, rng)
                moved = p.x + v
                new_x = clamp(moved, fn.bounds)
                v = np.where(new_x == moved, v, 0.0)
                p.x = new_x
                p.v = v
                sample = evaluator(p.x)
                delta = max(0.0, segment_best.value - sample.value)
                pool.register_improvement(kind, delta)
                if sample.value < p.best.value:
                    p.best = sample
                if sample.value < segment_best.value:
                    segment_best = sample
            improved = pool.recompute_probabilities()
            record.shares.append(ShareRow(iteration, probs[BehaviorKind.PSO],
                                          probs[BehaviorKind.DE],
                                          probs[BehaviorKind.QUADRATIC],
                                          probs[BehaviorKind.POLYNOMIAL],
                                          improved))
            state.observe(improved)
            iteration += 1

        if restarted:
            ledger.append(segment_best)

    record.evaluations_used = fn.evaluations
    record.best_value = tracker.best
    return record


def _pso_step(i, p, swarm, pso_params, rng):
    nb = min((swarm[j].best for j in p.neighborhood), key=lambda b: b.value)
    return pso_velocity(p, nb, pso_params, rng)


def _velocity(kind, i, p, swarm, segment_best, archive, bounds, pso_params,
              de_params, quad_k, poly_k, poly_degree, rng, pool):
    """(actual kind, velocity); a failed proposal degrades to a PSO step."""
    try:
        if kind is BehaviorKind.PSO:
            return kind, _pso_step(i, p, swarm, pso_params, rng)
        if kind is BehaviorKind.DE:
            population = [q.best for q in swarm]
            trial = de_trial(p, segment_best, population, de_params, rng, self_index=i)
            return kind, de_velocity(p, trial)
        if kind is BehaviorKind.QUADRATIC:
            return kind, quadratic_move(p, archive, quad_k, bounds)
        return kind, polynomial_move(p, archive, poly_degree, poly_k, bounds)
    except FallbackRequired:
        pool.note_fallback(kind)
        return BehaviorKind.PSO, _pso_step(i, p, swarm, pso_params, rng)


def ecdf(records: list[RunRecord], targets=DEFAULT_TARGETS,
         points: int = 101) -> list[tuple[float, float]]:
    """Runtime profile: fraction of (function, instance, target) triples
    solved within dim * 10^a evaluations, over a grid of a values."""
    if not records:
        raise ValueError("ecdf needs at least one record")
    total = len(records) * len(targets)
    amax = max(math.log10(max(r.budget, r.dim) / r.dim) for r in records)
    if amax <= 0:
        grid = [0.0]
    else:
        grid = list(np.linspace(0.0, amax, points))
    hits = []
    for r in records:
        for t in targets:
            hit = r.first_hits.get(t)
            if hit is not None:
                hits.append(hit / r.dim)
    out = []
    for a in grid:
        limit = 10.0 ** a
        solved = sum(1 for h in hits if h <= limit)
        out.append((float(a), solved / total))
    return out
