import numpy as np
import pytest

from swarmmix import ExperimentConfig, RunRecord, ecdf, make_function, run
from swarmmix.archive import SampleArchive
from swarmmix.runner import _CachedObjective, _Tracker


def small_config(fid="sphere", dim=2, budget=3000, seed=11, **settings):
    cfg = ExperimentConfig(functions=(fid,), dims=(dim,), instances=(1,),
                           seed=seed, budget=budget)
    for key, value in settings.items():
        setattr(cfg.settings, key, value)
    return cfg


def test_identical_seeds_give_identical_records():
    cfg = small_config()
    a = run(cfg, "sphere", 2, 1)
    b = run(cfg, "sphere", 2, 1)
    assert a.trajectory == b.trajectory
    assert a.first_hits == b.first_hits
    assert a.best_value == b.best_value
    assert [(r.iteration, r.trigger) for r in a.restarts] == \
           [(r.iteration, r.trigger) for r in b.restarts]
    assert a.shares == b.shares


def test_different_seeds_diverge():
    a = run(small_config(seed=1), "sphere", 2, 1)
    b = run(small_config(seed=2), "sphere", 2, 1)
    assert a.trajectory != b.trajectory


def test_cached_coordinates_consume_no_budget():
    fn = make_function("sphere", 1, 2)
    record = RunRecord(function="sphere", instance=1, dim=2, seed=0, budget=100,
                       f_opt=fn.f_opt, targets=(1e-8,), first_hits={1e-8: None})
    evaluator = _CachedObjective(fn, SampleArchive(2), _Tracker(record))
    x = np.array([1.25, -0.5])
    first = evaluator(x)
    assert fn.evaluations == 1
    second = evaluator(np.array([1.25, -0.5]))
    assert fn.evaluations == 1
    assert second is first


def test_cache_miss_on_perturbed_coordinates():
    fn = make_function("sphere", 1, 2)
    record = RunRecord(function="sphere", instance=1, dim=2, seed=0, budget=100,
                       f_opt=fn.f_opt, targets=(1e-8,), first_hits={1e-8: None})
    evaluator = _CachedObjective(fn, SampleArchive(2), _Tracker(record))
    evaluator(np.array([1.25, -0.5]))
    evaluator(np.array([1.25, -0.5 + 1e-15]))
    assert fn.evaluations == 2


def test_budget_overshoot_bounded_by_population():
    cfg = small_config(budget=500)
    rec = run(cfg, "rastrigin", 2, 1)
    assert rec.evaluations_used <= 500 + cfg.settings.resolved_population(2)


def test_best_so_far_is_non_increasing():
    rec = run(small_config(budget=2000), "rastrigin", 2, 1)
    values = [v for _, v in rec.trajectory]
    assert all(a > b for a, b in zip(values, values[1:]))
    evals = [e for e, _ in rec.trajectory]
    assert all(a < b for a, b in zip(evals, evals[1:]))


def test_first_hits_monotone_in_target():
    rec = run(small_config(budget=20000), "sphere", 2, 1)
    hits = [rec.first_hits[t] for t in sorted(rec.targets, reverse=True)]
    assert all(h is not None for h in hits)
    assert all(a <= b for a, b in zip(hits, hits[1:]))


def test_sphere_2d_default_reaches_tightest_target():
    rec = run(small_config(budget=20000), "sphere", 2, 1)
    assert rec.first_hits[1e-8] is not None
    assert rec.best_value - rec.f_opt <= 1e-8


def test_run_stops_once_tightest_target_hit():
    rec = run(small_config(budget=20000), "sphere", 2, 1)
    assert rec.evaluations_used < 20000
    assert rec.evaluations_used == rec.first_hits[1e-8]


def test_restarts_are_recorded_with_known_triggers():
    cfg = small_config(fid="rastrigin", budget=20000, restart_max_stall=5)
    rec = run(cfg, "rastrigin", 2, 1)
    assert rec.restarts, "expected at least one restart on a multimodal run"
    for event in rec.restarts:
        assert event.trigger in ("location_spread", "value_spread", "stall")
    assert rec.first_hits[1e-8] is not None  # restarts recover progress


def test_share_log_rows_are_probabilities():
    rec = run(small_config(budget=1500), "rastrigin", 2, 1)
    assert rec.shares
    for row in rec.shares:
        total = row.p_pso + row.p_de + row.p_quadratic + row.p_polynomial
        assert total == pytest.approx(1.0, abs=1e-12)


def test_static_assignment_runs():
    cfg = small_config(budget=3000, assignment="static",
                       weight_quadratic=0.0, weight_polynomial=0.0)
    rec = run(cfg, "sphere", 2, 1)
    assert rec.best_value - rec.f_opt < 1e1


def test_run_without_archive_reset_on_restart():
    cfg = small_config(fid="rastrigin", budget=5000, archive_reset_on_restart=False,
                       restart_max_stall=5)
    rec = run(cfg, "rastrigin", 2, 1)
    assert rec.evaluations_used > 0


# --- ecdf -------------------------------------------------------------------

def fake_record(dim=2, budget=20000, hits=()):
    targets = (1e1, 1e-1, 1e-4, 1e-8)
    first = dict(zip(targets, list(hits) + [None] * (len(targets) - len(hits))))
    return RunRecord(function="sphere", instance=1, dim=dim, seed=0, budget=budget,
                     f_opt=0.0, targets=targets, first_hits=first)


def test_ecdf_instant_solver_saturates_immediately():
    rec = fake_record(hits=(1, 1, 1, 1))
    points = ecdf([rec], rec.targets)
    assert points[0][1] == 1.0
    assert points[-1][1] == 1.0


def test_ecdf_unsolved_is_constant_zero():
    rec = fake_record(hits=())
    points = ecdf([rec], rec.targets)
    assert all(frac == 0.0 for _, frac in points)


def test_ecdf_half_solved_plateaus_at_half():
    solved = fake_record(hits=(1, 1, 1, 1))
    unsolved = fake_record(hits=())
    points = ecdf([solved, unsolved], solved.targets)
    assert points[-1][1] == 0.5


def test_ecdf_monotone_and_bounded():
    rec = fake_record(hits=(5, 80, 1500, 12000))
    points = ecdf([rec], rec.targets)
    fracs = [f for _, f in points]
    assert all(0.0 <= f <= 1.0 for f in fracs)
    assert all(a <= b for a, b in zip(fracs, fracs[1:]))
    assert fracs[-1] == 1.0
