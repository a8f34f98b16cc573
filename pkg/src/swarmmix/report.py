"""Result emission: the delimited outputs (trajectory, summary, ECDF,
behavior-share and restart CSVs) and the matplotlib figures rendered
alongside them."""

from __future__ import annotations

import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .runner import RunRecord, ecdf  # noqa: E402


def _sorted(records: list[RunRecord]) -> list[RunRecord]:
    return sorted(records, key=lambda r: (r.function, r.dim, r.instance))


def _fmt(value) -> str:
    return repr(float(value))


def write_trajectories(records: list[RunRecord], path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["function", "instance", "dim", "seed", "eval_index", "best_value"])
        for r in _sorted(records):
            for evals, best in r.trajectory:
                w.writerow([r.function, r.instance, r.dim, r.seed, evals, _fmt(best)])


def write_summary(records: list[RunRecord], path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["function", "instance", "dim", "target", "first_hit_evals"])
        for r in _sorted(records):
            for target in r.targets:
                hit = r.first_hits.get(target)
                w.writerow([r.function, r.instance, r.dim, _fmt(target),
                            "" if hit is None else hit])


def write_ecdf(points: list[tuple[float, float]], path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["budget_per_dim_log10", "fraction_solved"])
        for a, frac in points:
            w.writerow([_fmt(a), _fmt(frac)])


def write_shares(records: list[RunRecord], path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["function", "instance", "dim", "iteration",
                    "p_pso", "p_de", "p_quadratic", "p_polynomial", "improved"])
        for r in _sorted(records):
            for row in r.shares:
                w.writerow([r.function, r.instance, r.dim, row.iteration,
                            _fmt(row.p_pso), _fmt(row.p_de), _fmt(row.p_quadratic),
                            _fmt(row.p_polynomial), int(row.improved)])


def write_restarts(records: list[RunRecord], path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["function", "instance", "dim", "iteration", "evaluations",
                    "trigger", "best_value"])
        for r in _sorted(records):
            for ev in r.restarts:
                w.writerow([r.function, r.instance, r.dim, ev.iteration,
                            ev.evaluations, ev.trigger, _fmt(ev.best_value)])


def render_ecdf(points: list[tuple[float, float]], path):
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    ax.step(xs, ys, where="post")
    ax.set_xlabel(r"$\log_{10}$(evaluations / dim)")
    ax.set_ylabel("fraction of targets reached")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_convergence(records: list[RunRecord], path):
    """Best-so-far precision curves, one panel per (function, dim)."""
    groups = defaultdict(list)
    for r in records:
        groups[(r.function, r.dim)].append(r)
    n = len(groups)
    fig, axes = plt.subplots(1, n, figsize=(5 * n, 4), squeeze=False)
    for ax, (key, group) in zip(axes[0], sorted(groups.items())):
        for r in sorted(group, key=lambda g: g.instance):
            xs = [e for e, _ in r.trajectory]
            ys = [max(b - r.f_opt, 1e-12) for _, b in r.trajectory]
            ax.plot(xs, ys, alpha=0.6, lw=0.8)
        ax.set_yscale("log")
        ax.set_xlabel("evaluations")
        ax.set_ylabel("best value precision")
        ax.set_title(f"{key[0]} {key[1]}D")
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_shares(record: RunRecord, path):
    """Behavior selection probabilities over one run's iterations."""
    fig, ax = plt.subplots(figsize=(7, 4))
    iters = [row.iteration for row in record.shares]
    for label, attr in (("pso", "p_pso"), ("de", "p_de"),
                        ("quadratic", "p_quadratic"), ("polynomial", "p_polynomial")):
        ax.plot(iters, [getattr(row, attr) for row in record.shares], label=label, lw=0.9)
    improved = [row.iteration for row in record.shares if row.improved]
    if improved:
        ax.plot(improved, [1.01] * len(improved), "k.", ms=2, label="improved")
    ax.set_xlabel("iteration")
    ax.set_ylabel("selection probability")
    ax.set_title(f"{record.function} {record.dim}D instance {record.instance}")
    ax.set_ylim(-0.02, 1.06)
    ax.legend(loc="center right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def emit_all(records: list[RunRecord], targets, out_dir, figures: bool = True):
    """Write every CSV (and figures unless disabled) into ``out_dir``."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    write_trajectories(records, os.path.join(out_dir, "trajectory.csv"))
    write_summary(records, os.path.join(out_dir, "summary.csv"))
    points = ecdf(records, targets)
    write_ecdf(points, os.path.join(out_dir, "ecdf.csv"))
    write_shares(records, os.path.join(out_dir, "behavior_shares.csv"))
    write_restarts(records, os.path.join(out_dir, "restarts.csv"))
    if figures:
        render_ecdf(points, os.path.join(out_dir, "ecdf.png"))
        render_convergence(records, os.path.join(out_dir, "convergence.png"))
        by_pair = {}
        for r in _sorted(records):
            by_pair.setdefault((r.function, r.dim), r)
        for (fid, dim), record in sorted(by_pair.items()):
            render_shares(record, os.path.join(out_dir, f"shares_{fid}_{dim}d.png"))
