"""Command-line entry point: parse flags and config files, run the
experiment matrix (optionally in parallel), write CSVs and figures."""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import config as cfg
from . import report
from .runner import run

ENV_OUTPUT_DIR = "SWARMMIX_OUT"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="swarmmix",
        description="Hybrid swarm optimizer benchmark runner: PSO, DE and "
                    "surrogate-model behaviors mixed over a shared sample archive.",
    )
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--preset", choices=sorted(cfg.PRESETS),
                   help="named behavior-pool configuration")
    p.add_argument("--function", help="comma-separated function ids")
    p.add_argument("--dim", help="comma-separated dimensions")
    p.add_argument("--instances", help="count N (runs 1..N), range A:B, or comma list")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--budget", help="evaluation budget per run, or 'auto' (dim*1e4)")
    p.add_argument("--population", help="swarm size, or 'auto' (10*dim)")
    p.add_argument("--targets", help="comma-separated precision targets")
    p.add_argument("--adaptation", choices=["on", "off"], help="adapt behavior weights")
    p.add_argument("--assignment", choices=["mixed", "static"],
                   help="redraw behaviors each iteration, or fix them per particle")
    p.add_argument("--weight-pso", type=float, dest="weight_pso")
    p.add_argument("--weight-de", type=float, dest="weight_de")
    p.add_argument("--weight-quadratic", type=float, dest="weight_quadratic")
    p.add_argument("--weight-polynomial", type=float, dest="weight_polynomial")
    p.add_argument("--pso-c1", type=float, dest="pso_c1")
    p.add_argument("--pso-c2", type=float, dest="pso_c2")
    p.add_argument("--pso-omega", type=float, dest="pso_omega")
    p.add_argument("--de-cr", type=float, dest="de_cr")
    p.add_argument("--de-f-range", dest="de_f_range", help="mutation scale range LOW:HIGH")
    p.add_argument("--archive-capacity", type=int, dest="archive_capacity")
    p.add_argument("--jobs", type=int, help="concurrent runs")
    p.add_argument("--out", help="output directory "
                                 f"(default ${ENV_OUTPUT_DIR} or ./results)")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="assign any config key directly (repeatable)")
    return p


def parse_config(argv) -> cfg.ExperimentConfig:
    """CLI flags override config-file keys override defaults."""
    parser = build_parser()
    args = parser.parse_args(argv)
    config = cfg.ExperimentConfig()
    config.output_dir = os.environ.get(ENV_OUTPUT_DIR, "results")
    try:
        if args.config:
            cfg.read_config_file(config, args.config)
        if args.preset:
            config.settings = cfg.apply_preset(config.settings, args.preset)
        flag_keys = [
            ("function", "functions"), ("dim", "dims"), ("instances", "instances"),
            ("seed", "seed"), ("budget", "budget"), ("population", "population"),
            ("targets", "targets"), ("adaptation", "adaptation.enabled"),
            ("assignment", "assignment"),
            ("weight_pso", "weights.pso"), ("weight_de", "weights.de"),
            ("weight_quadratic", "weights.quadratic"),
            ("weight_polynomial", "weights.polynomial"),
            ("pso_c1", "pso.c1"), ("pso_c2", "pso.c2"), ("pso_omega", "pso.omega"),
            ("de_cr", "de.cr"), ("de_f_range", "de.f_range"),
            ("archive_capacity", "archive.capacity"),
            ("jobs", "jobs"), ("out", "out"),
        ]
        for attr, key in flag_keys:
            value = getattr(args, attr)
            if value is not None:
                cfg.set_key(config, key, str(value))
        for item in args.set:
            if "=" not in item:
                raise cfg.ConfigError(f"--set expects KEY=VALUE, got {item!r}")
            key, raw = item.split("=", 1)
            cfg.set_key(config, key.strip(), raw.strip())
        if args.no_figures:
            config.figures = False
        cfg.validate(config)
    except cfg.ConfigError as exc:
        parser.error(str(exc))
    return config


def _run_one(payload):
    config, fid, dim, instance = payload
    return run(config, fid, dim, instance)


def execute(config: cfg.ExperimentConfig, log=print) -> int:
    """Run the matrix and emit outputs; returns the process exit status."""
    matrix = [(config, fid, dim, inst)
              for fid in config.functions
              for dim in config.dims
              for inst in config.instances]
    records = []
    failures = []
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            futures = [pool.submit(_run_one, item) for item in matrix]
            outcomes = []
            for fut in futures:
                try:
                    outcomes.append(fut.result())
                except Exception as exc:  # noqa: BLE001 - report and flag
                    outcomes.append(exc)
    else:
        outcomes = []
        for item in matrix:
            try:
                outcomes.append(_run_one(item))
            except Exception as exc:  # noqa: BLE001 - report and flag
                outcomes.append(exc)
    for (_, fid, dim, inst), outcome in zip(matrix, outcomes):
        if isinstance(outcome, Exception):
            failures.append((fid, dim, inst, outcome))
            log(f"FAILED {fid} {dim}D instance {inst}: {outcome}", file=sys.stderr)
            continue
        records.append(outcome)
        gap = outcome.best_value - outcome.f_opt
        log(f"{fid} {dim}D instance {inst}: best precision {gap:.3e} "
            f"after {outcome.evaluations_used} evaluations, "
            f"{len(outcome.restarts)} restarts")

    try:
        os.makedirs(config.output_dir, exist_ok=True)
        cfg.write_echo(config, os.path.join(config.output_dir, "config.txt"))
        if records:
            report.emit_all(records, config.targets, config.output_dir,
                            figures=config.figures)
        if failures:
            flag = os.path.join(config.output_dir, "FAILED.txt")
            with open(flag, "w") as fh:
                for fid, dim, inst, exc in failures:
                    fh.write(f"{fid} {dim}D instance {inst}: {exc}\n")
            log(f"partial results: {len(failures)} of {len(matrix)} runs failed "
                f"(see {flag})", file=sys.stderr)
            return 1
    except OSError as exc:
        log(f"cannot write outputs: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    config = parse_config(sys.argv[1:] if argv is None else argv)

    def log(*parts, file=sys.stdout):
        print(*parts, file=file)

    status = execute(config, log=log)
    if argv is None:
        sys.exit(status)
    return status


if __name__ == "__main__":
    main()
