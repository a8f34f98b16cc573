"""Experiment configuration: defaults, ablation presets, the flat
``key = value`` config-file format and the reproducibility echo.

Precedence is CLI flags over config-file keys over defaults.  The echoed
file contains every effective key, so feeding it back reproduces the run
byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .suite import FUNCTION_IDS, SUPPORTED_DIMS


class ConfigError(ValueError):
    """Bad key, bad type or violated constraint; names the offender."""


@dataclass
class AlgorithmSettings:
    """Per-run algorithm parameters (matrix-independent)."""

    population: int | None = None          # None -> 10*dim
    weight_pso: float = 1000.0
    weight_de: float = 1000.0
    weight_quadratic: float = 1.0
    weight_polynomial: float = 1.0
    adaptation: bool = False
    adaptation_alpha: float = 0.1
    adaptation_floor: float = 1.0
    adaptation_horizon: int = 50
    assignment: str = "mixed"              # mixed | static
    pso_c1: float = 1.4
    pso_c2: float = 1.4
    pso_omega: float = 0.64
    de_cr: float = 0.9
    de_f_range: tuple[float, float] = (0.0, 1.4)
    quad_k: int | None = None              # None -> 5*dim
    poly_degree: int = 4
    poly_k: int | None = None              # None -> 4*dim+1
    restart_eps_x: float | None = None     # None -> 1e-8 * domain width
    restart_eps_f: float = 1e-12
    restart_max_stall: int | None = None   # None -> 10*dim
    init_p_full: float = 0.5
    init_p_random_box: float = 0.3
    init_p_near_best: float = 0.2
    init_box_margin: float = 0.1
    init_near_best_halfwidth: float = 0.01
    archive_capacity: int = 20_000
    archive_reset_on_restart: bool = True

    def resolved_population(self, dim: int) -> int:
        return self.population if self.population is not None else 10 * dim

    def resolved_quad_k(self, dim: int) -> int:
        return self.quad_k if self.quad_k is not None else 5 * dim

    def resolved_poly_k(self, dim: int) -> int:
        return self.poly_k if self.poly_k is not None else 4 * dim + 1

    def resolved_max_stall(self, dim: int) -> int:
        return self.restart_max_stall if self.restart_max_stall is not None else 10 * dim

    def resolved_eps_x(self, domain_width: float) -> float:
        return self.restart_eps_x if self.restart_eps_x is not None else 1e-8 * domain_width


DEFAULT_TARGETS = (1e1, 1e-1, 1e-4, 1e-8)


@dataclass
class ExperimentConfig:
    """The full experiment matrix plus algorithm settings."""

    functions: tuple[str, ...] = ("sphere",)
    dims: tuple[int, ...] = (2,)
    instances: tuple[int, ...] = tuple(range(1, 16))
    seed: int = 1
    budget: int | None = None              # None -> dim * 10^4 per run
    targets: tuple[float, ...] = DEFAULT_TARGETS
    jobs: int = 1
    output_dir: str = "results"
    figures: bool = True
    settings: AlgorithmSettings = field(default_factory=AlgorithmSettings)

    def resolved_budget(self, dim: int) -> int:
        return self.budget if self.budget is not None else dim * 10_000


# Ablation presets: which behaviors run, how they are assigned, whether the
# weights adapt, and whether re-initialization uses the optima ledger.
PRESETS = {
    "PD":    dict(weights=(1000.0, 1000.0, 0.0, 0.0), adaptation=False, assignment="mixed",  guided_init=False),
    "PDnm":  dict(weights=(1000.0, 1000.0, 0.0, 0.0), adaptation=False, assignment="static", guided_init=False),
    "PDa":   dict(weights=(1000.0, 1000.0, 0.0, 0.0), adaptation=True,  assignment="mixed",  guided_init=False),
    "PDL":   dict(weights=(1000.0, 1000.0, 1.0, 0.0), adaptation=False, assignment="mixed",  guided_init=False),
    "PDLP":  dict(weights=(1000.0, 1000.0, 1.0, 1.0), adaptation=False, assignment="mixed",  guided_init=False),
    "PDLr":  dict(weights=(1000.0, 1000.0, 1.0, 0.0), adaptation=False, assignment="mixed",  guided_init=True),
    "PDLPr": dict(weights=(1000.0, 1000.0, 1.0, 1.0), adaptation=False, assignment="mixed",  guided_init=True),
}


def apply_preset(settings: AlgorithmSettings, name: str) -> AlgorithmSettings:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    p = PRESETS[name]
    w_pso, w_de, w_quad, w_poly = p["weights"]
    init = (0.5, 0.3, 0.2) if p["guided_init"] else (1.0, 0.0, 0.0)
    return replace(
        settings,
        weight_pso=w_pso, weight_de=w_de,
        weight_quadratic=w_quad, weight_polynomial=w_poly,
        adaptation=p["adaptation"], assignment=p["assignment"],
        init_p_full=init[0], init_p_random_box=init[1], init_p_near_best=init[2],
    )


# ---------------------------------------------------------------------------
# flat key = value config format

def _parse_bool(key, raw):
    low = raw.strip().lower()
    if low in ("true", "on", "yes", "1"):
        return True
    if low in ("false", "off", "no", "0"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def _parse_int(key, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {raw!r}") from None


def _parse_float(key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {raw!r}") from None


def _parse_optional_int(key, raw):
    return None if raw.strip().lower() == "auto" else _parse_int(key, raw)


def _parse_optional_float(key, raw):
    return None if raw.strip().lower() == "auto" else _parse_float(key, raw)


def parse_f_range(key, raw):
    parts = raw.split(":")
    if len(parts) != 2:
        raise ConfigError(f"{key}: expected LOW:HIGH, got {raw!r}")
    lo, hi = (_parse_float(key, p) for p in parts)
    if lo > hi:
        raise ConfigError(f"{key}: range low exceeds high")
    return (lo, hi)


def parse_instances(key, raw):
    raw = raw.strip()
    if ":" in raw:
        a, b = raw.split(":", 1)
        lo, hi = _parse_int(key, a), _parse_int(key, b)
        if lo < 1 or hi < lo:
            raise ConfigError(f"{key}: bad instance range {raw!r}")
        return tuple(range(lo, hi + 1))
    if "," in raw:
        vals = tuple(_parse_int(key, p) for p in raw.split(","))
    else:
        count = _parse_int(key, raw)
        if count < 1:
            raise ConfigError(f"{key}: instance count must be positive")
        return tuple(range(1, count + 1))
    if any(v < 1 for v in vals):
        raise ConfigError(f"{key}: instances must be positive")
    return vals


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "on" if value else "off"
    if value is None:
        return "auto"
    if isinstance(value, float):
        return repr(value)
    return str(value)


# key -> (setter path, parser).  Paths starting with "settings." land on
# AlgorithmSettings, the rest on ExperimentConfig.
_KEYS = {
    "functions": ("functions", lambda k, v: tuple(p.strip() for p in v.split(","))),
    "dims": ("dims", lambda k, v: tuple(_parse_int(k, p) for p in v.split(","))),
    "instances": ("instances", parse_instances),
    "seed": ("seed", _parse_int),
    "budget": ("budget", _parse_optional_int),
    "targets": ("targets", lambda k, v: tuple(_parse_float(k, p) for p in v.split(","))),
    "jobs": ("jobs", _parse_int),
    "out": ("output_dir", lambda k, v: v.strip()),
    "figures": ("figures", _parse_bool),
    "population": ("settings.population", _parse_optional_int),
    "weights.pso": ("settings.weight_pso", _parse_float),
    "weights.de": ("settings.weight_de", _parse_float),
    "weights.quadratic": ("settings.weight_quadratic", _parse_float),
    "weights.polynomial": ("settings.weight_polynomial", _parse_float),
    "adaptation.enabled": ("settings.adaptation", _parse_bool),
    "adaptation.alpha": ("settings.adaptation_alpha", _parse_float),
    "adaptation.floor": ("settings.adaptation_floor", _parse_float),
    "adaptation.horizon": ("settings.adaptation_horizon", _parse_int),
    "assignment": ("settings.assignment", lambda k, v: v.strip()),
    "pso.c1": ("settings.pso_c1", _parse_float),
    "pso.c2": ("settings.pso_c2", _parse_float),
    "pso.omega": ("settings.pso_omega", _parse_float),
    "de.cr": ("settings.de_cr", _parse_float),
    "de.f_range": ("settings.de_f_range", parse_f_range),
    "quad.k": ("settings.quad_k", _parse_optional_int),
    "poly.degree": ("settings.poly_degree", _parse_int),
    "poly.k": ("settings.poly_k", _parse_optional_int),
    "restart.eps_x": ("settings.restart_eps_x", _parse_optional_float),
    "restart.eps_f": ("settings.restart_eps_f", _parse_float),
    "restart.max_stall": ("settings.restart_max_stall", _parse_optional_int),
    "init.p_full": ("settings.init_p_full", _parse_float),
    "init.p_random_box": ("settings.init_p_random_box", _parse_float),
    "init.p_near_best": ("settings.init_p_near_best", _parse_float),
    "init.box_margin": ("settings.init_box_margin", _parse_float),
    "init.near_best_halfwidth": ("settings.init_near_best_halfwidth", _parse_float),
    "archive.capacity": ("settings.archive_capacity", _parse_int),
    "archive.reset_on_restart": ("settings.archive_reset_on_restart", _parse_bool),
}


def set_key(config: ExperimentConfig, key: str, raw: str):
    """Apply one ``key = value`` assignment (in place)."""
    if key not in _KEYS:
        raise ConfigError(f"unknown config key {key!r}")
    path, parser = _KEYS[key]
    value = parser(key, raw)
    if path.startswith("settings."):
        setattr(config.settings, path.split(".", 1)[1], value)
    else:
        setattr(config, path, value)


def read_config_file(config: ExperimentConfig, path: str):
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, raw = (part.strip() for part in stripped.split("=", 1))
            set_key(config, key, raw)


def echo_items(config: ExperimentConfig) -> list[tuple[str, str]]:
    """Every effective key as (key, formatted value), sorted."""
    out = []
    for key, (path, _) in _KEYS.items():
        if path.startswith("settings."):
            value = getattr(config.settings, path.split(".", 1)[1])
        else:
            value = getattr(config, path)
        if key in ("functions",):
            text = ",".join(value)
        elif key in ("dims", "targets"):
            text = ",".join(_fmt(v) for v in value)
        elif key == "instances":
            text = ",".join(str(v) for v in value)
        elif key == "de.f_range":
            text = f"{_fmt(value[0])}:{_fmt(value[1])}"
        else:
            text = _fmt(value)
        out.append((key, text))
    return sorted(out)


def write_echo(config: ExperimentConfig, path: str):
    with open(path, "w") as fh:
        fh.write("# effective configuration; feed back with --config to reproduce\n")
        for key, text in echo_items(config):
            fh.write(f"{key} = {text}\n")


def validate(config: ExperimentConfig):
    """Reject inconsistent configurations before any run starts."""
    s = config.settings
    if not config.functions:
        raise ConfigError("functions: at least one function id required")
    for fid in config.functions:
        if fid not in FUNCTION_IDS:
            raise ConfigError(f"functions: unknown id {fid!r}")
    for dim in config.dims:
        if dim not in SUPPORTED_DIMS:
            raise ConfigError(f"dims: unsupported dimension {dim}")
    if config.seed < 0:
        raise ConfigError("seed: must be non-negative")
    if config.jobs < 1:
        raise ConfigError("jobs: must be positive")
    if not config.targets or any(t <= 0 for t in config.targets):
        raise ConfigError("targets: must be positive precision values")
    if s.population is not None and s.population < 3:
        raise ConfigError("population: must be at least 3")
    if s.assignment not in ("mixed", "static"):
        raise ConfigError("assignment: must be 'mixed' or 'static'")
    weights = (s.weight_pso, s.weight_de, s.weight_quadratic, s.weight_polynomial)
    if any(w < 0 for w in weights):
        raise ConfigError("weights.*: must be non-negative")
    if all(w == 0 for w in weights):
        raise ConfigError("weights.*: at least one behavior weight must be positive")
    if not 0.0 <= s.de_cr <= 1.0:
        raise ConfigError("de.cr: must lie in [0, 1]")
    if not 0.0 <= s.adaptation_alpha <= 1.0:
        raise ConfigError("adaptation.alpha: must lie in [0, 1]")
    if s.adaptation_floor <= 0:
        raise ConfigError("adaptation.floor: must be positive")
    if s.adaptation_horizon < 1:
        raise ConfigError("adaptation.horizon: must be positive")
    if s.poly_degree < 2:
        raise ConfigError("poly.degree: must be at least 2")
    if s.archive_capacity < 1:
        raise ConfigError("archive.capacity: must be positive")
    if s.restart_eps_f < 0 or (s.restart_eps_x is not None and s.restart_eps_x < 0):
        raise ConfigError("restart.eps_*: must be non-negative")
    if s.restart_max_stall is not None and s.restart_max_stall < 1:
        raise ConfigError("restart.max_stall: must be positive")
    init = (s.init_p_full, s.init_p_random_box, s.init_p_near_best)
    if any(p < 0 for p in init) or abs(sum(init) - 1.0) > 1e-9:
        raise ConfigError("init.p_*: probabilities must be non-negative and sum to 1")
    for dim in config.dims:
        pop = s.resolved_population(dim)
        if pop < 3:
            raise ConfigError("population: must be at least 3")
        budget = config.resolved_budget(dim)
        if budget < pop:
            raise ConfigError(f"budget: {budget} cannot cover one initialization "
                              f"(population {pop})")
        if s.resolved_quad_k(dim) > s.archive_capacity:
            raise ConfigError("quad.k: exceeds archive capacity")
        if s.resolved_poly_k(dim) > s.archive_capacity:
            raise ConfigError("poly.k: exceeds archive capacity")
