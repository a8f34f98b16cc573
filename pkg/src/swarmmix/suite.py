"""Self-contained benchmark suite in the BBOB style: shifted (and where
noted, rotated) classic test functions on [-5, 5]^dim with an
instance-seeded optimum location and value offset.

Every function satisfies f(x_opt) = f_opt exactly by construction.  The
closed forms, with z = x - x_opt (rotated where noted):

- sphere:            f = sum z_d^2
- ellipsoid:         f = sum 10^(6(d-1)/(D-1)) z_d^2,  z rotated
- linear_slope:      x_opt is a corner of the domain (+-5 per axis);
                     s_d = sign(x_opt_d) 10^((d-1)/(D-1));
                     f = sum (5|s_d| - s_d z_d) with z_d = x_d while
                     x_d x_opt_d < 25, else x_opt_d (plateau past the corner)
- attractive_sector: f = (sum (s_d z_d)^2)^0.9, s_d = 100 where z_d has the
                     same sign as the instance's sector vector, else 1;
                     z rotated
- step_ellipsoid:    f = 0.1 sum 10^(2(d-1)/(D-1)) round(z_d)^2, z rotated;
                     piecewise constant (unit plateaus)
- rosenbrock:        f = sum_{d<D} 100 (w_d^2 - w_{d+1})^2 + (w_d - 1)^2,
                     w = z + 1
- rastrigin:         f = sum (10 + z_d^2 - 10 cos(2 pi z_d))
- schwefel:          f = sum (V - w_d sin(sqrt(w_d))), w_d = W (1 + z_d/25);
                     W = 420.9687463599821 is the ripple peak and
                     V = W sin(sqrt(W)) its value, so the reachable range
                     holds exactly one peak per dimension
"""

from __future__ import annotations

import numpy as np

from .core import Bounds, ObjectiveFunction

DOMAIN_LOWER = -5.0
DOMAIN_UPPER = 5.0
SUPPORTED_DIMS = (2, 3, 5, 10, 20, 40)

# ripple peak of w*sin(sqrt(w)) nearest the classic Schwefel optimum
_SCHWEFEL_W = 420.9687463599821
_SCHWEFEL_V = _SCHWEFEL_W * np.sin(np.sqrt(_SCHWEFEL_W))

_SUITE_SALT = 0x5A17  # keeps function instances independent of run seeds


class BenchFunction(ObjectiveFunction):
    """A suite function: knows its optimum location and value."""

    def __init__(self, fid: str, instance: int, dim: int, x_opt: np.ndarray,
                 f_opt: float):
        super().__init__(dim, Bounds.cube(DOMAIN_LOWER, DOMAIN_UPPER, dim))
        self.fid = fid
        self.instance = instance
        self.x_opt = x_opt
        self.f_opt = f_opt

    def _core(self, z: np.ndarray) -> float:
        raise NotImplementedError

    def _raw(self, x: np.ndarray) -> float:
        return self._core(x - self.x_opt) + self.f_opt


class _Rotated(BenchFunction):
    def __init__(self, fid, instance, dim, x_opt, f_opt, rotation):
        super().__init__(fid, instance, dim, x_opt, f_opt)
        self.rotation = rotation

    def _raw(self, x: np.ndarray) -> float:
        return self._core(self.rotation @ (x - self.x_opt)) + self.f_opt


class Sphere(BenchFunction):
    def _core(self, z):
        return float(np.dot(z, z))


class Ellipsoid(_Rotated):
    def __init__(self, *args):
        super().__init__(*args)
        d = np.arange(self.dim)
        self._scales = 10.0 ** (6.0 * d / (self.dim - 1))

    def _core(self, z):
        return float(np.dot(self._scales, z * z))


class LinearSlope(BenchFunction):
    def __init__(self, fid, instance, dim, x_opt, f_opt):
        super().__init__(fid, instance, dim, x_opt, f_opt)
        d = np.arange(dim)
        self._s = np.sign(x_opt) * 10.0 ** (d / (dim - 1))

    def _raw(self, x):
        # plateau once past the optimal corner
        z = np.where(x * self.x_opt < 25.0, x, self.x_opt)
        return float(np.sum(5.0 * np.abs(self._s) - self._s * z)) + self.f_opt


class AttractiveSector(_Rotated):
    def __init__(self, fid, instance, dim, x_opt, f_opt, rotation, sector_signs):
        super().__init__(fid, instance, dim, x_opt, f_opt, rotation)
        self._signs = sector_signs

    def _core(self, z):
        s = np.where(z * self._signs > 0.0, 100.0, 1.0)
        return float(np.sum((s * z) ** 2) ** 0.9)


class StepEllipsoid(_Rotated):
    def __init__(self, *args):
        super().__init__(*args)
        d = np.arange(self.dim)
        self._scales = 10.0 ** (2.0 * d / (self.dim - 1))

    def _core(self, z):
        stepped = np.floor(0.5 + z)
        return 0.1 * float(np.dot(self._scales, stepped * stepped))


class Rosenbrock(BenchFunction):
    def _core(self, z):
        w = z + 1.0
        return float(np.sum(100.0 * (w[:-1] ** 2 - w[1:]) ** 2 + (w[:-1] - 1.0) ** 2))


class Rastrigin(BenchFunction):
    def _core(self, z):
        return float(np.sum(10.0 + z * z - 10.0 * np.cos(2.0 * np.pi * z)))


class Schwefel(BenchFunction):
    def _core(self, z):
        w = _SCHWEFEL_W * (1.0 + z / 25.0)
        return float(np.sum(_SCHWEFEL_V - w * np.sin(np.sqrt(w))))


FUNCTION_IDS = (
    "sphere",
    "linear_slope",
    "rastrigin",
    "rosenbrock",
    "step_ellipsoid",
    "attractive_sector",
    "schwefel",
    "ellipsoid",
)

_ROTATED = {"ellipsoid", "attractive_sector", "step_ellipsoid"}


def _instance_rng(fid: str, instance: int, dim: int) -> np.random.Generator:
    fidx = FUNCTION_IDS.index(fid)
    seq = np.random.SeedSequence([_SUITE_SALT, fidx, dim, instance])
    return np.random.Generator(np.random.PCG64(seq))


def _random_rotation(gen: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(gen.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))  # fix column signs for determinism


def make_function(fid: str, instance: int, dim: int) -> BenchFunction:
    """Build a suite function for one (id, instance, dim) triple."""
    if fid not in FUNCTION_IDS:
        raise ValueError(f"unknown function id {fid!r}; choose from {FUNCTION_IDS}")
    if dim not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported dim {dim}; choose from {SUPPORTED_DIMS}")
    if instance < 1:
        raise ValueError("instance must be a positive integer")
    gen = _instance_rng(fid, instance, dim)
    f_opt = round(float(gen.uniform(-100.0, 100.0)), 2)
    if fid == "linear_slope":
        x_opt = 5.0 * np.where(gen.random(dim) < 0.5, -1.0, 1.0)
    else:
        x_opt = gen.uniform(-4.0, 4.0, dim)
    if fid in _ROTATED:
        rotation = _random_rotation(gen, dim)
    if fid == "sphere":
        return Sphere(fid, instance, dim, x_opt, f_opt)
    if fid == "linear_slope":
        return LinearSlope(fid, instance, dim, x_opt, f_opt)
    if fid == "rastrigin":
        return Rastrigin(fid, instance, dim, x_opt, f_opt)
    if fid == "rosenbrock":
        return Rosenbrock(fid, instance, dim, x_opt, f_opt)
    if fid == "step_ellipsoid":
        return StepEllipsoid(fid, instance, dim, x_opt, f_opt, rotation)
    if fid == "attractive_sector":
        signs = np.where(gen.random(dim) < 0.5, -1.0, 1.0)
        return AttractiveSector(fid, instance, dim, x_opt, f_opt, rotation, signs)
    if fid == "schwefel":
        return Schwefel(fid, instance, dim, x_opt, f_opt)
    return Ellipsoid(fid, instance, dim, x_opt, f_opt, rotation)
