import numpy as np
import pytest

from swarmmix import FUNCTION_IDS, make_function


def test_unknown_id_rejected():
    with pytest.raises(ValueError):
        make_function("mystery", 1, 2)


def test_unsupported_dim_rejected():
    with pytest.raises(ValueError):
        make_function("sphere", 1, 4)


def test_bad_instance_rejected():
    with pytest.raises(ValueError):
        make_function("sphere", 0, 2)


@pytest.mark.parametrize("fid", FUNCTION_IDS)
@pytest.mark.parametrize("dim", [2, 5, 10])
def test_optimum_value_is_exact(fid, dim):
    for instance in (1, 7, 15):
        f = make_function(fid, instance, dim)
        assert f.evaluate(f.x_opt).value == f.f_opt


@pytest.mark.parametrize("fid", FUNCTION_IDS)
def test_shift_keeps_values_above_optimum(fid):
    f = make_function(fid, 3, 5)
    rng = np.random.default_rng(1)
    for x in rng.uniform(-5, 5, (300, 5)):
        assert f.evaluate(x).value >= f.f_opt - 1e-9


def test_sphere_closed_form():
    f = make_function("sphere", 4, 2)
    assert f.evaluate(f.x_opt + np.array([3.0, 4.0])).value - f.f_opt == 25.0


def test_rastrigin_hand_computed_offset():
    f = make_function("rastrigin", 5, 2)
    value = f.evaluate(f.x_opt + 0.5).value - f.f_opt
    # per dimension: 10 + 0.25 - 10*cos(pi) = 20.25
    assert value == pytest.approx(40.5, abs=1e-12)


def test_linear_slope_optimum_is_domain_corner():
    for instance in range(1, 6):
        f = make_function("linear_slope", instance, 3)
        assert set(np.abs(f.x_opt)) == {5.0}
        assert f.evaluate(f.x_opt).value == f.f_opt


def test_step_ellipsoid_is_piecewise_constant():
    f = make_function("step_ellipsoid", 2, 3)
    base = f.x_opt + np.array([1.3, 0.4, -0.7])
    a = f.evaluate(base).value
    b = f.evaluate(base + 1e-6).value
    assert a == b


def test_instances_are_deterministic_and_distinct():
    f1 = make_function("rosenbrock", 9, 5)
    f2 = make_function("rosenbrock", 9, 5)
    assert np.array_equal(f1.x_opt, f2.x_opt) and f1.f_opt == f2.f_opt
    f3 = make_function("rosenbrock", 10, 5)
    assert not np.array_equal(f1.x_opt, f3.x_opt)


def test_shifted_optima_inside_inner_box():
    for fid in FUNCTION_IDS:
        if fid == "linear_slope":
            continue
        f = make_function(fid, 11, 5)
        assert np.all(np.abs(f.x_opt) <= 4.0)


def test_rotations_are_orthogonal():
    for fid in ("ellipsoid", "attractive_sector", "step_ellipsoid"):
        f = make_function(fid, 6, 5)
        assert np.allclose(f.rotation @ f.rotation.T, np.eye(5), atol=1e-12)


def test_domain_is_standard_box():
    f = make_function("schwefel", 1, 10)
    assert np.all(f.bounds.lower == -5.0) and np.all(f.bounds.upper == 5.0)


def test_f_opt_distribution_is_bounded_and_rounded():
    for fid in FUNCTION_IDS:
        for instance in (1, 8):
            f = make_function(fid, instance, 2)
            assert -100.0 <= f.f_opt <= 100.0
            assert f.f_opt == round(f.f_opt, 2)
