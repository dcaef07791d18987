import numpy as np
import pytest
from pydantic import ValidationError

from satkf.core.errors import DomainError
from satkf.estimation.orbit import (
    MeasurementType,
    OrbitParams,
    PolarState,
    build_A,
    circular_state,
    discretize,
    from_deviation,
    linearized_matrix,
    measurement_matrix,
    nonlinear_derivative,
    rk4_step,
    to_deviation,
)

ORBIT = OrbitParams()


def test_orbit_defaults():
    assert (ORBIT.radius, ORBIT.omega, ORBIT.h) == (1.0, 1.0, 0.01)
    assert ORBIT.G0 == 1.0


def test_orbit_g0_follows_radius_and_rate():
    assert OrbitParams(radius=2.0, omega=0.5).G0 == pytest.approx(2.0)


def test_orbit_rejects_inconsistent_g0():
    with pytest.raises(ValidationError):
        OrbitParams(radius=1.0, omega=1.0, g0=2.0)


def test_orbit_rejects_zero_rate():
    with pytest.raises(ValidationError):
        OrbitParams(omega=0.0)


def test_circular_orbit_is_an_equilibrium():
    for t in (0.0, 0.7, 12.5):
        r_dot, r_ddot, theta_dot, theta_ddot = nonlinear_derivative(circular_state(t, ORBIT), ORBIT)
        assert r_dot == 0.0
        assert r_ddot == pytest.approx(0.0, abs=1e-15)
        assert theta_dot == ORBIT.omega
        assert theta_ddot == 0.0


def test_nonpositive_radius_is_rejected():
    with pytest.raises(DomainError):
        nonlinear_derivative(PolarState(r=0.0, r_dot=0.0, theta=0.0, theta_dot=1.0), ORBIT)


def test_rk4_zero_step_is_identity():
    s = PolarState(r=1.1, r_dot=0.2, theta=0.3, theta_dot=0.9)
    assert rk4_step(s, ORBIT, 0.0) == s


def test_rk4_negative_step_is_rejected():
    with pytest.raises(DomainError):
        rk4_step(circular_state(0.0, ORBIT), ORBIT, -0.01)


def test_rk4_stays_on_circular_orbit():
    s = circular_state(0.0, ORBIT)
    for _ in range(100):
        s = rk4_step(s, ORBIT, ORBIT.h)
    assert np.max(np.abs(to_deviation(s, 100 * ORBIT.h, ORBIT))) < 1e-12


def test_deviation_coordinates_are_inverse():
    x = np.array([0.1, -0.02, 0.05, 0.01])
    assert np.allclose(to_deviation(from_deviation(x, 3.0, ORBIT), 3.0, ORBIT), x, atol=1e-14)


def test_circular_orbit_has_zero_deviation():
    assert np.allclose(to_deviation(circular_state(2.0, ORBIT), 2.0, ORBIT), 0.0)


def test_build_A_unit_rate():
    expected = [[0, 1, 0, 0], [3, 0, 0, 2], [0, 0, 0, 1], [0, -2, 0, 0]]
    assert np.array_equal(build_A(ORBIT), np.array(expected, dtype=float))


def test_zero_rate_keeps_only_integrators():
    A = linearized_matrix(0.0)
    assert A[0, 1] == 1.0 and A[2, 3] == 1.0
    assert np.count_nonzero(A) == 2


def test_discretize_matches_printed_transition():
    F = discretize(build_A(ORBIT), 0.01)
    assert round(F[0, 0], 4) == 1.0001
    assert round(F[0, 1], 4) == 0.01
    assert round(F[2, 3], 4) == 0.01
    assert round(F[3, 0], 4) == -0.0003
    assert round(F[3, 3], 4) == 0.9998
    assert F[2, 2] == pytest.approx(1.0, abs=1e-15)


def test_discretize_preserves_volume():
    # trace(A) = 0
    assert np.linalg.det(discretize(build_A(ORBIT), 0.01)) == pytest.approx(1.0, abs=1e-12)


def test_discretize_zero_rate_is_double_integrator():
    F = discretize(linearized_matrix(0.0), 0.1)
    assert F[0, 1] == pytest.approx(0.1) and F[2, 3] == pytest.approx(0.1)
    assert np.allclose(np.diag(F), 1.0)


def test_discretize_rejects_nonpositive_period():
    with pytest.raises(DomainError):
        discretize(build_A(ORBIT), 0.0)


def test_linearization_error_is_second_order():
    F = discretize(build_A(ORBIT), ORBIT.h)
    steps = 100
    gaps = []
    for amplitude in (1e-3, 2e-3, 4e-3):
        x0 = np.array([amplitude, 0.0, 0.0, 0.0])
        s = from_deviation(x0, 0.0, ORBIT)
        for _ in range(steps):
            s = rk4_step(s, ORBIT, ORBIT.h)
        linear = np.linalg.matrix_power(F, steps) @ x0
        gaps.append(np.max(np.abs(to_deviation(s, steps * ORBIT.h, ORBIT) - linear)))

    slopes = np.diff(np.log(gaps)) / np.log(2.0)
    assert np.all((slopes > 1.8) & (slopes < 2.2))


@pytest.mark.parametrize(
    "mtype, row, variance",
    [
        (MeasurementType.TYPE1, [1, 0, 0, 0], 0.1),
        (MeasurementType.TYPE2, [0, 0, 1, 0], 0.5),
    ],
)
def test_measurement_matrix(mtype, row, variance):
    H, R = measurement_matrix(mtype)
    assert np.array_equal(H, np.array(row, dtype=float))
    assert R == variance


def test_measurement_matrix_accepts_strings():
    H, _ = measurement_matrix("type2", psi=0.25)
    assert H[2] == 1.0


@pytest.mark.parametrize("h1, h2", [(0.01, 0.01), (0.003, 0.02), (0.5, 0.25)])
def test_discretize_composes_over_periods(h1, h2):
    A = build_A(ORBIT)
    assert np.allclose(
        discretize(A, h1) @ discretize(A, h2), discretize(A, h1 + h2), rtol=1e-10, atol=1e-12
    )
