import math

import numpy as np
import pytest

from radreact.classical_shifts import (average_momentum, energy_gap_residual,
                                       larmor_shift_closed_form, shift_difference, shift_ode)
from radreact.errors import PreconditionError
from radreact.potentials import (GaussianBump, PhysicalParams, SmoothStep, acceleration_profile,
                                 classical_trajectory, free_particle)
from radreact.spectral import gaussian_pulse


@pytest.fixture(scope="module")
def step_run(params, step):
    traj = classical_trajectory(step, params, 1.0)
    return traj, shift_difference(traj, params)


def test_free_particle_has_no_shift(params):
    traj = classical_trajectory(free_particle(), params, 1.0)
    for theory in ("LD", "Larmor"):
        res = shift_ode(traj, theory, params)
        assert np.all(res.delta_z == 0) and np.all(res.delta_v == 0)


def test_unknown_theory(params, step):
    traj = classical_trajectory(step, params, 1.0)
    with pytest.raises(ValueError):
        shift_ode(traj, "Abraham", params)


def test_energy_gap_accumulation(step_run, params):
    traj, diff = step_run
    assert energy_gap_residual(diff["ld"], diff["larmor"], traj, params) <= 1e-9


def test_same_final_velocity(step_run):
    traj, diff = step_run
    assert abs(diff["final_velocity_gap"]) <= 1e-8 * traj.p


def test_difference_formula(step_run):
    _, diff = step_run
    assert diff["ode_diff"] == pytest.approx(diff["log_formula"], rel=1e-3)


def test_log_minus_lowest_order_is_second_order(params):
    gaps = []
    for V0 in (0.02, 0.01):
        d = shift_difference(classical_trajectory(SmoothStep(V0), params, 1.0), params)
        gaps.append(abs(d["log_formula"] - d["lowest_order"]))
    assert gaps[0] / gaps[1] == pytest.approx(4.0, rel=0.05)


def test_bump_has_no_difference(params):
    d = shift_difference(classical_trajectory(GaussianBump(0.01), params, 1.0), params)
    assert d["log_formula"] == 0.0 and d["lowest_order"] == 0.0
    assert abs(d["ode_diff"]) <= 1e-8 * abs(d["larmor_final"])


def test_starts_unperturbed(step_run):
    _, diff = step_run
    for res in (diff["ld"], diff["larmor"]):
        scale = np.max(np.abs(res.delta_z))
        assert abs(res.delta_z[0]) <= 1e-12 * scale and abs(res.delta_v[0]) <= 1e-12 * scale


def test_velocity_shift_is_derivative_of_position_shift(step_run):
    _, diff = step_run
    res = diff["larmor"]
    fd = np.gradient(res.delta_z, res.t, edge_order=2)
    # second-order differences on a step of 1/64 length scales
    assert np.max(np.abs(fd - res.delta_v)) <= 2e-4 * np.max(np.abs(res.delta_v))


@pytest.mark.parametrize("theory", ["LD", "Larmor"])
def test_linear_in_alpha(step, theory):
    p1, p2 = PhysicalParams(alpha=0.01), PhysicalParams(alpha=0.02)
    traj = classical_trajectory(step, p1, 1.0)
    a = shift_ode(traj, theory, p1)
    b = shift_ode(traj, theory, p2)
    np.testing.assert_allclose(b.delta_z, 2 * a.delta_z, rtol=1e-12, atol=0)


def test_larmor_shift_is_negative_for_early_pulse(params):
    potential = GaussianBump(0.005, 1.0, -9.0)
    traj = classical_trajectory(potential, params, 1.0)
    assert shift_ode(traj, "Larmor", params).delta_z_at_0 < 0
    accel = acceleration_profile(potential, params, 1.0)
    assert larmor_shift_closed_form(accel, 1.0, params) < 0


class TestClosedForm:
    def test_zero_pulse(self, params):
        accel = acceleration_profile(free_particle(), params, 1.0)
        assert larmor_shift_closed_form(accel, 1.0, params) == 0.0

    def test_shifted_gaussian(self, params):
        a0, sigma = 0.2, 0.8
        t0 = -10 * sigma
        accel = gaussian_pulse(a0, sigma, t0, params, half_width=9.0)
        expected = 2 * params.alpha / (3 * 1.3) * t0 * a0**2 * sigma * math.sqrt(math.pi)
        assert larmor_shift_closed_form(accel, 1.3, params) == pytest.approx(expected, rel=1e-8)

    def test_symmetric_pulse_limit(self, params):
        values = []
        for t0 in (-9.0, -8.5, -8.1):
            accel = gaussian_pulse(0.2, 1.0, t0, params, half_width=8.0)
            values.append(abs(larmor_shift_closed_form(accel, 1.0, params)))
        assert values[0] > values[1] > values[2]

    def test_late_pulse_rejected(self, params, step):
        with pytest.raises(PreconditionError):
            larmor_shift_closed_form(acceleration_profile(step, params, 1.0), 1.0, params)


def test_route_equivalence_discrepancy_shrinks(params):
    """Larmor ODE vs the closed form: the gap is higher order in the amplitude."""
    rel = []
    for V0 in (0.004, 0.002, 0.001):
        potential = GaussianBump(V0, 1.0, -9.0)
        traj = classical_trajectory(potential, params, 1.0)
        ode = shift_ode(traj, "Larmor", params).delta_z_at_0
        closed = larmor_shift_closed_form(acceleration_profile(potential, params, 1.0),
                                          average_momentum(traj), params)
        rel.append(abs(ode - closed) / abs(closed))
    assert rel[0] > rel[1] > rel[2]
    assert all(1.8 < a / b < 2.2 for a, b in zip(rel, rel[1:]))


def test_average_momentum_between_asymptotes(params, step):
    traj = classical_trajectory(step, params, 1.0)
    assert traj.v_init < average_momentum(traj) / params.m < traj.v_fin
