"""
First-order-in-alpha position shifts along an unperturbed orbit.

Both theories are driven through the same integrator.  The perturbed
energy per unit mass, ``w = v dv - a dz``, accumulates

    Lorentz-Dirac:  w' = (2 alpha / 3 m) v jerk
    Larmor:         w' = -(2 alpha / 3 m) a^2

and the position correction follows from ``dz' = (w + a dz) / v``.  All
coefficients are evaluated on the radiation-free orbit (reduction of
order), so the result is exactly linear in ``alpha``: the solver runs at
unit coupling and the answer is rescaled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .numerics import DEFAULT_SUPPORT_TOL, integrate_ode
from .potentials import AccelerationProfile, PhysicalParams, Trajectory, time_of_flight

THEORIES = ("LD", "Larmor")


@dataclass(frozen=True)
class ShiftResult:
    theory: str
    t: np.ndarray
    delta_z: np.ndarray
    delta_v: np.ndarray
    w: np.ndarray
    delta_z_at_0: float
    delta_z_final: float
    delta_v_final: float
    p_bar: float


def average_momentum(traj: Trajectory, support_tol=DEFAULT_SUPPORT_TOL) -> float:
    """``m`` times the time-averaged speed over the support of ``V'``."""
    lo, hi = traj.potential.support_window(support_tol)
    t_lo = time_of_flight(traj.potential, traj.params, traj.E, lo)
    t_hi = time_of_flight(traj.potential, traj.params, traj.E, hi)
    return traj.params.m * (hi - lo) / (t_hi - t_lo)


def shift_ode(traj: Trajectory, theory: str, params: PhysicalParams | None = None,
              rel_tol: float = 1e-12, p_bar: float | None = None) -> ShiftResult:
    """Position and velocity corrections of ``theory`` ("LD" or "Larmor") along ``traj``."""
    if theory not in THEORIES:
        raise ValueError(f"theory must be one of {THEORIES}")
    params = params or traj.params
    m = params.m
    potential = traj.potential
    E = traj.E

    def kinematics(z):
        V, dV, d2V = potential.evaluate(z)
        v = math.sqrt(2.0 * (E - float(V)) / m)
        a = -float(dV) / m
        return v, a, -float(d2V) * v / m

    if theory == "LD":
        def source(v, a, jerk):
            return 2.0 / (3.0 * m) * v * jerk
    else:
        def source(v, a, jerk):
            return -2.0 / (3.0 * m) * a * a

    def rhs(_, y):
        v, a, jerk = kinematics(y[0])
        return [v, source(v, a, jerk), (y[1] + a * y[2]) / v]

    t0, t1 = float(traj.t[0]), float(traj.t[-1])
    span = t1 - t0
    w_scale = 2.0 / (3.0 * m) * (np.max(np.abs(traj.v * traj.jerk)) + np.max(traj.a**2)) * span
    w_scale = max(w_scale, 1e-300)
    atol = [1e-15 * max(np.max(np.abs(traj.z)), potential.length_scale),
            1e-15 * w_scale, 1e-15 * w_scale * span / np.min(traj.v)]
    sol = integrate_ode(rhs, [float(traj.z[0]), 0.0, 0.0], (t0, t1), rel_tol=rel_tol,
                        abs_tol=atol, method="DOP853")
    y = sol(traj.t)
    alpha = params.alpha
    w = alpha * y[1]
    dz = alpha * y[2]
    dv = (w + traj.a * dz) / traj.v
    at0 = alpha * float(sol(0.0)[2]) if t0 <= 0.0 <= t1 else float("nan")
    if p_bar is None:
        p_bar = average_momentum(traj)
    return ShiftResult(theory, traj.t, dz, dv, w, at0, float(dz[-1]), float(dv[-1]), p_bar)


def energy_gap_residual(ld: ShiftResult, larmor: ShiftResult, traj: Trajectory,
                        params: PhysicalParams | None = None) -> float:
    """Largest deviation of ``w_LD - w_Larmor`` from ``(alpha / 3 m) d(v^2)/dt``.

    Returned relative to the peak of the reference curve.
    """
    params = params or traj.params
    reference = 2.0 * params.alpha / (3.0 * params.m) * traj.v * traj.a
    scale = np.max(np.abs(reference))
    gap = np.max(np.abs((ld.w - larmor.w) - reference))
    if scale == 0:
        return float(gap)
    return float(gap / scale)


def shift_difference(traj: Trajectory, params: PhysicalParams | None = None,
                     rel_tol: float = 1e-12) -> dict:
    """Late-time ``dz_LD - dz_Larmor`` by direct integration and by the two closed forms.

    ``log_formula`` is ``(2 alpha / 3 m) v_f ln(v_f / v_i)``; ``lowest_order``
    its leading term in the acceleration, ``(2 alpha / 3 m)(v_f - v_i)``.
    """
    params = params or traj.params
    ld = shift_ode(traj, "LD", params, rel_tol)
    lar = shift_ode(traj, "Larmor", params, rel_tol, p_bar=ld.p_bar)
    c = 2.0 * params.alpha / (3.0 * params.m)
    return {
        "ode_diff": ld.delta_z_final - lar.delta_z_final,
        "log_formula": c * traj.v_fin * math.log(traj.v_fin / traj.v_init),
        "lowest_order": c * (traj.v_fin - traj.v_init),
        "final_velocity_gap": ld.delta_v_final - lar.delta_v_final,
        "larmor_final": lar.delta_z_final,
        "ld": ld,
        "larmor": lar,
    }


def larmor_shift_closed_form(accel: AccelerationProfile, p_bar: float,
                             params: PhysicalParams | None = None) -> float:
    """Larmor-theory shift at ``t = 0``: ``(2 alpha / 3 p_bar) int t a(t)^2 dt``.

    Valid only for acceleration histories that have ended by ``t = 0``.
    """
    params = params or accel.params
    sig = accel.signal
    peak = sig.peak
    if peak == 0:
        return 0.0
    late = np.abs(sig.values[sig.t > 0])
    if late.size and np.max(late) > sig.support_tol * peak:
        raise PreconditionError("acceleration does not vanish for t > 0; the closed form "
                                "assumes the pulse has ended by t = 0")
    moment = sig.integral(lambda t, a: t * a * a)
    return 2.0 * params.alpha / (3.0 * p_bar) * moment
