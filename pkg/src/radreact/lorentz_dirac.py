"""
One-dimensional Lorentz-Dirac dynamics in rapidity form.

With ``u = (cosh beta, sinh beta)`` the equation of motion reduces to

    m beta' = m tau0 beta'' + F(tau),      tau0 = 2 alpha / 3 m,

whose homogeneous solutions grow like ``exp(tau / tau0)`` (runaways).  The
runaway-free solution is the integro-differential form

    m beta'(tau) = int_0^inf exp(-s) F(tau + tau0 s) ds,

which responds to the force before it acts (preacceleration).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import constants

from .errors import PreconditionError, SpanError
from .numerics import SampledSignal, integrate_ode, least_squares_slope, quad_adaptive
from .potentials import PhysicalParams

#: Runaway spans longer than this many tau0 are refused.
MAX_RUNAWAY_SPAN = 10.0

ELECTRON_MASS_MEV = constants.physical_constants["electron mass energy equivalent in MeV"][0]
HBAR_MEV_S = constants.hbar / (constants.e * 1e6)
#: hbar / (m_e c^2) in seconds, about 1.2881e-21 s.
ELECTRON_TIME_UNIT_S = HBAR_MEV_S / ELECTRON_MASS_MEV
ELECTRON = PhysicalParams(m=ELECTRON_MASS_MEV, alpha=constants.fine_structure)


def tau0_seconds(params: PhysicalParams = ELECTRON, mass_unit_mev: float = 1.0) -> float:
    """``tau0`` converted to seconds for a mass given in units of ``mass_unit_mev`` MeV."""
    return params.tau0 / mass_unit_mev * HBAR_MEV_S


# --------------------------------------------------------------------------
# External force profiles
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class StepForce:
    """``F(tau) = F`` for ``tau >= onset`` and zero before."""

    F: float
    onset: float = 0.0

    def __call__(self, tau):
        return np.where(np.asarray(tau) >= self.onset, self.F, 0.0)

    @property
    def breakpoints(self):
        return (self.onset,)

    def describe(self):
        return {"profile": "step", "F": self.F, "onset": self.onset}


@dataclass(frozen=True)
class BoxForce:
    """``F`` on ``[onset, onset + duration)`` and zero elsewhere."""

    F: float
    duration: float
    onset: float = 0.0

    def __call__(self, tau):
        tau = np.asarray(tau)
        return np.where((tau >= self.onset) & (tau < self.onset + self.duration), self.F, 0.0)

    @property
    def breakpoints(self):
        return (self.onset, self.onset + self.duration)

    def describe(self):
        return {"profile": "box", "F": self.F, "duration": self.duration, "onset": self.onset}


@dataclass(frozen=True)
class SampledForce:
    """Force given by samples; held at its end values outside the grid."""

    signal: SampledSignal

    def __call__(self, tau):
        t = self.signal.t
        tau = np.asarray(tau, dtype=float)
        inside = self.signal(np.clip(tau, t[0], t[-1]))
        return np.where(tau < t[0], self.signal.values[0],
                        np.where(tau > t[-1], self.signal.values[-1], inside))

    @property
    def breakpoints(self):
        return tuple(self.signal.t[:: max(1, len(self.signal.t) // 50)])

    def describe(self):
        return {"profile": "sampled", "n": int(len(self.signal.t))}


def force_from_dict(d: dict):
    d = dict(d)
    kind = d.pop("profile")
    if kind == "step":
        return StepForce(**d)
    if kind == "box":
        return BoxForce(**d)
    raise ValueError(f"unknown force profile {kind!r}")


class ZeroForce:
    breakpoints = ()

    def __call__(self, tau):
        return np.zeros_like(np.asarray(tau, dtype=float))

    def describe(self):
        return {"profile": "zero"}


# --------------------------------------------------------------------------
# Solutions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RapiditySolution:
    tau: np.ndarray
    beta: np.ndarray
    kind: str
    source: dict
    beta_prime: Optional[np.ndarray] = field(default=None)

    def growth_rate(self, window=None) -> float:
        """Least-squares slope of ``log|beta|`` over ``window`` (default: all samples)."""
        mask = np.ones_like(self.tau, dtype=bool)
        if window is not None:
            mask = (self.tau >= window[0]) & (self.tau <= window[1])
        return least_squares_slope(self.tau[mask], np.log(np.abs(self.beta[mask])))


def _check_span(tau_grid, tau0):
    tau_grid = np.asarray(tau_grid, dtype=float)
    if tau_grid.ndim != 1 or len(tau_grid) < 2 or np.any(np.diff(tau_grid) <= 0):
        raise ValueError("tau grid must be strictly increasing with at least two samples")
    span = tau_grid[-1] - tau_grid[0]
    if span > MAX_RUNAWAY_SPAN * tau0 * (1 + 1e-12):
        raise SpanError(f"tau span {span:.3e} exceeds {MAX_RUNAWAY_SPAN:g} tau0 = "
                        f"{MAX_RUNAWAY_SPAN * tau0:.3e}")
    return tau_grid


def runaway_residual(beta0: float, params: PhysicalParams, tau_grid):
    """Analytic force-free runaway ``beta0 exp(tau / tau0)`` and its equation residual.

    The residual is ``max |beta' - tau0 beta''|`` with both derivatives
    taken analytically, so it measures only rounding.
    """
    if not params.alpha > 0:
        raise PreconditionError("runaway solutions need alpha > 0")
    tau0 = params.tau0
    tau = _check_span(tau_grid, tau0)
    beta = beta0 * np.exp(tau / tau0)
    d1 = beta / tau0
    d2 = d1 / tau0
    residual = float(np.max(np.abs(d1 - tau0 * d2)))
    return RapiditySolution(tau, beta, "runaway", {"profile": "zero", "beta0": beta0}, d1), residual


def runaway_integrated(beta0: float, params: PhysicalParams, tau_grid, rel_tol=1e-10):
    """Forward integration of the force-free equation from ``(beta, beta')(0) = (beta0, beta0/tau0)``.

    Demonstrates that the exponential growth is a property of the equation
    and not of the closed form.
    """
    if not params.alpha > 0:
        raise PreconditionError("runaway solutions need alpha > 0")
    tau0 = params.tau0
    tau = _check_span(tau_grid, tau0)

    def rhs(_, y):
        return [y[1], y[1] / tau0]

    scale = abs(beta0) if beta0 else 1.0
    sol = integrate_ode(rhs, [beta0, beta0 / tau0], (tau[0], tau[-1]), rel_tol=rel_tol,
                        abs_tol=[rel_tol * 1e-6 * scale, rel_tol * 1e-6 * scale / tau0])
    y = sol(tau)
    return RapiditySolution(tau, y[0], "runaway", {"profile": "zero", "beta0": beta0}, y[1])


def causal_kernel(force, params: PhysicalParams, tau: float, tol=1e-12) -> float:
    """``m beta'(tau) = int_0^inf exp(-s) F(tau + tau0 s) ds``."""
    tau0 = params.tau0
    if tau0 == 0:
        return float(force(tau))
    points = [(b - tau) / tau0 for b in getattr(force, "breakpoints", ()) if b > tau]
    f = lambda s: math.exp(-s) * float(force(tau + tau0 * s))  # noqa: E731
    return quad_adaptive(f, 0.0, math.inf, tol=tol, decay_scale=1.0, points=points or None)


def causal_solution(force, params: PhysicalParams, tau_grid, tol=1e-12) -> RapiditySolution:
    """Runaway-free rapidity history for the external force ``force``.

    ``beta'`` comes from the exponential kernel at each grid point; ``beta``
    is its running integral with ``beta = 0`` at the first grid point.
    """
    tau = np.asarray(tau_grid, dtype=float)
    if tau.ndim != 1 or len(tau) < 2 or np.any(np.diff(tau) <= 0):
        raise ValueError("tau grid must be strictly increasing with at least two samples")
    m = params.m
    beta_prime = np.array([causal_kernel(force, params, s, tol) for s in tau]) / m

    kernel = lambda s: causal_kernel(force, params, s, tol)  # noqa: E731
    breaks = sorted(b for b in getattr(force, "breakpoints", ()))
    peak = max(np.max(np.abs(beta_prime)) * m, 1e-300)
    increments = np.empty(len(tau) - 1)
    for i, (lo, hi) in enumerate(zip(tau[:-1], tau[1:])):
        pts = [b for b in breaks if lo < b < hi] or None
        increments[i] = quad_adaptive(lambda s: kernel(s) / peak, lo, hi, tol=tol,
                                      points=pts) * peak / m
    beta = np.concatenate([[0.0], np.cumsum(increments)])
    return RapiditySolution(tau, beta, "causal", force.describe(), beta_prime)
