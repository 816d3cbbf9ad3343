"""
Asymptotically constant 1D potentials and the radiation-free classical
motion through them.

Units are natural (hbar = c = 1).  A trajectory is labelled by its final
momentum ``p`` (measured where the potential reaches its right-hand
asymptote) and the clock is set so that ``t = 0`` when ``z = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import make_interp_spline
from scipy.optimize import brentq

from .errors import DomainError, RegimeError
from .numerics import (DEFAULT_SUPPORT_TOL, SampledSignal, integrate_ode,
                       quad_adaptive)

FINE_STRUCTURE = 0.0072973525693
DEFAULT_KINETIC_FACTOR = 0.5


@dataclass(frozen=True)
class PhysicalParams:
    """Mass, coupling ``alpha = e^2 / 4 pi`` and the semiclassical scale."""

    m: float = 1.0
    alpha: float = FINE_STRUCTURE
    hbar_eff: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError("mass must be positive")
        if not self.alpha >= 0:
            raise ValueError("alpha must be non-negative")
        if not self.hbar_eff > 0:
            raise ValueError("hbar_eff must be positive")

    @property
    def tau0(self) -> float:
        """Radiation time scale ``2 alpha / 3 m``."""
        return 2.0 * self.alpha / (3.0 * self.m)

    def with_(self, **changes) -> "PhysicalParams":
        values = {"m": self.m, "alpha": self.alpha, "hbar_eff": self.hbar_eff}
        values.update(changes)
        return PhysicalParams(**values)


def _sech2(x):
    e = np.exp(-2.0 * np.abs(x))
    return 4.0 * e / (1.0 + e) ** 2


# --------------------------------------------------------------------------
# Potential families
# --------------------------------------------------------------------------

class Potential:
    """Interface shared by the potential families.

    Subclasses provide ``evaluate(z) -> (V, V', V'')``, the asymptotic
    values ``left``/``right``, ``max_value``, ``length_scale`` and
    ``support_window``.
    """

    family = "abstract"

    def __call__(self, z):
        return self.evaluate(z)[0]

    def support_window(self, tol=DEFAULT_SUPPORT_TOL):
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class SmoothStep(Potential):
    """``V(z) = (V0/2) (1 - tanh((z - z0)/L))``: ``V0`` on the left, 0 on the right."""

    V0: float
    L: float = 1.0
    z0: float = 0.0
    family = "smooth_step"

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("step width L must be positive")

    def evaluate(self, z):
        x = (np.asarray(z, dtype=float) - self.z0) / self.L
        s2 = _sech2(x)
        th = np.tanh(x)
        V = 0.5 * self.V0 * (1.0 - th)
        dV = -0.5 * self.V0 / self.L * s2
        d2V = self.V0 / self.L**2 * s2 * th
        return V, dV, d2V

    @property
    def left(self):
        return self.V0

    @property
    def right(self):
        return 0.0

    @property
    def max_value(self):
        return max(self.V0, 0.0)

    @property
    def length_scale(self):
        return self.L

    def support_window(self, tol=DEFAULT_SUPPORT_TOL):
        half = math.acosh(1.0 / math.sqrt(tol)) * self.L
        return (self.z0 - half, self.z0 + half)

    def to_dict(self):
        return {"family": self.family, "V0": self.V0, "L": self.L, "z0": self.z0}


@dataclass(frozen=True)
class GaussianBump(Potential):
    """``V(z) = V0 exp(-(z - z0)^2 / 2 w^2)``; equal asymptotes on both sides."""

    V0: float
    w: float = 1.0
    z0: float = 0.0
    family = "gaussian_bump"

    def __post_init__(self):
        if not self.w > 0:
            raise ValueError("bump width w must be positive")

    def evaluate(self, z):
        x = (np.asarray(z, dtype=float) - self.z0) / self.w
        g = np.exp(-0.5 * x * x)
        return self.V0 * g, -self.V0 * x * g / self.w, self.V0 * (x * x - 1.0) * g / self.w**2

    @property
    def left(self):
        return 0.0

    @property
    def right(self):
        return 0.0

    @property
    def max_value(self):
        return max(self.V0, 0.0)

    @property
    def length_scale(self):
        return self.w

    def support_window(self, tol=DEFAULT_SUPPORT_TOL):
        # |V'| / max|V'| = x exp((1 - x^2)/2)
        half = brentq(lambda x: math.log(x) + 0.5 * (1 - x * x) - math.log(tol), 1.0, 60.0)
        return (self.z0 - half * self.w, self.z0 + half * self.w)

    def to_dict(self):
        return {"family": self.family, "V0": self.V0, "w": self.w, "z0": self.z0}


class Tabulated(Potential):
    """Potential interpolated through knots ``(z, V)``.

    A quintic spline with ``V' = V'' = 0`` imposed at both end knots keeps the
    potential C^2 when it is continued by its end values outside the table.
    ``extrapolate="error"`` makes out-of-table queries raise instead.
    """

    family = "tabulated"

    def __init__(self, z, V, extrapolate="constant", source=None):
        z = np.asarray(z, dtype=float)
        V = np.asarray(V, dtype=float)
        if z.ndim != 1 or z.shape != V.shape or len(z) < 6:
            raise ValueError("need at least six (z, V) knots of equal length")
        if not np.all(np.diff(z) > 0):
            raise ValueError("knot positions must be strictly increasing")
        if extrapolate not in ("constant", "error"):
            raise ValueError("extrapolate must be 'constant' or 'error'")
        self.z = z
        self.V = V
        self.extrapolate = extrapolate
        self.source = source
        flat = ([(1, 0.0), (2, 0.0)], [(1, 0.0), (2, 0.0)])
        self._spline = make_interp_spline(z, V, k=5, bc_type=flat)
        self._d1 = self._spline.derivative(1)
        self._d2 = self._spline.derivative(2)
        fine = np.linspace(z[0], z[-1], 20 * len(z) + 1)
        self._fine = fine
        self._fine_dV = np.abs(self._d1(fine))
        self._max_value = float(max(np.max(self._spline(fine)), V[0], V[-1]))

    @classmethod
    def from_file(cls, path, extrapolate="constant"):
        """Read whitespace-separated ``z V`` columns; ``#`` starts a comment."""
        data = np.loadtxt(path, comments="#", ndmin=2)
        if data.shape[1] != 2:
            raise ValueError(f"{path}: expected two columns, found {data.shape[1]}")
        return cls(data[:, 0], data[:, 1], extrapolate=extrapolate, source=str(path))

    def evaluate(self, z):
        z = np.asarray(z, dtype=float)
        outside = (z < self.z[0]) | (z > self.z[-1])
        if np.any(outside) and self.extrapolate == "error":
            raise DomainError(f"z outside tabulated range [{self.z[0]}, {self.z[-1]}]")
        zc = np.clip(z, self.z[0], self.z[-1])
        V = self._spline(zc)
        dV = np.where(outside, 0.0, self._d1(zc))
        d2V = np.where(outside, 0.0, self._d2(zc))
        return V, dV, d2V

    @property
    def left(self):
        return float(self.V[0])

    @property
    def right(self):
        return float(self.V[-1])

    @property
    def max_value(self):
        return self._max_value

    @property
    def length_scale(self):
        span = float(np.ptp(self._spline(self._fine)))
        peak = float(np.max(self._fine_dV))
        if peak == 0:
            return float(self.z[-1] - self.z[0]) / 10.0
        return span / peak

    def support_window(self, tol=DEFAULT_SUPPORT_TOL):
        active = np.nonzero(self._fine_dV > tol * np.max(self._fine_dV))[0]
        if active.size == 0:
            return (float(self.z[0]), float(self.z[-1]))
        lo = self._fine[max(active[0] - 1, 0)]
        hi = self._fine[min(active[-1] + 1, len(self._fine) - 1)]
        return (float(lo), float(hi))

    def to_dict(self):
        out = {"family": self.family, "extrapolate": self.extrapolate}
        if self.source is not None:
            out["path"] = self.source
        else:
            out["knots"] = [[float(a), float(b)] for a, b in zip(self.z, self.V)]
        return out


def free_particle(L=1.0) -> SmoothStep:
    """Identically vanishing potential (a step of zero height)."""
    return SmoothStep(0.0, L)


def potential_eval(potential: Potential, z):
    """Value and first two derivatives ``(V, V', V'')`` at ``z``."""
    if not np.all(np.isfinite(z)):
        raise ValueError("z must be finite")
    V, dV, d2V = potential.evaluate(z)
    if np.ndim(z) == 0:
        return float(V), float(dV), float(d2V)
    return V, dV, d2V


def potential_from_dict(d: dict) -> Potential:
    d = dict(d)
    family = d.pop("family")
    if family == "smooth_step":
        return SmoothStep(**d)
    if family == "gaussian_bump":
        return GaussianBump(**d)
    if family == "free":
        return free_particle(**d)
    if family == "tabulated":
        extrapolate = d.pop("extrapolate", "constant")
        if "path" in d:
            return Tabulated.from_file(d["path"], extrapolate=extrapolate)
        knots = np.asarray(d["knots"], dtype=float)
        return Tabulated(knots[:, 0], knots[:, 1], extrapolate=extrapolate)
    raise ValueError(f"unknown potential family {family!r}")


# --------------------------------------------------------------------------
# Classical motion
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TimeGrid:
    """Sampling policy: uniform step ``length_scale / (v_ref * points_per_scale)``.

    ``pad`` extends the sampled window by that many length scales on each side.
    """

    points_per_scale: int = 64
    pad: float = 0.0

    def step(self, potential: Potential, speed: float) -> float:
        return potential.length_scale / (speed * self.points_per_scale)


def _sample_window(potential: Potential, grid: TimeGrid, support_tol: float):
    lo, hi = potential.support_window(support_tol)
    pad = grid.pad * potential.length_scale
    return min(lo, 0.0) - pad, max(hi, 0.0) + pad


def _check_regime(potential, params, p, factor, support_tol):
    if not p > 0:
        raise RegimeError("final momentum p must be positive")
    E = p * p / (2 * params.m) + potential.right
    if E - potential.max_value <= 0:
        raise RegimeError(
            f"turning point: E={E:.6g} does not exceed max V={potential.max_value:.6g}")
    lo, hi = potential.support_window(support_tol)
    zs = np.linspace(lo, hi, 4001)
    kinetic = E - potential.evaluate(zs)[0]
    worst = int(np.argmin(kinetic))
    floor = factor * (E - potential.right)
    if kinetic[worst] < floor:
        raise RegimeError(
            f"kinetic dominance violated at z={zs[worst]:.6g}: E - V = {kinetic[worst]:.6g} "
            f"< {factor:g} * E = {floor:.6g}")
    return E


@dataclass(frozen=True)
class Trajectory:
    """Unperturbed motion sampled on a uniform time grid.

    ``state(t)`` returns ``(z, v, a, jerk)`` at arbitrary times inside the
    sampled range.
    """

    p: float
    E: float
    params: PhysicalParams
    potential: Potential
    t: np.ndarray
    z: np.ndarray
    v: np.ndarray
    a: np.ndarray
    jerk: np.ndarray
    v_init: float
    v_fin: float
    _zfunc: Callable = field(repr=False, compare=False)

    def speed(self, z):
        V = self.potential.evaluate(z)[0]
        return np.sqrt(2.0 * (self.E - V) / self.params.m)

    def state(self, t):
        z = self._zfunc(t)
        V, dV, d2V = self.potential.evaluate(z)
        v = np.sqrt(2.0 * (self.E - V) / self.params.m)
        a = -dV / self.params.m
        return z, v, a, -d2V * v / self.params.m

    def acceleration(self, t):
        return -self.potential.evaluate(self._zfunc(t))[1] / self.params.m


def time_of_flight(potential: Potential, params: PhysicalParams, E: float, z: float,
                   tol=1e-13) -> float:
    """``t(z) = int_0^z dz' / v(z')`` along the orbit of energy ``E``."""
    def inv_speed(s):
        return 1.0 / math.sqrt(2.0 * (E - float(potential.evaluate(s)[0])) / params.m)

    lo, hi = sorted((0.0, z))
    n = max(2, int((hi - lo) / potential.length_scale) + 1)
    pts = list(np.linspace(lo, hi, n + 1)[1:-1])
    scale = max(abs(z), potential.length_scale) * inv_speed(z)
    return quad_adaptive(lambda s: inv_speed(s) / scale, 0.0, z, tol=tol, points=pts) * scale


def classical_trajectory(potential: Potential, params: PhysicalParams, p: float,
                         grid: Optional[TimeGrid] = None,
                         kinetic_factor: float = DEFAULT_KINETIC_FACTOR,
                         support_tol: float = DEFAULT_SUPPORT_TOL) -> Trajectory:
    """Radiation-free orbit with final momentum ``p`` through ``potential``.

    Raises :class:`RegimeError` on a turning point or when ``E - V`` drops
    below ``kinetic_factor * E`` anywhere in the support window.
    """
    grid = grid or TimeGrid()
    E = _check_regime(potential, params, p, kinetic_factor, support_tol)
    m = params.m
    z_lo, z_hi = _sample_window(potential, grid, support_tol)
    t_lo = time_of_flight(potential, params, E, z_lo)
    t_hi = time_of_flight(potential, params, E, z_hi)
    dt = grid.step(potential, p / m)
    j_lo = math.floor(t_lo / dt)
    j_hi = math.ceil(t_hi / dt)
    t = np.arange(j_lo, j_hi + 1) * dt

    def rhs(_, y):
        V = potential.evaluate(y[0])[0]
        return [math.sqrt(2.0 * (E - float(V)) / m)]

    atol = 1e-15 * max(abs(z_lo), abs(z_hi), potential.length_scale)
    fwd = integrate_ode(rhs, [0.0], (0.0, t[-1]), rel_tol=1e-13, abs_tol=atol, method="DOP853")
    bwd = integrate_ode(rhs, [0.0], (0.0, t[0]), rel_tol=1e-13, abs_tol=atol, method="DOP853")

    def zfunc(tq):
        tq = np.asarray(tq, dtype=float)
        out = np.where(tq >= 0, fwd(np.maximum(tq, 0.0))[0], bwd(np.minimum(tq, 0.0))[0])
        return out if out.ndim else float(out)

    z = zfunc(t)
    V, dV, d2V = potential.evaluate(z)
    v = np.sqrt(2.0 * (E - V) / m)
    a = -dV / m
    jerk = -d2V * v / m
    v_init = math.sqrt(2.0 * (E - potential.left) / m)
    v_fin = math.sqrt(2.0 * (E - potential.right) / m)
    return Trajectory(p, E, params, potential, t, z, v, a, jerk, v_init, v_fin, zfunc)


@dataclass(frozen=True)
class AccelerationProfile:
    """Sampled acceleration ``a(t)`` and how it was obtained.

    ``mode`` is ``"exact"`` (along the true orbit) or ``"straight_line"``
    (``a(t) = -V'(p t / m) / m``); ``"pulse"`` profiles wrap an analytic
    history and carry no potential.  ``velocity_change`` holds ``int a dt``.
    """

    signal: SampledSignal
    mode: str
    p: float
    params: PhysicalParams
    potential: Optional[Potential]
    velocity_change: float
    trajectory: Optional[Trajectory] = field(default=None, repr=False, compare=False)


def acceleration_profile(potential: Potential, params: PhysicalParams, p: float,
                         mode: str = "exact", grid: Optional[TimeGrid] = None,
                         kinetic_factor: float = DEFAULT_KINETIC_FACTOR,
                         support_tol: float = DEFAULT_SUPPORT_TOL) -> AccelerationProfile:
    """Sample the acceleration history for final momentum ``p``."""
    grid = grid or TimeGrid()
    m = params.m
    lo, hi = potential.support_window(support_tol)
    n_pts = max(2, int((hi - lo) / potential.length_scale) + 1)
    pts = list(np.linspace(lo, hi, n_pts + 1)[1:-1])
    scale = potential.length_scale

    if mode == "exact":
        traj = classical_trajectory(potential, params, p, grid, kinetic_factor, support_tol)
        signal = SampledSignal(traj.t, traj.a, support_tol, traj.acceleration)

        def dv_dz(z):
            V, dV, _ = potential.evaluate(z)
            return -float(dV) / (m * math.sqrt(2.0 * (traj.E - float(V)) / m))

        dv = _scaled_quad(dv_dz, lo, hi, pts, scale)
        return AccelerationProfile(signal, mode, p, params, potential, dv, traj)

    if mode == "straight_line":
        if not p > 0:
            raise RegimeError("final momentum p must be positive")
        z_lo, z_hi = _sample_window(potential, grid, support_tol)
        dz = potential.length_scale / grid.points_per_scale
        zs = np.arange(math.floor(z_lo / dz), math.ceil(z_hi / dz) + 1) * dz
        t = zs * (m / p)

        def accel(tq):
            return -potential.evaluate(np.asarray(tq) * (p / m))[1] / m

        signal = SampledSignal(t, accel(t), support_tol, accel)
        dv = _scaled_quad(lambda z: -float(potential.evaluate(z)[1]) / p, lo, hi, pts, scale)
        return AccelerationProfile(signal, mode, p, params, potential, dv)

    raise ValueError(f"unknown acceleration mode {mode!r}")


def _scaled_quad(f, lo, hi, pts, length):
    peak = max(abs(f(z)) for z in np.linspace(lo, hi, 257))
    if peak == 0:
        return 0.0
    scale = peak * length
    return quad_adaptive(lambda z: f(z) / scale, lo, hi, tol=1e-13, points=pts) * scale
