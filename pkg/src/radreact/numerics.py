"""
Deterministic numerical kernels used throughout the package.

* :func:`integrate_ode` -- adaptive embedded Runge-Kutta integration with
  dense output (thin layer over :func:`scipy.integrate.solve_ivp`).
* :func:`quad_adaptive` -- adaptive Gauss-Kronrod quadrature with an
  explicit error contract, including semi-infinite ranges.
* :func:`fourier_integral` -- transform ``int a(t) exp(ikt) dt`` of a sampled
  compact pulse and its k-derivative.  The pulse is replaced by its quintic
  interpolating spline and every spline panel is integrated against the
  exponential exactly (a Filon-type rule), so accuracy does not degrade as
  the number of oscillations across the support grows.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate
from scipy.interpolate import PPoly, make_interp_spline

from .errors import IntegrationError, QuadratureError, ResolutionError, SupportError

DEFAULT_ODE_RTOL = 1e-10
DEFAULT_QUAD_TOL = 1e-10
DEFAULT_SUPPORT_TOL = 1e-12

#: Minimum number of samples per oscillation period ``2 pi / |k|``.
SAMPLES_PER_OSCILLATION = 8
_MAX_REFINED_SAMPLES = 2**21
_SPLINE_DEGREE = 5


# --------------------------------------------------------------------------
# ODE integration
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DenseSolution:
    """Solution path of an initial-value problem, queryable anywhere in ``t_span``."""

    t: np.ndarray
    y: np.ndarray
    t_span: tuple
    _interp: Callable = field(repr=False)

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        lo, hi = min(self.t_span), max(self.t_span)
        span = hi - lo
        if np.any(t_arr < lo - 1e-12 * span) or np.any(t_arr > hi + 1e-12 * span):
            raise ValueError(f"t outside solved interval [{lo}, {hi}]")
        return self._interp(np.clip(t_arr, lo, hi))


def integrate_ode(rhs, state0, t_span, rel_tol=DEFAULT_ODE_RTOL, abs_tol=None,
                  method="RK45", overflow=1e150, max_step=np.inf):
    """Integrate ``y' = rhs(t, y)`` from ``y(t_span[0]) = state0``.

    Parameters
    ----------
    rhs : callable
        Vector field ``rhs(t, y) -> array``.
    state0 : array_like
        Initial state.
    t_span : (float, float)
        Integration interval; may run backwards.
    rel_tol : float
        Relative local error tolerance, must lie in ``(1e-14, 1e-2)``.
    abs_tol : float or array_like, optional
        Absolute tolerance; defaults to ``1e-3 * rel_tol`` times the largest
        initial component (or ``1e-3 * rel_tol`` for a zero start).
    method : str
        ``"RK45"`` (Dormand-Prince 5(4)) or ``"DOP853"`` for very tight
        tolerances.
    overflow : float
        Integration aborts with :class:`IntegrationError` once any state
        component exceeds this magnitude.

    Returns
    -------
    DenseSolution
    """
    if not 1e-14 < rel_tol < 1e-2:
        raise ValueError(f"rel_tol={rel_tol} outside (1e-14, 1e-2)")
    y0 = np.atleast_1d(np.asarray(state0, dtype=float))
    if abs_tol is None:
        scale = float(np.max(np.abs(y0))) if y0.size else 0.0
        abs_tol = rel_tol * 1e-3 * (scale if scale > 0 else 1.0)

    def guard(t, y):
        return overflow - np.max(np.abs(y))

    guard.terminal = True

    with np.errstate(over="raise", invalid="raise"):
        try:
            sol = integrate.solve_ivp(rhs, t_span, y0, method=method, rtol=rel_tol,
                                      atol=abs_tol, dense_output=True, events=guard,
                                      max_step=max_step)
        except FloatingPointError as exc:
            raise IntegrationError(f"non-finite state: {exc}", float("nan")) from exc

    if sol.status == -1:
        raise IntegrationError(f"step-size underflow: {sol.message}", float(sol.t[-1]))
    if sol.status == 1:
        raise IntegrationError(f"state exceeded overflow guard {overflow:g}",
                               float(sol.t_events[0][0]))
    if not np.all(np.isfinite(sol.y)):
        bad = int(np.argmax(~np.all(np.isfinite(sol.y), axis=0)))
        raise IntegrationError("non-finite state", float(sol.t[bad]))
    return DenseSolution(sol.t, sol.y, (float(t_span[0]), float(t_span[1])), sol.sol)


# --------------------------------------------------------------------------
# Quadrature
# --------------------------------------------------------------------------

def quad_adaptive(f, a, b, tol=DEFAULT_QUAD_TOL, decay_scale=None, points=None, limit=500):
    """Integrate a real function with error at most ``tol * (1 + |result|)``.

    ``b`` may be ``+inf`` when the integrand decays exponentially; the
    e-folding length must then be declared through ``decay_scale`` and the
    range is mapped onto ``[0, 1)`` by ``x = a - decay_scale * log(1 - u)``.
    ``points`` lists interior break points (discontinuities, kinks).
    """
    if np.isinf(a):
        raise ValueError("lower limit must be finite")
    if a == b:
        return 0.0
    if np.isinf(b):
        if b < 0:
            raise ValueError("upper limit -inf not supported")
        if decay_scale is None or not decay_scale > 0:
            raise ValueError("infinite range requires a positive decay_scale")

        def mapped(u):
            one_minus = 1.0 - u
            if one_minus <= 0.0:
                return 0.0
            return f(a - decay_scale * math.log(one_minus)) * decay_scale / one_minus

        if points is not None:
            points = [1.0 - math.exp(-(p - a) / decay_scale) for p in points if p > a]
        return quad_adaptive(mapped, 0.0, 1.0, tol=tol, points=points, limit=limit)

    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    if points is not None:
        points = sorted(p for p in points if a < p < b) or None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, epsabs=tol, epsrel=tol, limit=limit,
                             points=points, full_output=1)
    value, err = out[0], out[1]
    if len(out) > 3 or err > tol * (1.0 + abs(value)):
        message = out[3] if len(out) > 3 else "error bound above tolerance"
        raise QuadratureError(f"quadrature did not converge: {message}", sign * value, err)
    return sign * value


def gauss_legendre_panels(f, edges, order=10):
    """Integrals of a vectorised ``f`` over consecutive panels ``[edges[i], edges[i+1]]``."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.asarray(edges, dtype=float)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    return half * (f(nodes) @ w)


def integrate_samples(x, y):
    """Integral of samples ``y(x)`` through their quintic interpolating spline."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y)
    if np.iscomplexobj(y):
        return integrate_samples(x, y.real) + 1j * integrate_samples(x, y.imag)
    degree = min(_SPLINE_DEGREE, len(x) - 1)
    if degree % 2 == 0:
        degree -= 1
    spline = make_interp_spline(x, y, k=degree)
    return float(spline.integrate(x[0], x[-1]))


# --------------------------------------------------------------------------
# Sampled pulses and their Fourier integrals
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SampledSignal:
    """Samples of a compactly supported signal on a strictly increasing grid.

    ``support_tol`` is relative to the peak magnitude: both endpoint values
    must be at most ``support_tol * max|values|``.  ``func``, when given, is
    the generating function; it lets transforms refine the grid and lets
    time-domain integrals use adaptive quadrature.
    """

    t: np.ndarray
    values: np.ndarray
    support_tol: float = DEFAULT_SUPPORT_TOL
    func: Optional[Callable] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        values = np.asarray(self.values)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", values)
        if t.ndim != 1 or len(t) < 2:
            raise ValueError("t grid needs at least two samples")
        if values.shape != t.shape:
            raise ValueError("values and t grid lengths differ")
        if not np.all(np.diff(t) > 0):
            raise ValueError("t grid must be strictly increasing")
        peak = self.peak
        if peak > 0 and max(abs(values[0]), abs(values[-1])) > self.support_tol * peak:
            raise SupportError(
                f"signal not compact: endpoint magnitude "
                f"{max(abs(values[0]), abs(values[-1])):.3e} exceeds "
                f"{self.support_tol:g} of peak {peak:.3e}")

    @classmethod
    def from_function(cls, func, t, support_tol=DEFAULT_SUPPORT_TOL):
        t = np.asarray(t, dtype=float)
        return cls(t, np.asarray(func(t)), support_tol, func)

    @property
    def peak(self):
        return float(np.max(np.abs(self.values)))

    @property
    def max_step(self):
        return float(np.max(np.diff(self.t)))

    @cached_property
    def _pieces(self):
        return _piecewise_polynomial(self.t, self.values)

    def __call__(self, t):
        if self.func is not None:
            return self.func(t)
        breaks, coeffs = self._pieces
        return PPoly(coeffs, breaks, extrapolate=False)(t)

    def refined(self, factor):
        """Resample ``func`` on a grid ``factor`` times finer (needs ``func``)."""
        if self.func is None:
            raise ResolutionError("cannot refine a signal without a generating function")
        n = (len(self.t) - 1) * int(factor) + 1
        if n > _MAX_REFINED_SAMPLES:
            raise ResolutionError(f"refinement to {n} samples exceeds the limit")
        return SampledSignal.from_function(self.func, np.linspace(self.t[0], self.t[-1], n),
                                           self.support_tol)

    def integral(self, g=None, tol=DEFAULT_QUAD_TOL):
        """``int g(t, a(t)) dt`` over the grid (``g`` defaults to ``a``).

        Uses adaptive quadrature on ``func`` when available, otherwise the
        quintic spline of the samples.
        """
        if g is None:
            g = lambda t, a: a  # noqa: E731
        if self.func is not None and not np.iscomplexobj(self.values):
            scale = np.max(np.abs(g(self.t, self.values))) * (self.t[-1] - self.t[0])
            if scale == 0:
                return 0.0
            value = quad_adaptive(lambda s: float(g(s, self.func(s))) / scale,
                                  self.t[0], self.t[-1], tol=tol,
                                  points=list(self.t[:: max(1, len(self.t) // 64)][1:-1]))
            return value * scale
        return integrate_samples(self.t, g(self.t, self.values))


def _piecewise_polynomial(x, y):
    """Breakpoints and power-basis coefficients (highest degree first) of the
    quintic interpolating spline through ``(x, y)``."""
    degree = min(_SPLINE_DEGREE, len(x) - 1)
    if degree % 2 == 0:
        degree -= 1
    if np.iscomplexobj(y):
        pr = PPoly.from_spline(make_interp_spline(x, y.real, k=degree))
        pi = PPoly.from_spline(make_interp_spline(x, y.imag, k=degree))
        return pr.x, pr.c + 1j * pi.c
    pp = PPoly.from_spline(make_interp_spline(x, y, k=degree))
    return pp.x, pp.c


def unit_moments(theta, nmax):
    """``mu_n(theta) = int_0^1 u^n exp(i theta u) du`` for ``n = 0..nmax``.

    For ``|theta| <= 2`` the top moment comes from its power series and the
    rest from the downward recurrence ``mu_{n-1} = (e^{i theta} - i theta mu_n) / n``;
    above that the upward recurrence is used.  Both keep the relative error
    near machine precision for ``nmax <= 7``.
    """
    theta = np.asarray(theta, dtype=float)
    out = np.empty(theta.shape + (nmax + 1,), dtype=complex)
    small = np.abs(theta) <= 2.0

    if np.any(small):
        ts = theta[small]
        z = 1j * ts
        tmax = float(np.max(np.abs(ts)))
        n_terms = 1
        bound = 1.0
        while bound > 1e-18 and n_terms < 40:
            bound *= tmax / n_terms
            n_terms += 1
        term = np.ones_like(z)
        acc = term / (nmax + 1)
        for j in range(1, n_terms + 1):
            term = term * z / j
            acc = acc + term / (nmax + j + 1)
        out[small, nmax] = acc
        e = np.exp(z)
        for n in range(nmax, 0, -1):
            acc = (e - z * acc) / n
            out[small, n - 1] = acc

    big = ~small
    if np.any(big):
        tb = theta[big]
        iz = 1j * tb
        e = np.exp(iz)
        mu = (e - 1.0) / iz
        out[big, 0] = mu
        for n in range(1, nmax + 1):
            mu = (e - n * mu) / iz
            out[big, n] = mu
    return out


def filon_transform(breaks, coeffs, k, derivative=True, chunk=64):
    """Exact Fourier integrals of a piecewise polynomial.

    Returns ``F(k) = int p(x) exp(ikx) dx`` over the breakpoint range and,
    when ``derivative`` is set, ``dF/dk = int i x p(x) exp(ikx) dx``.  ``coeffs``
    follows :class:`scipy.interpolate.PPoly` (highest degree first).
    """
    breaks = np.asarray(breaks, dtype=float)
    coeffs = np.asarray(coeffs)
    k = np.atleast_1d(np.asarray(k, dtype=float))
    degree = coeffs.shape[0] - 1
    h = np.diff(breaks)
    keep = h > 0
    h = h[keep]
    x0 = breaks[:-1][keep]
    c = coeffs[::-1, keep]  # c[n] multiplies (x - x0)^n
    powers = h[None, :] ** np.arange(1, degree + 3)[:, None]
    scaled = c * powers[: degree + 1]
    scaled_next = c * powers[1: degree + 2]

    value = np.empty(k.shape, dtype=complex)
    deriv = np.empty(k.shape, dtype=complex)

    # uniform grids have a handful of distinct panel widths: moments are then
    # shared by all panels of a width and the panel sum becomes a matrix product
    widths, group = np.unique(np.round(h / h.max(), 10), return_inverse=True)
    if len(widths) <= 8:
        members = [np.nonzero(group == g)[0] for g in range(len(widths))]
        for start in range(0, len(k), 4 * chunk):
            ks = k[start:start + 4 * chunk]
            phase = np.exp(1j * ks[:, None] * x0[None, :])
            val = np.zeros(len(ks), dtype=complex)
            der = np.zeros(len(ks), dtype=complex)
            for idx in members:
                mu = unit_moments(ks * h[idx[0]], degree + 1)
                ph = phase[:, idx]
                base = ph @ scaled[:, idx].T
                val += np.sum(mu[:, : degree + 1] * base, axis=1)
                if derivative:
                    moment = ph @ (x0[idx] * scaled[:, idx]).T
                    nxt = ph @ scaled_next[:, idx].T
                    der += 1j * np.sum(mu[:, : degree + 1] * moment + mu[:, 1:] * nxt, axis=1)
            value[start:start + len(ks)] = val
            deriv[start:start + len(ks)] = der
        return (value, deriv) if derivative else value

    for start in range(0, len(k), chunk):
        ks = k[start:start + chunk]
        mu = unit_moments(ks[:, None] * h[None, :], degree + 1)
        phase = np.exp(1j * ks[:, None] * x0[None, :])
        base = np.einsum("kmn,nm->km", mu[..., : degree + 1], scaled)
        value[start:start + chunk] = np.sum(phase * base, axis=1)
        if derivative:
            shifted = np.einsum("kmn,nm->km", mu[..., 1: degree + 2], scaled_next)
            deriv[start:start + chunk] = 1j * np.sum(phase * (x0[None, :] * base + shifted), axis=1)
    if derivative:
        return value, deriv
    return value


def fourier_integral(signal: SampledSignal, k):
    """Transform ``a_hat(k) = int a(t) exp(ikt) dt`` and its k-derivative.

    Accepts a scalar or an array of wavenumbers and returns ``(a_hat,
    da_hat_dk)`` with matching shape.  When the grid has fewer than eight
    samples per oscillation at the largest ``|k|`` the signal is resampled
    from its generating function; without one a :class:`ResolutionError`
    is raised.
    """
    k_arr = np.asarray(k, dtype=float)
    scalar = k_arr.ndim == 0
    k_arr = np.atleast_1d(k_arr)
    kmax = float(np.max(np.abs(k_arr))) if k_arr.size else 0.0
    h_allowed = 2 * np.pi / (SAMPLES_PER_OSCILLATION * kmax) if kmax > 0 else np.inf
    if signal.max_step > h_allowed:
        if signal.func is None:
            raise ResolutionError(
                f"grid step {signal.max_step:.3e} gives fewer than "
                f"{SAMPLES_PER_OSCILLATION} samples per oscillation at k={kmax:.3e}")
        signal = signal.refined(math.ceil(signal.max_step / h_allowed))
    if signal.peak == 0:
        zeros = np.zeros(k_arr.shape, dtype=complex)
        return (zeros[0], zeros[0]) if scalar else (zeros, zeros.copy())
    breaks, coeffs = signal._pieces
    value, deriv = filon_transform(breaks, coeffs, k_arr)
    if scalar:
        return value[0], deriv[0]
    return value, deriv


def least_squares_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Slope of the least-squares line through ``(x, y)``."""
    return float(np.polyfit(np.asarray(x, float), np.asarray(y, float), 1)[0])
