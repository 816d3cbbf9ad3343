"""
Frequency-domain observables of an acceleration pulse.

``a_hat(k) = int a(t) exp(ikt) dt`` gives the Larmor position shift as a
k-integral.  It also gives the photon emission probability, whose infrared
behaviour is reported rather than regularised, and the radiated energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridError, InfraredError, PreconditionError
from .numerics import DEFAULT_SUPPORT_TOL, SampledSignal, fourier_integral, integrate_samples
from .potentials import AccelerationProfile, PhysicalParams

#: ``|a_hat(0)|`` above this fraction of ``max|a_hat|`` marks a divergent probability.
DIVERGENCE_TOL = 1e-10
TRUNCATION_TOL = 1e-12


@dataclass(frozen=True)
class SpectralAcceleration:
    k: np.ndarray
    a_hat: np.ndarray
    da_hat_dk: np.ndarray
    source: AccelerationProfile

    @property
    def p(self):
        return self.source.p

    @property
    def peak(self):
        return float(np.max(np.abs(self.a_hat)))

    def a_hat_zero(self):
        idx = np.nonzero(self.k == 0)[0]
        if idx.size:
            return complex(self.a_hat[idx[0]])
        return complex(fourier_integral(self.source.signal, 0.0)[0])

    def conjugate_symmetry_error(self) -> float:
        """``max |a_hat(-k) - conj(a_hat(k))|`` over the symmetric grid."""
        return float(np.max(np.abs(self.a_hat[::-1] - np.conj(self.a_hat))))


def symmetric_k_grid(k_max, bandwidth, n_linear=400, n_log=96, log_floor=1e-8):
    """Grid symmetric about zero: ``0``, a geometric run from
    ``log_floor * bandwidth`` up to the linear spacing, then linear steps to
    ``k_max``."""
    if not k_max > 0:
        raise GridError("k_max must be positive")
    dk = k_max / n_linear
    lo = log_floor * bandwidth
    geo = np.geomspace(lo, dk, n_log, endpoint=False) if lo < dk else np.empty(0)
    lin = dk * np.arange(1, n_linear + 1)
    pos = np.concatenate([geo, lin])
    return np.concatenate([-pos[::-1], [0.0], pos])


def pulse_bandwidth(accel: AccelerationProfile) -> float:
    """Reciprocal duration of the pulse.

    For potential-driven profiles this is ``v / length_scale``; for a bare
    pulse the duration is taken as ``int |a| dt / max |a|``.
    """
    if accel.potential is not None:
        return accel.p / (accel.params.m * accel.potential.length_scale)
    sig = accel.signal
    if sig.peak == 0:
        return 1.0 / (sig.t[-1] - sig.t[0])
    return sig.peak / integrate_samples(sig.t, np.abs(sig.values))


def pulse_profile(func, t, params: PhysicalParams | None = None, p: float = 1.0,
                  support_tol=DEFAULT_SUPPORT_TOL) -> AccelerationProfile:
    """Wrap an analytic acceleration history ``func`` sampled on ``t``.

    The result carries no potential; ``velocity_change`` is ``int a dt``.
    """
    params = params or PhysicalParams()
    signal = SampledSignal.from_function(func, t, support_tol)
    return AccelerationProfile(signal, "pulse", p, params, None, signal.integral())


def gaussian_pulse(a0: float, sigma: float, center: float = 0.0,
                   params: PhysicalParams | None = None, p: float = 1.0,
                   points_per_sigma: int = 32, half_width: float = 8.0) -> AccelerationProfile:
    """``a(t) = a0 exp(-(t - center)^2 / 2 sigma^2)`` on ``center +- half_width sigma``.

    With the default half width the endpoints sit at ``exp(-32)``, below the
    default support tolerance.
    """
    n = int(2 * half_width * points_per_sigma) + 1
    t = center + sigma * np.linspace(-half_width, half_width, n)

    def a(tq):
        return a0 * np.exp(-0.5 * ((np.asarray(tq) - center) / sigma) ** 2)

    return pulse_profile(a, t, params, p)


def truncation_wavenumber(accel: AccelerationProfile, tol=TRUNCATION_TOL) -> float:
    """Smallest probed ``k`` beyond which ``|a_hat| < tol * peak`` on the probe set."""
    band = pulse_bandwidth(accel)
    probes = band * np.geomspace(1e-3, 64.0, 160)
    values = np.abs(fourier_integral(accel.signal, probes)[0])
    peak = max(np.max(values), abs(fourier_integral(accel.signal, 0.0)[0]))
    if peak == 0:
        return float(band)
    above = np.nonzero(values >= tol * peak)[0]
    if above.size == 0:
        return float(probes[0])
    last = above[-1]
    return float(probes[min(last + 1, len(probes) - 1)])


def default_k_grid(accel: AccelerationProfile, n_linear=400, n_log=96, log_floor=1e-8):
    return symmetric_k_grid(truncation_wavenumber(accel), pulse_bandwidth(accel),
                            n_linear, n_log, log_floor)


def spectralize(accel: AccelerationProfile, k_grid=None) -> SpectralAcceleration:
    """Evaluate ``a_hat`` and ``d a_hat / dk`` on ``k_grid`` (default: :func:`default_k_grid`)."""
    if k_grid is None:
        k_grid = default_k_grid(accel)
    k = np.asarray(k_grid, dtype=float)
    a_hat, da = fourier_integral(accel.signal, k)
    return SpectralAcceleration(k, a_hat, da, accel)


def _check_symmetric(k):
    if len(k) < 3 or not np.allclose(k, -k[::-1], rtol=0, atol=1e-14 * np.max(np.abs(k))):
        raise GridError("k grid must be symmetric about zero")


def larmor_shift_fourier(spectrum: SpectralAcceleration, p_bar: float,
                         params: PhysicalParams | None = None) -> complex:
    """``-(2i alpha / 3 p_bar) int dk/2pi conj(a_hat) d a_hat/dk``.

    The real part is the shift; the imaginary part should vanish for a real
    pulse and is returned as a check on the quadrature.
    """
    params = params or spectrum.source.params
    _check_symmetric(spectrum.k)
    sig = spectrum.source.signal
    late = np.abs(sig.values[sig.t > 0])
    if sig.peak > 0 and late.size and np.max(late) > sig.support_tol * sig.peak:
        raise PreconditionError("pulse must be supported at t <= 0")
    integral = integrate_samples(spectrum.k, np.conj(spectrum.a_hat) * spectrum.da_hat_dk) / (2 * math.pi)
    return -2j * params.alpha / (3.0 * p_bar) * integral


@dataclass(frozen=True)
class EmissionProbability:
    prob: float
    ir_divergent: bool
    k_min: float
    a_hat_zero: complex


def emission_probability(spectrum: SpectralAcceleration, params: PhysicalParams | None = None,
                         k_min: float = 0.0, divergence_tol=DIVERGENCE_TOL) -> EmissionProbability:
    """``(4 alpha / 3) int_{k_min} dk / (2 pi k) |a_hat|^2``.

    Divergent (``a_hat(0) != 0``) spectra need ``k_min > 0``; they are
    integrated in ``log k`` so the ``1/k`` growth is resolved.
    """
    params = params or spectrum.source.params
    if k_min < 0:
        raise ValueError("k_min must be non-negative")
    a0 = spectrum.a_hat_zero()
    peak = max(spectrum.peak, abs(a0))
    divergent = peak > 0 and abs(a0) > divergence_tol * peak
    if peak == 0:
        return EmissionProbability(0.0, False, k_min, a0)
    if divergent and k_min == 0:
        raise InfraredError(
            f"emission probability diverges logarithmically (|a_hat(0)| = {abs(a0):.3e}); "
            "supply k_min > 0")

    pos = spectrum.k > k_min
    k = spectrum.k[pos]
    power = np.abs(spectrum.a_hat[pos]) ** 2
    if k_min > 0:
        edge = abs(fourier_integral(spectrum.source.signal, k_min)[0]) ** 2
        k = np.concatenate([[k_min], k])
        power = np.concatenate([[edge], power])
        integral = integrate_samples(np.log(k), power)
    else:
        # |a_hat|^2 grows like k^2 from zero, so the first segment adds power(k1) / 2
        integral = integrate_samples(np.log(k), power) + 0.5 * power[0]
    prob = 4.0 * params.alpha / 3.0 * integral / (2 * math.pi)
    return EmissionProbability(float(prob), bool(divergent), k_min, a0)


def expected_photon_energy(accel: AccelerationProfile, spectrum: SpectralAcceleration,
                           params: PhysicalParams | None = None) -> dict:
    """Radiated energy from the Larmor rate and from the spectrum.

    ``time_domain = (2 alpha / 3) int a^2 dt``; ``freq_domain`` integrates
    ``(2 alpha / 3) |a_hat|^2 / 2 pi`` over the full symmetric grid.
    """
    params = params or accel.params
    _check_symmetric(spectrum.k)
    c = 2.0 * params.alpha / 3.0
    time_domain = c * accel.signal.integral(lambda t, a: a * a)
    freq_domain = c * integrate_samples(spectrum.k, np.abs(spectrum.a_hat) ** 2) / (2 * math.pi)
    return {"time_domain": float(time_domain), "freq_domain": float(freq_domain)}
