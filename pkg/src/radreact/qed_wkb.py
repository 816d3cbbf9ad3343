"""
Semiclassical photon emission by a charge crossing a static potential.

The emission amplitude is an overlap of right-moving WKB modes
``phi_P(z) = kappa^{-1/2} exp(i int_0^z kappa / hbar)`` before and after the
photon is emitted.  After an integration by parts only the region where
``V' != 0`` contributes, and the remaining oscillatory integral is done in
the phase variable with a Filon-type rule.

The wave-packet position shift evolved back to ``t = 0`` is

    dz_0 = -(2i alpha / 3) int dp/p |f(p)|^2 int dk/2pi conj(a_p(k)) d/dk a_p(k),

the term proportional to the emission probability having been removed by
unitarity.  :func:`position_expectation_bilinear` evaluates the same
quantity from the momentum-space bilinear form directly as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InfraredError, PreconditionError, RegimeError
from .numerics import (DEFAULT_SUPPORT_TOL, filon_transform, fourier_integral,
                       gauss_legendre_panels, integrate_samples, quad_adaptive,
                       _piecewise_polynomial)
from .potentials import (AccelerationProfile, PhysicalParams, Potential, TimeGrid,
                         acceleration_profile)
from .spectral import (emission_probability, pulse_bandwidth,
                       spectralize, symmetric_k_grid, truncation_wavenumber)

FORMS = ("exact_wkb", "reduced")


# --------------------------------------------------------------------------
# WKB modes
# --------------------------------------------------------------------------

def _kappa_sq(potential, params, P, z):
    return P * P - 2.0 * params.m * potential.evaluate(z)[0]


def _require_no_turning_point(potential, params, P, label="P"):
    if P * P - 2.0 * params.m * potential.max_value <= 0:
        raise RegimeError(f"turning point: {label}^2 = {P * P:.6g} does not exceed "
                          f"2 m max V = {2 * params.m * potential.max_value:.6g}")


@dataclass(frozen=True)
class WKBMode:
    """Right-moving WKB solution with asymptotic momentum ``P``."""

    P: float
    potential: Potential
    params: PhysicalParams = field(default_factory=PhysicalParams)

    def __post_init__(self):
        _require_no_turning_point(self.potential, self.params, self.P)

    def kappa(self, z):
        return np.sqrt(_kappa_sq(self.potential, self.params, self.P, z))

    def amplitude(self, z):
        return self.kappa(z) ** -0.5

    def phase(self, z: float) -> float:
        return wkb_phase_integral(self.potential, self.P, z, self.params)[0]

    def __call__(self, z: float) -> complex:
        return self.amplitude(z) * np.exp(1j * self.phase(z) / self.params.hbar_eff)


def wkb_phase_integral(potential: Potential, P: float, z: float,
                       params: Optional[PhysicalParams] = None, tol=1e-13):
    """``(int_0^z kappa dz', kappa(z)^{-1/2})`` with ``kappa = sqrt(P^2 - 2 m V)``."""
    params = params or PhysicalParams()
    _require_no_turning_point(potential, params, P)
    kappa = lambda s: math.sqrt(_kappa_sq(potential, params, P, s))  # noqa: E731
    if z == 0:
        phase = 0.0
    else:
        n = max(2, int(abs(z) / potential.length_scale) + 1)
        pts = list(np.linspace(0.0, z, n + 1)[1:-1])
        scale = abs(z) * P
        phase = quad_adaptive(lambda s: kappa(s) / scale, 0.0, z, tol=tol, points=pts) * scale
    return phase, kappa(z) ** -0.5


# --------------------------------------------------------------------------
# Emission amplitude
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EmissionAmplitude:
    I: complex
    p: float
    k: float
    k_z: float
    hbar_eff: float
    form: str
    P: float


def _integrand_exact(potential, params, p, P, k_z):
    """Phase derivative and integration-by-parts amplitude for the full WKB overlap."""
    m, hbar = params.m, params.hbar_eff
    dP2 = P * P - p * p

    def phase_rate(z):
        kp = np.sqrt(_kappa_sq(potential, params, p, z))
        kP = np.sqrt(_kappa_sq(potential, params, P, z))
        return dP2 / (hbar * (kP + kp)) - k_z

    def amplitude(z):
        V, dV, _ = potential.evaluate(z)
        kp = np.sqrt(p * p - 2 * m * V)
        kP = np.sqrt(P * P - 2 * m * V)
        c = math.sqrt(p / P) * np.sqrt(kP / kp)
        # c' = (c/2)(kappa_P'/kappa_P - kappa_p'/kappa_p),  kappa' = -m V' / kappa
        dc = 0.5 * c * m * dV * dP2 / (kP * kP * kp * kp)
        rate = dP2 / (hbar * (kP + kp)) - k_z
        drate = m * dV * dP2 / (hbar * kP * kp * (kP + kp))
        return dc / rate - c * drate / rate**2

    return phase_rate, amplitude


def _integrand_reduced(potential, params, p, k, k_z):
    m = params.m

    def speed(z):
        return np.sqrt(_kappa_sq(potential, params, p, z)) / m

    def phase_rate(z):
        return k / speed(z) - k_z

    def amplitude(z):
        dV = potential.evaluate(z)[1]
        v = speed(z)
        dv = -dV / (m * v)
        return k * dv / (k - k_z * v) ** 2

    return phase_rate, amplitude


def oscillatory_overlap(phase_rate, amplitude, window, n_nodes, gl_order=12):
    """``int amplitude(z) exp(i Phi(z)) dz`` over ``window`` with ``Phi(0) = 0``.

    ``Phi' = phase_rate`` must be positive.  The integral is carried out in
    ``u = Phi(z)`` where the amplitude is smooth, panel by panel exactly
    against ``exp(iu)``, so the cost does not grow with the phase range.
    """
    lo, hi = window
    z = np.linspace(lo, hi, n_nodes)
    rate = phase_rate(z)
    if np.any(rate <= 0):
        raise RegimeError("phase is not monotone over the window (Phi' <= 0)")
    step = z[1] - z[0]
    lead = np.linspace(0.0, lo, int(math.ceil(abs(lo) / step)) + 2)
    phi0 = float(np.sum(gauss_legendre_panels(phase_rate, lead, gl_order)))
    u = phi0 + np.concatenate([[0.0], np.cumsum(gauss_legendre_panels(phase_rate, z, gl_order))])
    g = amplitude(z) / rate
    breaks, coeffs = _piecewise_polynomial(u, g)
    return complex(filon_transform(breaks, coeffs, 1.0, derivative=False)[0])


def emission_amplitude(potential: Potential, params: PhysicalParams, p: float, k: float,
                       k_z: float = 0.0, form: str = "reduced", P: Optional[float] = None,
                       points_per_scale: int = 64,
                       support_tol: float = DEFAULT_SUPPORT_TOL) -> EmissionAmplitude:
    """Emission amplitude ``I_pk`` for a photon of wavenumber ``k``.

    ``form="exact_wkb"`` uses the full phase difference of the WKB modes with
    initial momentum ``P = sqrt(p^2 + 2 m hbar_eff k)``; ``form="reduced"``
    linearises it to ``k / v_p(z)``.  Passing ``P`` explicitly decouples it
    from energy conservation (a diagnostic of the classical limit).
    """
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}")
    if not k > 0:
        raise PreconditionError("photon wavenumber k must be positive")
    if abs(k_z) > k:
        raise PreconditionError("|k_z| must not exceed k")
    m = params.m
    _require_no_turning_point(potential, params, p, "p")
    window = potential.support_window(support_tol)
    n_nodes = max(8, int(math.ceil((window[1] - window[0]) / potential.length_scale
                                   * points_per_scale)) + 1)

    if form == "reduced":
        zs = np.linspace(*window, 2001)
        vmax = float(np.max(np.sqrt(_kappa_sq(potential, params, p, zs)) / m))
        if k <= k_z * vmax:
            raise RegimeError(f"reduced form needs k > k_z v_p (k={k:g}, k_z v_max={k_z * vmax:g})")
        rate, amp = _integrand_reduced(potential, params, p, k, k_z)
        P_used = p
    else:
        P_used = math.sqrt(p * p + 2 * m * params.hbar_eff * k) if P is None else float(P)
        _require_no_turning_point(potential, params, P_used)
        if P_used == p:
            raise PreconditionError("P equals p: no energy transferred to the photon")
        rate, amp = _integrand_exact(potential, params, p, P_used, k_z)
    if potential.evaluate(np.linspace(*window, 64))[1].any():
        I = 1j * oscillatory_overlap(rate, amp, window, n_nodes)
    else:
        I = 0j
    return EmissionAmplitude(I, p, k, k_z, params.hbar_eff, form, P_used)


def classical_limit_gaps(potential: Potential, params: PhysicalParams, p: float, k: float,
                         hbar_values, k_z: float = 0.0) -> np.ndarray:
    """Relative gap ``|I_exact - I_reduced| / |I_reduced|`` for each ``hbar_eff``."""
    reduced = emission_amplitude(potential, params, p, k, k_z, "reduced").I
    gaps = []
    for h in hbar_values:
        exact = emission_amplitude(potential, params.with_(hbar_eff=h), p, k, k_z, "exact_wkb").I
        gaps.append(abs(exact - reduced) / abs(reduced))
    return np.array(gaps)


# --------------------------------------------------------------------------
# Momentum scaling identity
# --------------------------------------------------------------------------

def scaling_identity_residual(potential: Potential, params: PhysicalParams, p: float, k: float,
                              mode: str = "straight_line", rel_step: float = 1e-4,
                              floor_rel: float = 1e-3, grid: Optional[TimeGrid] = None) -> float:
    """Residual of ``d a_p/dp = -(a_p + k d a_p/dk) / p``.

    ``d a_p/dp`` is a centred difference with relative step ``rel_step``,
    Richardson-extrapolated against step ``2 rel_step``;
    ``d a_p/dk`` is analytic.  The residual is divided by
    ``max(|a_p(k)|, floor_rel * int |a| dt)``.  The identity is exact in
    ``straight_line`` mode only.
    """
    dp = rel_step * p
    prof = acceleration_profile(potential, params, p, mode, grid)
    a, da_dk = fourier_integral(prof.signal, k)

    def centred(h):
        plus = acceleration_profile(potential, params, p + h, mode, grid).signal
        minus = acceleration_profile(potential, params, p - h, mode, grid).signal
        return (fourier_integral(plus, k)[0] - fourier_integral(minus, k)[0]) / (2 * h)

    # one Richardson step removes the O(dp^2) error, which grows with k * |t|
    lhs = (4 * centred(dp) - centred(2 * dp)) / 3
    rhs = -(a + k * da_dk) / p
    l1 = prof.signal.integral(lambda t, x: np.abs(x))
    floor = floor_rel * l1
    denom = max(abs(a), floor)
    if denom == 0:
        return float(abs(lhs - rhs))
    return float(abs(lhs - rhs) / denom)


# --------------------------------------------------------------------------
# Wave packets and the position shift
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WavePacket:
    """Momentum-space packet ``f(p)`` sampled on ``p_grid`` (unit norm).

    ``x0`` multiplies ``f`` by ``exp(-i p x0)``, which places the packet at
    ``z = x0`` at ``t = 0``.
    """

    p_bar: float
    sigma_p: float
    p_grid: np.ndarray
    f: np.ndarray
    df_dp: np.ndarray
    x0: float = 0.0

    @property
    def norm(self) -> float:
        return integrate_samples(self.p_grid, np.abs(self.f) ** 2)


def gaussian_packet(p_bar: float, sigma_p: float, n: int = 41, width: float = 7.0,
                    x0: float = 0.0) -> WavePacket:
    """Gaussian packet with ``|f|^2`` of standard deviation ``sigma_p``, cut at ``width`` sigmas."""
    if not 0 < sigma_p < p_bar:
        raise ValueError("need 0 < sigma_p < p_bar")
    if n % 2 == 0:
        n += 1
    p = p_bar + sigma_p * np.linspace(-width, width, n)
    if p[0] <= 0:
        raise ValueError("packet extends to non-positive momenta")
    env = np.exp(-((p - p_bar) ** 2) / (4 * sigma_p**2))
    f = env * np.exp(-1j * p * x0)
    f = f / math.sqrt(integrate_samples(p, np.abs(f) ** 2))
    df = f * (-(p - p_bar) / (2 * sigma_p**2) - 1j * x0)
    return WavePacket(p_bar, sigma_p, p, f, df, x0)


def validate_packet(packet: WavePacket, potential: Potential, params: PhysicalParams,
                    sharpness: float = 10.0, momentum_margin: float = 3.0,
                    support_tol: float = DEFAULT_SUPPORT_TOL):
    """Raise :class:`PreconditionError` unless ``packet`` has unit norm and is narrow.

    Its lowest momentum must also exceed ``momentum_margin * sqrt(2 m max|V|)``.
    """
    if abs(packet.norm - 1.0) > 1e-10:
        raise PreconditionError(f"packet norm {packet.norm!r} differs from 1")
    if packet.sigma_p > packet.p_bar / sharpness:
        raise PreconditionError(f"packet too wide: sigma_p exceeds p_bar / {sharpness:g}")
    zs = np.linspace(*potential.support_window(support_tol), 2001)
    vmax = float(np.max(np.abs(potential.evaluate(zs)[0])))
    floor = momentum_margin * math.sqrt(2 * params.m * vmax)
    if packet.p_grid[0] < floor:
        raise PreconditionError(f"packet reaches p={packet.p_grid[0]:.6g} below "
                                f"{momentum_margin:g} sqrt(2 m max|V|) = {floor:.6g}")


@dataclass(frozen=True)
class QuantumShift:
    shift: float
    imag: float
    emission_prob_term: float
    ir_divergent: bool
    photon_energy: float
    per_p: np.ndarray = field(repr=False)


def _spectral_moment(accel: AccelerationProfile):
    sp = spectralize(accel)
    return integrate_samples(sp.k, np.conj(sp.a_hat) * sp.da_hat_dk) / (2 * math.pi), sp


def quantum_position_shift(packet: WavePacket, potential: Potential, params: PhysicalParams,
                           mode: str = "straight_line", k_min: float = 0.0,
                           grid: Optional[TimeGrid] = None, validate: bool = True) -> QuantumShift:
    """Expected position shift at ``t = 0`` of the packet after first-order emission.

    ``emission_prob_term`` is the emission probability at ``p_bar`` that
    multiplies the unperturbed position; it is reported but not added to
    the shift.  It is ``inf`` when the probability is infrared divergent and
    ``k_min == 0``; the shift itself stays finite.
    """
    if validate:
        validate_packet(packet, potential, params)
    moments = np.array([_spectral_moment(acceleration_profile(potential, params, p, mode, grid))[0]
                        for p in packet.p_grid])
    weight = np.abs(packet.f) ** 2 / packet.p_grid
    total = -2j * params.alpha / 3.0 * integrate_samples(packet.p_grid, weight * moments)

    centre = acceleration_profile(potential, params, packet.p_bar, mode, grid)
    _, sp = _spectral_moment(centre)
    try:
        prob = emission_probability(sp, params, k_min)
        prob_term, divergent = prob.prob, prob.ir_divergent
    except InfraredError:
        prob_term, divergent = math.inf, True
    energy = 2 * params.alpha / 3.0 * integrate_samples(sp.k, np.abs(sp.a_hat) ** 2) / (2 * math.pi)
    return QuantumShift(float(total.real), float(total.imag), float(prob_term), divergent,
                        float(energy), moments)


def packet_bilinear(A, B, p_grid, dA_dp, dB_dp) -> complex:
    """``<A, B> = (i/2) int dp [conj(A) dB/dp - conj(dA/dp) B]``."""
    integrand = np.conj(A) * dB_dp - np.conj(dA_dp) * B
    return 0.5j * integrate_samples(p_grid, integrand)


def position_expectation_bilinear(packet: WavePacket, potential: Potential, params: PhysicalParams,
                                  mode: str = "straight_line", k_min: float = 0.0,
                                  rel_step: float = 1e-4, grid: Optional[TimeGrid] = None,
                                  n_linear: int = 600, n_log: int = 64) -> dict:
    """Position expectation of the one-photon component evaluated directly.

    Returns ``z0 = (4 alpha / 3) int_0^inf dk/(2 pi k) <a_p f, a_p f>`` with
    ``d/dp`` taken by finite differences, its part proportional to
    ``<f, f>`` (``norm_term``, removed by unitarity) and the remainder
    ``shift``.
    """
    centre = acceleration_profile(potential, params, packet.p_bar, mode, grid)
    k_top = truncation_wavenumber(centre) * packet.p_grid[-1] / packet.p_bar
    k_all = symmetric_k_grid(k_top, pulse_bandwidth(centre), n_linear, n_log)
    k = k_all[k_all > k_min]
    if k_min > 0:
        k = np.concatenate([[k_min], k])

    a = np.empty((len(packet.p_grid), len(k)), dtype=complex)
    da_dp = np.empty_like(a)
    for i, p in enumerate(packet.p_grid):
        dp = rel_step * p
        a[i] = fourier_integral(acceleration_profile(potential, params, p, mode, grid).signal, k)[0]
        plus = fourier_integral(acceleration_profile(potential, params, p + dp, mode, grid).signal, k)[0]
        minus = fourier_integral(acceleration_profile(potential, params, p - dp, mode, grid).signal, k)[0]
        da_dp[i] = (plus - minus) / (2 * dp)

    f = packet.f[:, None]
    df = packet.df_dp[:, None]
    A = a * f
    dA = da_dp * f + a * df
    total = np.array([packet_bilinear(A[:, j], A[:, j], packet.p_grid, dA[:, j], dA[:, j])
                      for j in range(len(k))]).real
    rho = (0.5j * (np.conj(f) * df - np.conj(df) * f)).real
    norm_part = np.array([integrate_samples(packet.p_grid, (np.abs(a[:, j]) ** 2) * rho[:, 0])
                          for j in range(len(k))])

    a0 = np.array([fourier_integral(acceleration_profile(potential, params, p, mode, grid).signal,
                                    0.0)[0] for p in packet.p_grid])
    divergent_norm = packet.x0 != 0 and np.max(np.abs(a0)) > 1e-10 * np.max(np.abs(a))
    if k_min == 0 and divergent_norm:
        raise InfraredError("norm term diverges: a_p(0) != 0 and <f, f> != 0; supply k_min > 0")

    c = 4 * params.alpha / 3.0 / (2 * math.pi)

    def k_integral(values):
        # integrand values/k is finite at k -> 0, so the first segment adds values[0]
        out = integrate_samples(np.log(k), values)
        return out + (values[0] if k_min == 0 else 0.0)

    z0 = c * k_integral(total)
    norm_term = c * k_integral(norm_part)
    return {"z0": float(z0), "norm_term": float(norm_term), "shift": float(z0 - norm_term)}
