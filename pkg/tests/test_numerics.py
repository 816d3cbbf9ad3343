import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from radreact.errors import IntegrationError, QuadratureError, ResolutionError, SupportError
from radreact.numerics import (SampledSignal, filon_transform, fourier_integral,
                               gauss_legendre_panels, integrate_ode, integrate_samples,
                               least_squares_slope, quad_adaptive, unit_moments)


class TestIntegrateODE:
    def test_constant_solution(self):
        sol = integrate_ode(lambda t, y: [0.0], [1.0], (0.0, 3.0))
        assert np.all(sol(np.linspace(0, 3, 7))[0] == 1.0)

    def test_harmonic_oscillator_returns_after_one_period(self):
        sol = integrate_ode(lambda t, y: [y[1], -y[0]], [1.0, 0.0], (0.0, 2 * np.pi))
        np.testing.assert_allclose(sol(2 * np.pi), [1.0, 0.0], atol=1e-8)

    def test_exponential_growth(self):
        tau0 = 0.3
        sol = integrate_ode(lambda t, y: y / tau0, [1e-6], (0.0, 5 * tau0), rel_tol=1e-10)
        t = np.linspace(0, 5 * tau0, 11)
        np.testing.assert_allclose(sol(t)[0], 1e-6 * np.exp(t / tau0), rtol=1e-9)

    def test_tighter_tolerance_never_worse(self):
        errs = []
        for rtol in (1e-6, 5e-7, 2.5e-7, 1.25e-7):
            sol = integrate_ode(lambda t, y: [y[1], -y[0]], [1.0, 0.0], (0.0, 10.0), rel_tol=rtol)
            errs.append(abs(sol(10.0)[0] - math.cos(10.0)))
        assert all(b <= a * 1.5 for a, b in zip(errs, errs[1:]))
        assert errs[-1] < errs[0]

    def test_overflow_guard_reports_failure_time(self):
        with pytest.raises(IntegrationError) as info:
            integrate_ode(lambda t, y: y / 0.01, [1.0], (0.0, 100.0), overflow=1e100)
        assert 0 < info.value.t_fail < 100.0

    def test_backward_integration(self):
        sol = integrate_ode(lambda t, y: [1.0], [0.0], (0.0, -2.0))
        assert sol(-2.0)[0] == pytest.approx(-2.0, rel=1e-12)

    def test_query_outside_span_rejected(self):
        sol = integrate_ode(lambda t, y: [1.0], [0.0], (0.0, 1.0))
        with pytest.raises(ValueError):
            sol(2.0)


class TestQuadrature:
    def test_unit_integrand(self):
        assert quad_adaptive(lambda s: 1.0, 0.0, 1.0) == pytest.approx(1.0, abs=1e-14)

    def test_semi_infinite_exponential(self):
        assert quad_adaptive(lambda s: math.exp(-s), 0.0, np.inf, decay_scale=1.0) == \
            pytest.approx(1.0, rel=1e-12)

    def test_sech_squared_over_real_line(self):
        f = lambda u: 1.0 / math.cosh(u) ** 2  # noqa: E731
        value = quad_adaptive(f, 0.0, np.inf, decay_scale=1.0)
        assert 2 * value == pytest.approx(2.0, rel=1e-10)

    def test_unreachable_tolerance_raises_with_estimate(self):
        with pytest.raises(QuadratureError) as info:
            quad_adaptive(lambda s: math.sin(1e4 * s) * s, 0.0, 1.0, tol=1e-14, limit=5)
        assert info.value.estimate is not None

    def test_gauss_legendre_panels_polynomial(self):
        value = gauss_legendre_panels(lambda x: x**7 - 3 * x, np.linspace(0, 2, 4)).sum()
        assert value == pytest.approx(2**8 / 8 - 6, rel=1e-14)

    def test_integrate_samples_is_exact_for_quintics(self):
        x = np.sort(np.random.default_rng(0).uniform(0, 1, 30))
        x[0], x[-1] = 0.0, 1.0
        assert integrate_samples(x, x**5) == pytest.approx(1 / 6, rel=1e-12)

    def test_least_squares_slope(self):
        assert least_squares_slope([0, 1, 2], [1, 3, 5]) == pytest.approx(2.0)


class TestSampledSignal:
    def test_rejects_unordered_grid(self):
        with pytest.raises(ValueError):
            SampledSignal(np.array([0.0, 2.0, 1.0]), np.zeros(3))

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            SampledSignal(np.linspace(0, 1, 3), np.zeros(4))

    def test_rejects_single_sample(self):
        with pytest.raises(ValueError):
            SampledSignal(np.array([0.0]), np.array([0.0]))

    def test_rejects_non_compact_signal(self):
        t = np.linspace(-1, 1, 11)
        with pytest.raises(SupportError):
            SampledSignal(t, np.ones_like(t))


def _gaussian_signal(a0=1.3, sigma=0.7, h=0.02, center=0.0):
    t = center + np.arange(-9 * sigma, 9 * sigma + h / 2, h)
    return SampledSignal.from_function(
        lambda s: a0 * np.exp(-0.5 * ((np.asarray(s) - center) / sigma) ** 2), t)


class TestFourierIntegral:
    def test_zero_signal(self):
        sig = SampledSignal(np.linspace(0, 1, 5), np.zeros(5))
        a, da = fourier_integral(sig, np.array([0.0, 1.0]))
        assert np.all(a == 0) and np.all(da == 0)

    def test_gaussian_transform(self):
        a0, sigma = 1.3, 0.7
        sig = _gaussian_signal(a0, sigma)
        k = np.linspace(-8, 8, 81)
        a, da = fourier_integral(sig, k)
        exact = a0 * sigma * math.sqrt(2 * math.pi) * np.exp(-0.5 * (sigma * k) ** 2)
        mask = exact > 1e-6 * exact.max()
        np.testing.assert_allclose(a[mask], exact[mask], rtol=1e-8)
        np.testing.assert_allclose(da[mask], -sigma**2 * k[mask] * exact[mask], rtol=1e-7,
                                   atol=1e-12)

    def test_sech2_transform(self):
        A, T = 0.4, 1.5
        t = np.linspace(-40 * T, 40 * T, 8001)
        sig = SampledSignal.from_function(lambda s: A / np.cosh(np.asarray(s) / T) ** 2, t)
        k = np.array([0.0, 0.1, 0.7, 2.0])
        a, _ = fourier_integral(sig, k)
        x = np.pi * k * T / 2
        exact = np.where(k == 0, 2 * A * T, A * np.pi * k * T**2 / np.where(x == 0, 1, np.sinh(x)))
        np.testing.assert_allclose(a, exact, rtol=1e-8)
        assert a[0] == pytest.approx(2 * A * T, rel=1e-10)

    def test_scalar_input_returns_scalar(self):
        a, da = fourier_integral(_gaussian_signal(), 0.5)
        assert np.ndim(a) == 0 and np.ndim(da) == 0

    def test_coarse_grid_without_generator_raises(self):
        t = np.linspace(-6, 6, 49)
        sig = SampledSignal(t, np.exp(-t**2))
        with pytest.raises(ResolutionError):
            fourier_integral(sig, 50.0)

    def test_coarse_grid_with_generator_is_refined(self):
        t = np.linspace(-8, 8, 65)
        sig = SampledSignal.from_function(lambda s: np.exp(-0.5 * np.asarray(s) ** 2), t)
        a, _ = fourier_integral(sig, 6.0)
        assert abs(a - math.sqrt(2 * math.pi) * math.exp(-18)) < 1e-9

    def test_derivative_matches_finite_differences_at_second_order(self):
        sig = _gaussian_signal(center=-2.0)
        k0 = 1.1
        _, da = fourier_integral(sig, k0)
        errs = []
        for h in (0.08, 0.04, 0.02):
            a_p, _ = fourier_integral(sig, k0 + h)
            a_m, _ = fourier_integral(sig, k0 - h)
            errs.append(abs((a_p - a_m) / (2 * h) - da))
        orders = [math.log2(e1 / e2) for e1, e2 in zip(errs, errs[1:])]
        assert min(orders) >= 1.9

    def test_parseval(self):
        sig = _gaussian_signal(center=-3.0)
        k = np.linspace(-12, 12, 2401)
        a, _ = fourier_integral(sig, k)
        assert np.abs(a[0]) < 1e-12 * np.abs(a).max()
        lhs = integrate_samples(k, np.abs(a) ** 2) / (2 * math.pi)
        rhs = sig.integral(lambda t, x: x * x)
        assert lhs == pytest.approx(rhs, rel=1e-8)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.3, 2.0), st.floats(-3.0, 3.0), st.floats(0.0, 6.0))
    def test_reality_pairing(self, sigma, center, k):
        sig = _gaussian_signal(1.0, sigma, h=sigma / 20, center=center)
        a, _ = fourier_integral(sig, np.array([-k, k]))
        assert abs(a[0] - np.conj(a[1])) <= 1e-12

    @settings(max_examples=25, deadline=None)
    @given(st.floats(-50.0, 50.0))
    def test_unit_moments_against_quadrature(self, theta):
        mu = unit_moments(np.array([theta]), 5)[0]
        for n in range(6):
            re = quad_adaptive(lambda u: u**n * math.cos(theta * u), 0, 1, tol=1e-13)
            im = quad_adaptive(lambda u: u**n * math.sin(theta * u), 0, 1, tol=1e-13)
            assert abs(mu[n] - complex(re, im)) <= 1e-12

    def test_filon_matches_direct_quadrature_for_single_panel(self):
        breaks = np.array([0.0, 2.0])
        coeffs = np.array([[0.0], [0.0], [1.0], [0.0], [0.0], [0.5]])
        k = np.array([0.0, 3.0])
        value, deriv = filon_transform(breaks, coeffs, k)
        for kk, v, d in zip(k, value, deriv):
            f = lambda t: (t**3 + 0.5)  # noqa: E731
            ref = complex(quad_adaptive(lambda t: f(t) * math.cos(kk * t), 0, 2, tol=1e-13),
                          quad_adaptive(lambda t: f(t) * math.sin(kk * t), 0, 2, tol=1e-13))
            dref = complex(-quad_adaptive(lambda t: t * f(t) * math.sin(kk * t), 0, 2, tol=1e-13),
                           quad_adaptive(lambda t: t * f(t) * math.cos(kk * t), 0, 2, tol=1e-13))
            assert abs(v - ref) < 1e-11 and abs(d - dref) < 1e-11
