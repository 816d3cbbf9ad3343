import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from radreact.errors import PreconditionError, RegimeError
from radreact.numerics import fourier_integral
from radreact.potentials import (GaussianBump, PhysicalParams, SmoothStep, acceleration_profile,
                                 free_particle)
from radreact.qed_wkb import (WKBMode, classical_limit_gaps, emission_amplitude, gaussian_packet,
                              packet_bilinear, position_expectation_bilinear,
                              quantum_position_shift, scaling_identity_residual,
                              validate_packet, wkb_phase_integral)
from radreact.spectral import (emission_probability, expected_photon_energy,
                               larmor_shift_fourier, spectralize)


class TestWKBMode:
    def test_free_mode(self, params):
        phase, amp = wkb_phase_integral(free_particle(), 1.7, 3.0, params)
        assert phase == pytest.approx(1.7 * 3.0, rel=1e-13)
        assert amp == pytest.approx(1.7**-0.5)

    def test_step_phase_becomes_free_plus_offset(self, params):
        potential = SmoothStep(0.1)
        offsets = [wkb_phase_integral(potential, 1.0, z, params)[0] - z for z in (30.0, 40.0, 50.0)]
        assert offsets[0] == pytest.approx(offsets[1], abs=1e-10)
        assert offsets[1] == pytest.approx(offsets[2], abs=1e-10)

    def test_bump_amplitude_at_centre(self, params):
        potential = GaussianBump(0.2, 1.0, 1.0)
        _, amp = wkb_phase_integral(potential, 1.0, 1.0, params)
        assert amp == pytest.approx((1.0 - 2 * 0.2) ** -0.25, rel=1e-14)

    def test_phase_increases(self, params):
        mode = WKBMode(1.0, GaussianBump(0.2), params)
        phases = [mode.phase(z) for z in np.linspace(-5, 5, 21)]
        assert np.all(np.diff(phases) > 0)
        assert abs(mode(0.5)) == pytest.approx(mode.amplitude(0.5))

    def test_turning_point(self, params):
        with pytest.raises(RegimeError):
            WKBMode(0.5, GaussianBump(0.2), params)


class TestEmissionAmplitude:
    def test_free_particle(self, params):
        for form in ("reduced", "exact_wkb"):
            assert emission_amplitude(free_particle(), params, 1.0, 0.7, form=form).I == 0

    @pytest.mark.parametrize("k", [0.1, 0.8, 2.5])
    def test_reduced_equals_scaled_transform(self, params, step, k):
        I = emission_amplitude(step, params, 1.0, k).I
        accel = acceleration_profile(step, params, 1.0, "exact")
        ref = 1j / k * fourier_integral(accel.signal, k)[0]
        assert abs(I - ref) <= 1e-6 * abs(ref)

    def test_classical_limit_is_monotone(self, params, step):
        k, p = 1.0, 1.0
        h0 = 1e-2 * p * p / (2 * params.m * k)
        gaps = classical_limit_gaps(step, params, p, k, [h0 / 2**i for i in range(5)])
        assert np.all(np.diff(gaps) < 0)
        orders = np.log2(gaps[:-1] / gaps[1:])
        assert np.all(orders >= 0.9)

    def test_invalid_requests(self, params, step):
        with pytest.raises(PreconditionError):
            emission_amplitude(step, params, 1.0, 0.0)
        with pytest.raises(PreconditionError):
            emission_amplitude(step, params, 1.0, 1.0, k_z=2.0)
        with pytest.raises(ValueError):
            emission_amplitude(step, params, 1.0, 1.0, form="born")
        with pytest.raises(PreconditionError):
            emission_amplitude(step, params, 1.0, 1.0, form="exact_wkb", P=1.0)

    def test_oblique_photon(self, params, step):
        """With k_z != 0 the reduced amplitude still matches the transform taken in z."""
        k, kz = 1.0, 0.3
        I = emission_amplitude(step, params, 1.0, k, kz).I
        ref = emission_amplitude(step, params, 1.0, k, kz, points_per_scale=128).I
        assert abs(I - ref) <= 1e-8 * abs(ref)


class TestScalingIdentity:
    def test_zero_frequency(self, params, step):
        assert scaling_identity_residual(step, params, 1.0, 1e-9) <= 1e-8

    @settings(max_examples=8, deadline=None)
    @given(st.floats(0.8, 1.2), st.floats(0.2, 2.0))
    def test_straight_line(self, p, k):
        params = PhysicalParams(alpha=0.01)
        potential = GaussianBump(0.001, 1.0, -9.0)
        assert scaling_identity_residual(potential, params, p, k) <= 1e-6

    def test_exact_mode_is_only_a_diagnostic(self, params):
        potential = SmoothStep(0.05)
        exact = scaling_identity_residual(potential, params, 1.0, 0.7, mode="exact")
        straight = scaling_identity_residual(potential, params, 1.0, 0.7)
        assert exact > 100 * straight


class TestPacket:
    def test_normalised(self):
        assert gaussian_packet(1.0, 0.05).norm == pytest.approx(1.0, abs=1e-10)

    def test_validation(self, params, early_bump):
        validate_packet(gaussian_packet(1.0, 0.05), early_bump, params)
        with pytest.raises(PreconditionError, match="too wide"):
            validate_packet(gaussian_packet(1.0, 0.12), early_bump, params)
        with pytest.raises(PreconditionError, match="below"):
            validate_packet(gaussian_packet(0.42, 0.01), GaussianBump(0.01, 1.0, -9.0), params)

    def test_rejects_bad_widths(self):
        with pytest.raises(ValueError):
            gaussian_packet(1.0, 1.5)

    def test_bilinear_form_gives_packet_position(self):
        pk = gaussian_packet(1.0, 0.05, x0=2.5)
        value = packet_bilinear(pk.f, pk.f, pk.p_grid, pk.df_dp, pk.df_dp)
        assert value.real == pytest.approx(2.5, rel=1e-10)
        assert abs(value.imag) < 1e-12


class TestQuantumShift:
    def test_free_particle(self, params):
        pk = gaussian_packet(1.0, 0.05, n=11)
        q = quantum_position_shift(pk, free_particle(), params)
        assert q.shift == 0.0 and q.emission_prob_term == 0.0

    def test_converges_to_classical(self, params, early_bump):
        sp = spectralize(acceleration_profile(early_bump, params, 1.0, "straight_line"))
        classical = larmor_shift_fourier(sp, 1.0, params).real
        gaps = []
        for sigma in (0.1, 0.05, 0.025):
            q = quantum_position_shift(gaussian_packet(1.0, sigma, n=21), early_bump, params,
                                       validate=False)
            assert abs(q.imag) <= 1e-10 * abs(q.shift) + 1e-14
            gaps.append(abs(q.shift - classical))
        assert gaps[0] > gaps[1] > gaps[2]

    def test_quadruples_when_amplitude_doubles(self, params):
        pk = gaussian_packet(1.0, 0.05, n=21)
        s1 = quantum_position_shift(pk, GaussianBump(0.0005, 1.0, -9.0), params).shift
        s2 = quantum_position_shift(pk, GaussianBump(0.001, 1.0, -9.0), params).shift
        assert s2 / s1 == pytest.approx(4.0, rel=1e-3)

    def test_cross_checks(self, params, step):
        pk = gaussian_packet(1.0, 0.05, n=11)
        q = quantum_position_shift(pk, step, params, k_min=1e-4)
        sp = spectralize(acceleration_profile(step, params, 1.0, "straight_line"))
        direct = emission_probability(sp, params, 1e-4).prob
        assert q.ir_divergent
        assert q.emission_prob_term == pytest.approx(direct, rel=1e-10)
        energy = expected_photon_energy(sp.source, sp, params)["freq_domain"]
        assert q.photon_energy == pytest.approx(energy, rel=1e-10)

    def test_divergent_probability_term_without_cutoff(self, params, step):
        q = quantum_position_shift(gaussian_packet(1.0, 0.05, n=11), step, params)
        assert math.isinf(q.emission_prob_term) and math.isfinite(q.shift)

    def test_bilinear_route_agrees(self, params, early_bump):
        pk = gaussian_packet(1.0, 0.05, n=15)
        direct = quantum_position_shift(pk, early_bump, params).shift
        bil = position_expectation_bilinear(pk, early_bump, params)
        assert bil["shift"] == pytest.approx(direct, rel=1e-5)
        assert bil["norm_term"] == pytest.approx(0.0, abs=1e-6 * abs(direct))
