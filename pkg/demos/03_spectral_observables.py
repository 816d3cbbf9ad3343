"""
Spectrum of the acceleration pulse
==================================

The position shift of the Larmor model can be read off a_hat(k), the
transform of a(t), and so can the photon emission probability.  A step
changes the velocity, so its spectrum is nonzero at k = 0 and the
probability grows like log(1 / k_min); a bump leaves the velocity unchanged
and stays finite.  The radiated energy is checked in both domains as well.
"""

import math

from radreact import (GaussianBump, PhysicalParams, SmoothStep, acceleration_profile,
                      emission_probability, expected_photon_energy, gaussian_pulse,
                      larmor_shift_closed_form, larmor_shift_fourier, spectralize)

params = PhysicalParams(m=1.0, alpha=0.01)

###############################################################################
# A Gaussian pulse that has ended before t = 0.
pulse = gaussian_pulse(a0=0.3, sigma=1.0, center=-12.0, params=params)
sp = spectralize(pulse)
print("shift from the spectrum:", larmor_shift_fourier(sp, 1.0, params))
print("shift in the time domain:", larmor_shift_closed_form(pulse, 1.0, params))
print("energy:", expected_photon_energy(pulse, sp, params))

###############################################################################
# Infrared behaviour.
step = spectralize(acceleration_profile(SmoothStep(0.01), params, 1.0))
a0 = abs(step.a_hat_zero())
slope = 4 * params.alpha / 3 * a0**2 / (2 * math.pi)
for k_min in (1e-2, 1e-3, 1e-4, 1e-5):
    prob = emission_probability(step, params, k_min)
    print(f"step  k_min = {k_min:.0e}  P = {prob.prob:.8e}  "
          f"P - slope ln(1/k_min) = {prob.prob - slope * math.log(1 / k_min):.8e}")

bump = spectralize(acceleration_profile(GaussianBump(0.001, 1.0, -9.0), params, 1.0))
for k_min in (1e-4, 1e-6, 1e-8, 0.0):
    print(f"bump  k_min = {k_min:.0e}  P = {emission_probability(bump, params, k_min).prob:.12e}")
