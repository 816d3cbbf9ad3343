"""
First-order QED emission and the wave-packet position shift
===========================================================

The emission amplitude is an overlap of WKB modes.  When the photon takes
little energy it collapses to (i/k) times the Fourier transform of the
classical acceleration.  Averaged over a narrow momentum packet, the
resulting position shift approaches the classical Larmor value, and it
grows quadratically with the pulse amplitude.
"""

import numpy as np

from radreact import (GaussianBump, PhysicalParams, SmoothStep, acceleration_profile,
                      classical_limit_gaps, emission_amplitude, gaussian_packet,
                      larmor_shift_fourier, quantum_position_shift, spectralize)
from radreact.numerics import fourier_integral

params = PhysicalParams(m=1.0, alpha=0.01)
step = SmoothStep(0.01)
accel = acceleration_profile(step, params, 1.0)
for k in (0.25, 1.0, 3.0):
    I = emission_amplitude(step, params, 1.0, k).I
    ref = 1j / k * fourier_integral(accel.signal, k)[0]
    print(f"k = {k:<5} I = {I:.6e}   (i/k) a_hat = {ref:.6e}")

###############################################################################
# Shrinking hbar moves the full WKB amplitude onto the reduced one.
hbars = 5e-3 / 2.0 ** np.arange(5)
for h, gap in zip(hbars, classical_limit_gaps(step, params, 1.0, 1.0, hbars)):
    print(f"hbar_eff = {h:.3e}  relative gap = {gap:.3e}")

###############################################################################
# A bump placed so that the pulse is over before t = 0.
bump = GaussianBump(0.001, 1.0, -9.0)
classical = larmor_shift_fourier(spectralize(acceleration_profile(bump, params, 1.0,
                                                                  "straight_line")), 1.0).real
print(f"classical Larmor shift {classical:.6e}")
for sigma in (0.1, 0.05, 0.025):
    q = quantum_position_shift(gaussian_packet(1.0, sigma), bump, params)
    print(f"sigma_p = {sigma:<6} shift = {q.shift:.6e}  gap = {abs(q.shift - classical):.3e}")

packet = gaussian_packet(1.0, 0.05)
small = quantum_position_shift(packet, GaussianBump(0.0005, 1.0, -9.0), params, "exact").shift
large = quantum_position_shift(packet, bump, params, "exact").shift
print(f"doubling the bump multiplies the shift by {large / small:.5f}")
