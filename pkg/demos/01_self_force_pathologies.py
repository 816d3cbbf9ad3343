"""
Runaways and preacceleration of the self-force equation
=======================================================

In rapidity form the one-dimensional equation is second order in time, and
without a force it still admits solutions that blow up on the time scale
tau0 = 2 alpha / 3 m.  Removing them by integrating against the future
makes the particle respond before a force is switched on.
"""

import math

import numpy as np

from radreact import ELECTRON, PhysicalParams, StepForce, causal_kernel, runaway_integrated
from radreact.lorentz_dirac import BoxForce, causal_solution, tau0_seconds

params = PhysicalParams(m=1.0, alpha=0.01)
tau0 = params.tau0
print(f"tau0 = {tau0:.6g} (natural units)")

###############################################################################
# A force-free runaway, integrated forward from a tiny initial rapidity.
tau = np.linspace(0.0, 5 * tau0, 101)
runaway = runaway_integrated(1e-6, params, tau)
print(f"beta(5 tau0) / beta(0) = {runaway.beta[-1] / runaway.beta[0]:.6f}"
      f"  (e^5 = {math.e**5:.6f})")
print(f"fitted growth rate * tau0 = {runaway.growth_rate() * tau0:.10f}")

###############################################################################
# The causal solution for a force that starts at tau = 0 already accelerates
# at negative times, with a profile exp(tau / tau0).
for x in (-5, -3, -1, 0, 2):
    value = causal_kernel(StepForce(1.0), params, x * tau0)
    print(f"  tau = {x:+d} tau0   m beta' = {value:.6f}")

###############################################################################
# A long box force still transfers exactly F T of rapidity.
T = 50 * tau0
box = causal_solution(BoxForce(1.0, T), params, np.linspace(-25 * tau0, T + 5 * tau0, 161))
print(f"box: delta beta = {box.beta[-1]:.12f}, F T / m = {T:.12f}")

###############################################################################
# For an electron the time scale is tiny.
print(f"electron tau0 = {tau0_seconds(ELECTRON):.4e} s")
