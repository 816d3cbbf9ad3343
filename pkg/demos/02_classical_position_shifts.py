"""
Lorentz-Dirac versus Larmor along the same orbit
================================================

A charge crosses a smooth potential step.  Both radiation models are
evaluated to first order in alpha on the radiation-free orbit.  They end
with the same velocity but at different positions, and the difference is
compared with its closed form.
"""

from radreact import PhysicalParams, SmoothStep, classical_trajectory, shift_difference
from radreact.classical_shifts import energy_gap_residual

params = PhysicalParams(m=1.0, alpha=0.01)
step = SmoothStep(V0=0.01, L=1.0)
traj = classical_trajectory(step, params, p=1.0)
print(f"v_init = {traj.v_init:.10f}, v_fin = {traj.v_fin:.10f}")

diff = shift_difference(traj, params)
print(f"final velocity gap      {diff['final_velocity_gap']:.3e}")
print(f"position gap (ODE)      {diff['ode_diff']:.12e}")
print(f"(2a/3m) v_f ln(v_f/v_i) {diff['log_formula']:.12e}")
print(f"(2a/3m) (v_f - v_i)     {diff['lowest_order']:.12e}")
print(f"energy-gap residual     {energy_gap_residual(diff['ld'], diff['larmor'], traj):.2e}")

###############################################################################
# The log formula and its linearisation differ at second order in the step
# height: halving V0 shrinks their difference about fourfold.
previous = None
for V0 in (0.02, 0.01, 0.005):
    d = shift_difference(classical_trajectory(SmoothStep(V0), params, 1.0), params)
    gap = abs(d["log_formula"] - d["lowest_order"])
    note = "" if previous is None else f"   ratio {previous / gap:.3f}"
    print(f"V0 = {V0:<6} |log - lowest| = {gap:.4e}{note}")
    previous = gap
