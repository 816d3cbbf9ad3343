"""
Config-driven runs of the comparison pipeline, with persisted reports.

A scenario is a JSON document; everything not given takes the defaults in
:data:`DEFAULTS`.  :func:`run_scenario` executes the requested tasks and
records, next to the numbers, a pass/fail entry for every built-in
identity check.  :func:`emit_report` writes ``report.json`` plus one CSV per
sampled series into ``<out_dir>/<scenario_id>/``.
"""

from __future__ import annotations

import copy
import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .classical_shifts import (average_momentum, energy_gap_residual,
                               larmor_shift_closed_form, shift_difference)
from .errors import ConfigError, RadReactError, RegimeError
from .lorentz_dirac import (BoxForce, StepForce, causal_kernel, causal_solution,
                            runaway_integrated, runaway_residual, tau0_seconds, ELECTRON)
from .numerics import fourier_integral
from .potentials import (GaussianBump, PhysicalParams, SmoothStep, TimeGrid,
                         acceleration_profile, classical_trajectory, potential_from_dict,
                         _check_regime)
from .qed_wkb import (classical_limit_gaps, emission_amplitude, gaussian_packet,
                      quantum_position_shift, scaling_identity_residual)
from .spectral import (emission_probability, expected_photon_energy, larmor_shift_fourier,
                       pulse_bandwidth, spectralize, symmetric_k_grid, truncation_wavenumber)

log = logging.getLogger(__name__)

TASKS = ("pathologies", "shifts", "spectral", "quantum", "convergence_sweeps")
POTENTIAL_TASKS = TASKS[1:]

DEFAULTS = {
    "scenario_id": "scenario",
    "params": {"m": 1.0, "alpha": 0.01, "hbar_eff": 1.0},
    "potential": None,
    "p": 1.0,
    "packet": {"sigma_p": 0.05, "n": 41, "width": 7.0, "x0": 0.0,
               "mode": "straight_line", "sigma_sequence": [0.1, 0.05, 0.025]},
    "grids": {"points_per_scale": 64, "pad": 0.0, "n_linear": 400, "n_log": 96,
              "log_floor": 1e-8},
    "tolerances": {"support": 1e-12, "kinetic_factor": 0.5, "shift_rtol": 1e-12,
                   "k_min_rel": 1e-6},
    "pathologies": {"beta0": 1e-6, "span_tau0": 5.0, "n_tau": 201, "F": 1.0,
                    "box_duration_tau0": 50.0},
    "sweeps": {"hbar_start": 1e-2, "hbar_steps": 5, "photon_k_rel": 1.0,
               "amplitude_ks_rel": [0.25, 1.0, 3.0], "scaling_grid": 5},
    "tasks": list(TASKS),
}

#: Tolerances of the built-in checks, keyed by check name.
CHECK_TOLERANCES = {
    "runaway_rate": 1e-6,
    "runaway_ode": 1e-8,
    "preacceleration_value": 1e-8,
    "preacceleration_slope": 1e-6,
    "box_rapidity": 1e-8,
    "tau0_order": 10.0,
    "energy_gap": 1e-9,
    "final_velocity": 1e-8,
    "difference_formula": 1e-3,
    "route_equivalence": 5e-2,
    "parseval": 1e-8,
    "fourier_shift": 1e-7,
    "fourier_shift_imag": 1e-10,
    "infrared_law": 1e-2,
    "probability_stability": 1e-6,
    "probability_cross_check": 1e-10,
    "photon_energy_cross_check": 1e-10,
    "amplitude_reduction": 1e-6,
    "scaling_identity": 1e-6,
    "shift_imag": 1e-10,
    "second_order_scaling": 1e-3,
    "log_contraction": 0.1,
}


# --------------------------------------------------------------------------
# Configuration
# --------------------------------------------------------------------------

@dataclass
class Scenario:
    scenario_id: str
    params: PhysicalParams
    potential: object
    p: float
    packet: dict
    grids: dict
    tolerances: dict
    pathologies: dict
    sweeps: dict
    tasks: list
    raw: dict = field(repr=False)

    @property
    def time_grid(self) -> TimeGrid:
        return TimeGrid(int(self.grids["points_per_scale"]), float(self.grids["pad"]))

    def echo(self) -> dict:
        return copy.deepcopy(self.raw)


def _merge(defaults, given, path=""):
    if not isinstance(given, dict):
        raise ConfigError(f"{path or 'config'}: expected an object")
    out = copy.deepcopy(defaults)
    for key, value in given.items():
        where = f"{path}.{key}" if path else key
        if key not in defaults:
            raise ConfigError(f"unknown key {where!r}")
        if isinstance(defaults[key], dict) and key != "potential":
            out[key] = _merge(defaults[key], value, where)
        else:
            out[key] = copy.deepcopy(value)
    return out


def scenario_from_dict(data: dict, base_dir: Path | None = None) -> Scenario:
    """Resolve defaults and validate a scenario given as a dictionary."""
    resolved = _merge(DEFAULTS, data)
    tasks = resolved["tasks"]
    if isinstance(tasks, str):
        tasks = [t.strip() for t in tasks.split(",") if t.strip()]
    if not tasks:
        raise ConfigError("tasks must be non-empty")
    unknown = [t for t in tasks if t not in TASKS]
    if unknown:
        raise ConfigError(f"unknown tasks {unknown}; choose from {list(TASKS)}")
    resolved["tasks"] = [t for t in TASKS if t in tasks]

    try:
        params = PhysicalParams(**resolved["params"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"params: {exc}") from exc
    for section in ("tolerances", "grids"):
        for key, value in resolved[section].items():
            if not isinstance(value, (int, float)) or value < 0 or (
                    section == "tolerances" and value == 0):
                raise ConfigError(f"{section}.{key} must be positive (got {value!r})")

    p = resolved["p"]
    if not isinstance(p, (int, float)) or not p > 0:
        raise ConfigError("p must be a positive number")

    potential = None
    needs_potential = any(t in POTENTIAL_TASKS for t in resolved["tasks"])
    if resolved["potential"] is not None:
        pot = dict(resolved["potential"])
        if pot.get("family") == "tabulated" and "path" in pot and base_dir is not None:
            path = Path(pot["path"])
            if not path.is_absolute():
                pot["path"] = str((base_dir / path).resolve())
                resolved["potential"]["path"] = pot["path"]
        try:
            potential = potential_from_dict(pot)
        except (KeyError, TypeError, ValueError, OSError) as exc:
            raise ConfigError(f"potential: {exc}") from exc
    elif needs_potential:
        raise ConfigError("potential is required by tasks "
                          f"{[t for t in resolved['tasks'] if t in POTENTIAL_TASKS]}")

    if potential is not None and needs_potential:
        try:
            _check_regime(potential, params, p, resolved["tolerances"]["kinetic_factor"],
                          resolved["tolerances"]["support"])
        except RegimeError as exc:
            raise ConfigError(f"kinetic dominance check failed for p={p}: {exc}") from exc

    return Scenario(str(resolved["scenario_id"]), params, potential, float(p),
                    resolved["packet"], resolved["grids"], resolved["tolerances"],
                    resolved["pathologies"], resolved["sweeps"], resolved["tasks"], resolved)


def load_config(path) -> Scenario:
    """Read a JSON scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(data, path.parent)


# --------------------------------------------------------------------------
# Report
# --------------------------------------------------------------------------

@dataclass
class Report:
    scenario: dict
    results: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def check(self, name, value, passed, tolerance=None, **extra):
        entry = {"value": value, "passed": bool(passed)}
        if tolerance is None:
            tolerance = CHECK_TOLERANCES.get(name)
        if tolerance is not None:
            entry["tolerance"] = tolerance
        entry.update(extra)
        self.checks[name] = entry

    def add_series(self, name, columns, *arrays):
        self.series[name] = (list(columns), np.column_stack([np.asarray(a, float) for a in arrays]))

    @property
    def failed_tasks(self):
        return [t for t, r in self.results.items() if isinstance(r, dict) and "error" in r]

    @property
    def all_passed(self) -> bool:
        return not self.failed_tasks and all(c["passed"] for c in self.checks.values())

    def to_dict(self, include_timing=False) -> dict:
        out = {
            "scenario": self.scenario,
            "results": self.results,
            "checks": self.checks,
            "provenance": dict(self.provenance),
            "all_passed": self.all_passed,
        }
        if include_timing:
            out["provenance"]["wall_time_s"] = self.wall_time
        return _jsonable(out)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else str(value)
    if isinstance(obj, complex):
        return {"re": _jsonable(obj.real), "im": _jsonable(obj.imag)}
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _rel(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a - b)


# --------------------------------------------------------------------------
# Tasks
# --------------------------------------------------------------------------

def _task_pathologies(s: Scenario, report: Report):
    cfg = s.pathologies
    params = s.params
    tau0 = params.tau0
    span = cfg["span_tau0"] * tau0
    tau = np.linspace(0.0, span, int(cfg["n_tau"]))
    analytic, residual = runaway_residual(cfg["beta0"], params, tau)
    integrated = runaway_integrated(cfg["beta0"], params, tau)
    rate = integrated.growth_rate()
    ode_gap = float(np.max(np.abs(integrated.beta - analytic.beta)) / np.max(np.abs(analytic.beta)))

    F = cfg["F"]
    pre = causal_kernel(StepForce(F), params, -3 * tau0)
    fit_tau = np.linspace(-5 * tau0, -tau0, 41)
    slope = float(np.polyfit(fit_tau, np.log([causal_kernel(StepForce(F), params, x) / F
                                              for x in fit_tau]), 1)[0])
    T = cfg["box_duration_tau0"] * tau0
    box_grid = np.linspace(-25 * tau0, T + 5 * tau0, 161)
    box = causal_solution(BoxForce(F, T), params, box_grid)
    step_grid = np.linspace(-8 * tau0, 4 * tau0, 121)
    step = causal_solution(StepForce(F), params, step_grid)
    tau0_s = tau0_seconds(ELECTRON)

    report.results["pathologies"] = {
        "tau0": tau0,
        "runaway": {"growth_rate": rate, "expected_rate": 1 / tau0,
                    "rate_rel_error": _rel(rate, 1 / tau0), "analytic_residual": residual,
                    "ode_vs_analytic": ode_gap,
                    "ratio_at_5tau0": float(analytic.beta[-1] / analytic.beta[0])
                    if cfg["beta0"] else 0.0},
        "preacceleration": {"m_beta_prime_at_minus_3tau0": pre, "expected": F * math.exp(-3),
                            "value_rel_error": _rel(pre, F * math.exp(-3)),
                            "log_slope": slope, "slope_rel_error": _rel(slope, 1 / tau0),
                            "witness_at_minus_tau0": causal_kernel(StepForce(F), params, -tau0)},
        "box": {"delta_beta": float(box.beta[-1]), "expected": F * T / params.m,
                "rel_error": _rel(box.beta[-1], F * T / params.m)},
        "electron_tau0_seconds": tau0_s,
    }
    report.check("runaway_rate", _rel(rate, 1 / tau0), _rel(rate, 1 / tau0) <= 1e-6)
    report.check("runaway_ode", ode_gap, ode_gap <= 1e-8)
    report.check("preacceleration_value", _rel(pre, F * math.exp(-3)),
                 _rel(pre, F * math.exp(-3)) <= 1e-8)
    report.check("preacceleration_slope", _rel(slope, 1 / tau0), _rel(slope, 1 / tau0) <= 1e-6)
    report.check("box_rapidity", _rel(box.beta[-1], F * T / params.m),
                 _rel(box.beta[-1], F * T / params.m) <= 1e-8)
    ratio = tau0_s / 1e-24
    report.check("tau0_order", tau0_s, 0.1 <= ratio <= 10.0)
    report.add_series("rapidity_runaway", ["tau", "beta_analytic", "beta_ode"],
                      tau, analytic.beta, integrated.beta)
    report.add_series("rapidity_causal_step", ["tau", "beta", "beta_prime"],
                      step.tau, step.beta, step.beta_prime)
    report.add_series("rapidity_causal_box", ["tau", "beta", "beta_prime"],
                      box.tau, box.beta, box.beta_prime)


def _pulse_before_zero(accel):
    sig = accel.signal
    late = np.abs(sig.values[sig.t > 0])
    return sig.peak == 0 or not late.size or np.max(late) <= sig.support_tol * sig.peak


def _task_shifts(s: Scenario, report: Report):
    params, potential = s.params, s.potential
    traj = classical_trajectory(potential, params, s.p, s.time_grid, s.tolerances["kinetic_factor"],
                                s.tolerances["support"])
    diff = shift_difference(traj, params, s.tolerances["shift_rtol"])
    ld, lar = diff["ld"], diff["larmor"]
    gap = energy_gap_residual(ld, lar, traj, params)
    vscale = s.p / params.m
    out = {
        "v_init": traj.v_init, "v_fin": traj.v_fin, "p_bar": ld.p_bar,
        "ode_diff": diff["ode_diff"], "log_formula": diff["log_formula"],
        "lowest_order": diff["lowest_order"],
        "final_velocity_gap": diff["final_velocity_gap"],
        "ld": {"delta_z_at_0": ld.delta_z_at_0, "delta_z_final": ld.delta_z_final,
               "delta_v_final": ld.delta_v_final},
        "larmor": {"delta_z_at_0": lar.delta_z_at_0, "delta_z_final": lar.delta_z_final,
                   "delta_v_final": lar.delta_v_final},
        "energy_gap_residual": gap,
    }
    report.check("energy_gap", gap, gap <= 1e-9)
    fv = abs(diff["final_velocity_gap"]) / vscale
    report.check("final_velocity", fv, fv <= 1e-8)
    if diff["log_formula"] != 0:
        err = _rel(diff["ode_diff"], diff["log_formula"])
        report.check("difference_formula", err, err <= 1e-3)
    else:
        bound = 1e-8 * abs(diff["larmor_final"])
        report.check("difference_formula", abs(diff["ode_diff"]),
                     abs(diff["ode_diff"]) <= bound, tolerance=bound)

    accel = acceleration_profile(potential, params, s.p, "exact", s.time_grid,
                                 s.tolerances["kinetic_factor"], s.tolerances["support"])
    if _pulse_before_zero(accel):
        closed = larmor_shift_closed_form(accel, ld.p_bar, params)
        out["larmor_closed_form_at_0"] = closed
        if closed != 0:
            rel = _rel(lar.delta_z_at_0, closed)
            out["route_rel_gap"] = rel
            report.check("route_equivalence", rel, rel <= CHECK_TOLERANCES["route_equivalence"])
    report.results["shifts"] = out
    report.provenance.setdefault("grid_sizes", {})["trajectory"] = int(len(traj.t))
    report.add_series("trajectory", ["t", "z", "v", "a"], traj.t, traj.z, traj.v, traj.a)
    report.add_series("shift_ld", ["t", "delta_z", "delta_v"], ld.t, ld.delta_z, ld.delta_v)
    report.add_series("shift_larmor", ["t", "delta_z", "delta_v"], lar.t, lar.delta_z,
                      lar.delta_v)


def _k_grid(s: Scenario, accel):
    g = s.grids
    return symmetric_k_grid(truncation_wavenumber(accel), pulse_bandwidth(accel),
                            int(g["n_linear"]), int(g["n_log"]), g["log_floor"])


def _task_spectral(s: Scenario, report: Report):
    params, potential = s.params, s.potential
    accel = acceleration_profile(potential, params, s.p, "exact", s.time_grid,
                                 s.tolerances["kinetic_factor"], s.tolerances["support"])
    sp = spectralize(accel, _k_grid(s, accel))
    band = pulse_bandwidth(accel)
    energy = expected_photon_energy(accel, sp, params)
    parseval = _rel(energy["freq_domain"], energy["time_domain"]) if energy["time_domain"] else \
        abs(energy["freq_domain"])
    report.check("parseval", parseval, parseval <= 1e-8)

    k_min = s.tolerances["k_min_rel"] * band
    prob = emission_probability(sp, params, k_min)
    out = {
        "a_hat_zero": prob.a_hat_zero, "velocity_change": accel.velocity_change,
        "bandwidth": band, "k_max": float(sp.k[-1]), "k_min": k_min,
        "emission_probability": prob.prob, "ir_divergent": prob.ir_divergent,
        "photon_energy": energy, "conjugate_symmetry_error": sp.conjugate_symmetry_error(),
    }
    if prob.ir_divergent:
        p1 = emission_probability(sp, params, k_min).prob
        p10 = emission_probability(sp, params, 10 * k_min).prob
        law = 4 * params.alpha / 3 * abs(prob.a_hat_zero) ** 2 / (2 * math.pi) * math.log(10)
        err = _rel(p1 - p10, law)
        out["infrared"] = {"prob_kmin": p1, "prob_10kmin": p10, "log_law": law, "rel_error": err}
        report.check("infrared_law", err, err <= 1e-2)
    else:
        a = emission_probability(sp, params, 1e-6 * band).prob
        b = emission_probability(sp, params, 1e-8 * band).prob
        stab = _rel(a, b) if b else abs(a - b)
        out["probability_stability"] = stab
        report.check("probability_stability", stab, stab <= 1e-6)

    if _pulse_before_zero(accel):
        p_bar = average_momentum(accel.trajectory, s.tolerances["support"])
        fourier = larmor_shift_fourier(sp, p_bar, params)
        closed = larmor_shift_closed_form(accel, p_bar, params)
        out["larmor_shift_fourier"] = fourier
        out["larmor_shift_closed_form"] = closed
        if closed != 0:
            err = _rel(fourier.real, closed)
            imag = abs(fourier.imag) / abs(fourier.real)
            report.check("fourier_shift", err, err <= 1e-7)
            report.check("fourier_shift_imag", imag, imag <= 1e-10)
    report.results["spectral"] = out
    report.provenance.setdefault("grid_sizes", {}).update(
        {"acceleration": int(len(accel.signal.t)), "k_grid": int(len(sp.k))})
    report.add_series("acceleration", ["t", "a"], accel.signal.t, accel.signal.values)
    report.add_series("spectrum", ["k", "re_a_hat", "im_a_hat", "re_da_hat_dk", "im_da_hat_dk"],
                      sp.k, sp.a_hat.real, sp.a_hat.imag, sp.da_hat_dk.real, sp.da_hat_dk.imag)


def _task_quantum(s: Scenario, report: Report):
    params, potential = s.params, s.potential
    cfg = s.packet
    mode = cfg["mode"]
    packet = gaussian_packet(s.p, cfg["sigma_p"] * s.p, int(cfg["n"]), cfg["width"], cfg["x0"])
    accel = acceleration_profile(potential, params, s.p, mode, s.time_grid,
                                 s.tolerances["kinetic_factor"], s.tolerances["support"])
    band = pulse_bandwidth(accel)
    sp = spectralize(accel, _k_grid(s, accel))
    k_min = s.tolerances["k_min_rel"] * band
    q = quantum_position_shift(packet, potential, params, mode, k_min, s.time_grid)
    out = {"mode": mode, "sigma_p": packet.sigma_p, "shift": q.shift, "imag": q.imag,
           "emission_prob_term": q.emission_prob_term, "ir_divergent": q.ir_divergent,
           "photon_energy": q.photon_energy}
    imag = abs(q.imag) / abs(q.shift) if q.shift else abs(q.imag)
    report.check("shift_imag", imag, abs(q.imag) <= 1e-10 * abs(q.shift) + 1e-14)

    direct = emission_probability(spectralize(accel), params, k_min).prob
    if math.isfinite(q.emission_prob_term):
        err = _rel(q.emission_prob_term, direct) if direct else abs(q.emission_prob_term)
        report.check("probability_cross_check", err, err <= 1e-10)
    energy = expected_photon_energy(accel, spectralize(accel), params)["freq_domain"]
    err = _rel(q.photon_energy, energy) if energy else abs(q.photon_energy)
    report.check("photon_energy_cross_check", err, err <= 1e-10)

    if _pulse_before_zero(accel):
        classical = larmor_shift_fourier(sp, s.p, params).real
        out["classical_shift"] = classical
        out["rel_gap_to_classical"] = _rel(q.shift, classical) if classical else abs(q.shift)

    exact = acceleration_profile(potential, params, s.p, "exact", s.time_grid,
                                 s.tolerances["kinetic_factor"], s.tolerances["support"])
    amps = []
    worst = 0.0
    for kr in s.sweeps["amplitude_ks_rel"]:
        k = kr * band
        I = emission_amplitude(potential, params, s.p, k, 0.0, "reduced").I
        ref = 1j / k * fourier_integral(exact.signal, k)[0]
        err = abs(I - ref) / abs(ref) if ref else abs(I)
        worst = max(worst, err)
        amps.append({"k": k, "I": I, "i_over_k_a_hat": ref, "rel_error": err})
    out["amplitudes"] = amps
    report.check("amplitude_reduction", worst, worst <= 1e-6)

    n = int(s.sweeps["scaling_grid"])
    residuals = []
    for p in s.p * np.linspace(0.8, 1.2, n):
        for kr in np.linspace(0.2, 2.0, n):
            residuals.append(scaling_identity_residual(potential, params, p, kr * band,
                                                       "straight_line", grid=s.time_grid))
    out["scaling_identity_max_residual"] = max(residuals)
    report.check("scaling_identity", max(residuals), max(residuals) <= 1e-6)
    report.results["quantum"] = out


def _task_sweeps(s: Scenario, report: Report):
    params, potential = s.params, s.potential
    cfg = s.sweeps
    out = {}
    accel = acceleration_profile(potential, params, s.p, "exact", s.time_grid)
    band = pulse_bandwidth(accel)
    k = cfg["photon_k_rel"] * band
    h0 = cfg["hbar_start"] * s.p**2 / (2 * params.m * k)
    hbars = [h0 / 2**i for i in range(int(cfg["hbar_steps"]))]
    if accel.signal.peak > 0:
        gaps = classical_limit_gaps(potential, params, s.p, k, hbars)
        monotone = bool(np.all(np.diff(gaps) < 0))
        out["hbar_sweep"] = {"k": k, "hbar_eff": hbars, "rel_gap": gaps.tolist(),
                             "monotone": monotone}
        report.check("hbar_monotone", gaps.tolist(), monotone)
        report.add_series("hbar_sweep", ["hbar_eff", "rel_gap"], hbars, gaps)

    mode = s.packet["mode"]
    sp = spectralize(acceleration_profile(potential, params, s.p, mode, s.time_grid))
    if _pulse_before_zero(sp.source) and sp.peak > 0:
        classical = larmor_shift_fourier(sp, s.p, params).real
        rows = []
        for frac in s.packet["sigma_sequence"]:
            pk = gaussian_packet(s.p, frac * s.p, int(s.packet["n"]), s.packet["width"])
            q = quantum_position_shift(pk, potential, params, mode, grid=s.time_grid)
            rows.append((frac * s.p, q.shift, abs(q.shift - classical)))
        gaps = [r[2] for r in rows]
        monotone = bool(np.all(np.diff(gaps) < 0))
        out["sigma_sweep"] = {"classical": classical, "sigma_p": [r[0] for r in rows],
                              "shift": [r[1] for r in rows], "abs_gap": gaps,
                              "monotone": monotone}
        report.check("packet_convergence", gaps, monotone)
        report.add_series("sigma_sweep", ["sigma_p", "shift", "abs_gap"],
                          *zip(*rows))

    if isinstance(potential, (SmoothStep, GaussianBump)) and potential.V0 != 0:
        half = type(potential)(potential.V0 / 2, *[getattr(potential, f) for f in
                                         (("L", "z0") if isinstance(potential, SmoothStep)
                                          else ("w", "z0"))])
        if isinstance(potential, SmoothStep):
            diffs = []
            for pot in (potential, half):
                tr = classical_trajectory(pot, params, s.p, s.time_grid)
                c = 2 * params.alpha / (3 * params.m)
                diffs.append(abs(c * tr.v_fin * math.log(tr.v_fin / tr.v_init)
                                 - c * (tr.v_fin - tr.v_init)))
            ratio = diffs[0] / diffs[1]
            out["log_contraction"] = {"ratio": ratio}
            report.check("log_contraction", ratio, abs(ratio - 4) <= 0.4)
        if _pulse_before_zero(sp.source):
            pk = gaussian_packet(s.p, s.packet["sigma_p"] * s.p, int(s.packet["n"]),
                                 s.packet["width"])
            shifts = [quantum_position_shift(pk, pot, params, mode, grid=s.time_grid,
                                             validate=False).shift for pot in (half, potential)]
            ratio = shifts[1] / shifts[0]
            out["second_order_scaling"] = {"ratio": ratio, "shifts": shifts}
            report.check("second_order_scaling", abs(ratio / 4 - 1), abs(ratio / 4 - 1) <= 1e-3)
    report.results["convergence_sweeps"] = out


_RUNNERS = {
    "pathologies": _task_pathologies,
    "shifts": _task_shifts,
    "spectral": _task_spectral,
    "quantum": _task_quantum,
    "convergence_sweeps": _task_sweeps,
}


def run_scenario(s: Scenario, tasks=None) -> Report:
    """Execute the scenario's tasks; an error aborts only its own task."""
    start = time.perf_counter()
    report = Report(scenario=s.echo())
    report.provenance = {
        "package_version": __version__,
        "tolerances": dict(s.tolerances),
        "check_tolerances": dict(CHECK_TOLERANCES),
        "grids": dict(s.grids),
        "grid_sizes": {},
    }
    for task in tasks or s.tasks:
        log.info("running task %s", task)
        try:
            _RUNNERS[task](s, report)
        except RadReactError as exc:
            log.warning("task %s failed: %s", task, exc)
            report.results[task] = {"error": f"{type(exc).__name__}: {exc}"}
    report.wall_time = time.perf_counter() - start
    return report


def _csv_line(values):
    return ",".join(f"{v:.17g}" for v in values)


def emit_report(report: Report, out_dir, formats=("json", "csv"), include_timing=False):
    """Write ``report.json`` and per-series CSV files under ``out_dir/<scenario_id>/``.

    Returns the list of paths written.  Output is byte-identical for
    identical scenarios unless ``include_timing`` is set.
    """
    sid = report.scenario.get("scenario_id", "scenario")
    target = Path(out_dir) / sid
    written = []
    try:
        target.mkdir(parents=True, exist_ok=True)
        if "json" in formats:
            path = target / "report.json"
            path.write_text(json.dumps(report.to_dict(include_timing), indent=2,
                                       sort_keys=True) + "\n")
            written.append(path)
        if "csv" in formats:
            for name in sorted(report.series):
                columns, data = report.series[name]
                path = target / f"{name}.csv"
                lines = [f"# {name}, {sid}, " + ", ".join(columns)]
                lines.extend(_csv_line(row) for row in data)
                path.write_text("\n".join(lines) + "\n")
                written.append(path)
    except OSError as exc:
        raise OSError(f"cannot write report under {target}: {exc}") from exc
    return written
