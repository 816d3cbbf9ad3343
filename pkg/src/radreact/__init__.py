"""Radiation reaction of a charge crossing a one-dimensional potential.

The Lorentz-Dirac self-force is set against the Larmor energy-loss model,
and both against first-order photon emission computed with WKB modes.  Each module exposes
plain functions over small dataclasses; :mod:`radreact.runner` strings them
together from a JSON scenario.
"""

__version__ = "0.1.0"

from .errors import (ConfigError, DomainError, GridError, InfraredError, IntegrationError,
                     NumericsError, PreconditionError, QuadratureError, RadReactError,
                     RegimeError, ResolutionError, SpanError, SupportError)
from .numerics import SampledSignal, fourier_integral, integrate_ode, quad_adaptive
from .potentials import (AccelerationProfile, GaussianBump, PhysicalParams, SmoothStep,
                         Tabulated, TimeGrid, Trajectory, acceleration_profile,
                         classical_trajectory, free_particle, potential_eval,
                         potential_from_dict)
from .lorentz_dirac import (ELECTRON, BoxForce, RapiditySolution, SampledForce, StepForce,
                            ZeroForce, causal_kernel, causal_solution, runaway_integrated,
                            runaway_residual, tau0_seconds)
from .classical_shifts import (ShiftResult, average_momentum, energy_gap_residual,
                               larmor_shift_closed_form, shift_difference, shift_ode)
from .spectral import (EmissionProbability, SpectralAcceleration, emission_probability,
                       expected_photon_energy, gaussian_pulse, larmor_shift_fourier,
                       pulse_profile, spectralize, symmetric_k_grid)
from .qed_wkb import (EmissionAmplitude, QuantumShift, WavePacket, WKBMode,
                      classical_limit_gaps, emission_amplitude, gaussian_packet,
                      position_expectation_bilinear, quantum_position_shift,
                      scaling_identity_residual, validate_packet, wkb_phase_integral)
from .runner import Report, Scenario, emit_report, load_config, run_scenario

__all__ = [
    "AccelerationProfile", "BoxForce", "ConfigError", "DomainError", "ELECTRON",
    "EmissionAmplitude", "EmissionProbability", "GaussianBump", "GridError", "InfraredError",
    "IntegrationError", "NumericsError", "PhysicalParams", "PreconditionError",
    "QuadratureError", "QuantumShift", "RadReactError", "RapiditySolution", "RegimeError",
    "Report", "ResolutionError", "SampledForce", "SampledSignal", "Scenario", "ShiftResult",
    "SmoothStep", "SpanError", "SpectralAcceleration", "StepForce", "SupportError",
    "Tabulated", "TimeGrid", "Trajectory", "WKBMode", "WavePacket", "ZeroForce",
    "acceleration_profile", "average_momentum", "causal_kernel", "causal_solution",
    "classical_limit_gaps", "classical_trajectory", "emission_amplitude",
    "emission_probability", "emit_report", "energy_gap_residual", "expected_photon_energy",
    "fourier_integral", "free_particle", "gaussian_packet", "gaussian_pulse", "integrate_ode",
    "larmor_shift_closed_form", "larmor_shift_fourier", "load_config",
    "position_expectation_bilinear", "potential_eval", "potential_from_dict", "pulse_profile",
    "quad_adaptive", "quantum_position_shift", "run_scenario", "runaway_integrated",
    "runaway_residual", "scaling_identity_residual", "shift_difference", "shift_ode",
    "spectralize", "symmetric_k_grid", "tau0_seconds", "validate_packet", "wkb_phase_integral",
]
