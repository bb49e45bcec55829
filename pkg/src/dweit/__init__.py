"""Weak-probe susceptibility of a three-level Lambda medium in a
tunnel-coupled double-well condensate.

Interwell tunneling splits the probed ground state into delocalized dressed
doublets and opens two ultranarrow absorption resonances inside the usual
EIT transparency window, located at +/- g_b_eff/2 with linewidth
2 (g_c/omega_ac)^2 gamma_ab.  This package evaluates the steady-state
first-order coherences (closed form, direct linear solve, and explicit time
integration as mutually checking routes), converts them to susceptibility,
absorption, refractive index, dispersion and group velocity, and ships a
CLI for reproducible spectrum scans.
"""

from .dressed import AccEigensystem, DressedFrame, acc_eigensystem, frame_for, mixing, rotation_matrix
from .model import SystemParams, params_from_config, params_to_config, validate_params
from .optics import (
    PeakReport,
    SpectrumPoint,
    SpectrumScan,
    dispersion_slope,
    find_peaks,
    group_velocity_ratio,
    narrow_linewidth,
    refractive_index,
    scan_spectrum,
    susceptibility,
)
from .oracle import IntegrationReport, integrate_to_steady, residual
from .steady import (
    Branch,
    LinearSystem,
    SteadyCoherences,
    build_linear_system,
    closed_form_coherence,
    degenerate_coherence,
    population_aa,
    solve_steady,
    standard_eit_coherence,
    steady_coherences,
)

__all__ = [
    "AccEigensystem",
    "Branch",
    "DressedFrame",
    "IntegrationReport",
    "LinearSystem",
    "PeakReport",
    "SpectrumPoint",
    "SpectrumScan",
    "SteadyCoherences",
    "SystemParams",
    "acc_eigensystem",
    "build_linear_system",
    "closed_form_coherence",
    "degenerate_coherence",
    "dispersion_slope",
    "find_peaks",
    "frame_for",
    "group_velocity_ratio",
    "integrate_to_steady",
    "mixing",
    "narrow_linewidth",
    "params_from_config",
    "params_to_config",
    "population_aa",
    "refractive_index",
    "residual",
    "rotation_matrix",
    "scan_spectrum",
    "solve_steady",
    "standard_eit_coherence",
    "steady_coherences",
    "susceptibility",
    "validate_params",
]

__version__ = "0.1.0"
