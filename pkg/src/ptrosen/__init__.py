"""Localized modes of the nonlinear Schroedinger equation in a complex
PT-symmetric Rosen-Morse well: exact constructions, residual checks, power
and power flow, linear-stability spectra and split-step propagation."""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DecayError,
    GrowthWindowError,
    NumericalError,
    PtRosenError,
    ValidationError,
)
from .grid import Grid1D, Grid2D, make_grid, make_grid_2d, wavenumbers
from .linstab import analyze_mode, build_operators, eig_dense, max_growth_rate, stability_spectrum
from .modes import (
    LinearSpectrum,
    LocalizedMode,
    defocusing_mode_1d,
    evaluate_mode,
    focusing_mode_1d,
    linear_spectrum,
    mode_2d,
    residual_norm,
)
from .observables import power, poynting_1d, poynting_2d
from .potential import PotentialParams, check_pt_symmetry, rosen_morse_1d, rosen_morse_2d
from .propagate import PropagationConfig, Trajectory, growth_rate_fit, phase_rotation_check, split_step
from .sweep import SweepManifest, SweepSpec, run_sweep, verify_manifest
