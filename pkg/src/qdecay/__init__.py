"""Exact and approximate reduced dynamics of a two-level emitter.

The package solves the amplitude integro-differential equation for a qubit
coupled to a bosonic reservoir at zero temperature, extracts exact
time-convolutionless rates and Nakajima-Zwanzig memory kernels from the
solution, and compares them against perturbative, Markovian and
brute-force-oracle propagation.
"""

from .core import (
    ComplexSignal,
    MarkovParams,
    QubitState,
    RealSignal,
    TimeGrid,
    Trajectory,
    apply_map,
    choi_matrix,
    cumtrapz,
    markov_propagate,
    min_choi_eigenvalue,
    min_choi_eigenvalues,
)
from .errors import ConditioningWarning, GridMismatchError, NumericsError
from .config import ConfigError, ScenarioConfig, load_config, preset_config
from .nz import (
    MemoryKernel,
    ansatz_propagate,
    check_identity_double_integral,
    nz_kernel_exact,
    nz_kernel_lorentzian,
    nz_kernel_perturbative,
    nz_propagate,
)
from .oracle import OneExcitationState, evolve_one_excitation
from .reservoir import (
    CorrelationFunction,
    DiscreteModeCorrelation,
    LorentzianCorrelation,
    LorentzianParams,
    ModeSet,
    TabulatedCorrelation,
    born_markov_params,
    sample_lorentzian_modes,
)
from .tcl import (
    ExpansionTerms,
    TCLCoefficients,
    expand_amplitude,
    tcl_coefficients,
    tcl_propagate,
    tcl_rates_perturbative,
)
from .volterra import (
    conv_trapz,
    deconvolve_first_kind,
    propagate_scalar_volterra,
    solve_amplitude,
)

__all__ = [
    "ComplexSignal",
    "ConditioningWarning",
    "ConfigError",
    "CorrelationFunction",
    "DiscreteModeCorrelation",
    "ExpansionTerms",
    "GridMismatchError",
    "LorentzianCorrelation",
    "LorentzianParams",
    "MarkovParams",
    "MemoryKernel",
    "ModeSet",
    "NumericsError",
    "OneExcitationState",
    "QubitState",
    "RealSignal",
    "ScenarioConfig",
    "TCLCoefficients",
    "TabulatedCorrelation",
    "TimeGrid",
    "Trajectory",
    "ansatz_propagate",
    "apply_map",
    "born_markov_params",
    "check_identity_double_integral",
    "choi_matrix",
    "conv_trapz",
    "cumtrapz",
    "deconvolve_first_kind",
    "evolve_one_excitation",
    "expand_amplitude",
    "load_config",
    "markov_propagate",
    "min_choi_eigenvalue",
    "min_choi_eigenvalues",
    "nz_kernel_exact",
    "nz_kernel_lorentzian",
    "nz_kernel_perturbative",
    "nz_propagate",
    "preset_config",
    "propagate_scalar_volterra",
    "solve_amplitude",
    "tcl_coefficients",
    "tcl_propagate",
    "tcl_rates_perturbative",
]

__version__ = "0.1.0"
