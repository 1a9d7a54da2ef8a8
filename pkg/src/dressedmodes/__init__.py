"""Exact solver for one harmonic oscillator linearly coupled to N field modes.

The pipeline: describe a model (`ModelConfig` or a cavity preset), build its
arrowhead interaction matrix, diagonalize it once into a `NormalModeBasis`,
then evaluate everything else in closed form: evolution kernels, transition
probabilities, multi-quanta amplitudes, energy spectra, vacuum energy, and
holomorphic transformation functions.  The `oracle` module cross-validates
the whole pipeline against a direct phase-space integration that never
touches the eigensolver.
"""

from .errors import (
    DimensionMismatchError,
    DressedModesError,
    IndexOutOfRangeError,
    InvalidParameterError,
    NoConvergenceError,
    NonPositiveSpectrumError,
)
from .model import (
    CouplingMatrix,
    FrequencyConvention,
    Mode,
    ModelConfig,
    SphericalCavityPreset,
    build_config_from_preset,
    build_interaction_matrix,
    load_config,
    random_config,
)
from .spectral import NormalModeBasis, diagonalize, matrix_power, stability_margin
from .dynamics import (
    AmplitudeSample,
    EvolutionKernel,
    OccupationVector,
    PhaseConvention,
    kernel,
    multiquanta_amplitude,
    number_overlap,
    spectrum_energy,
    survival_sum,
    transformation_function_dressed,
    transformation_function_normal,
    transition_probability,
    vacuum_energy,
)
from .oracle import (
    PhaseSpacePropagator,
    accuracy_dt,
    analytic_two_mode,
    gershgorin_frequency_bound,
    integrate_propagator,
    kernel_from_propagator,
    max_stable_dt,
    symplectic_defect,
)

__version__ = "0.1.0"

__all__ = [
    "DressedModesError",
    "InvalidParameterError",
    "NonPositiveSpectrumError",
    "NoConvergenceError",
    "DimensionMismatchError",
    "IndexOutOfRangeError",
    "Mode",
    "ModelConfig",
    "FrequencyConvention",
    "SphericalCavityPreset",
    "CouplingMatrix",
    "build_config_from_preset",
    "build_interaction_matrix",
    "random_config",
    "load_config",
    "NormalModeBasis",
    "diagonalize",
    "matrix_power",
    "stability_margin",
    "EvolutionKernel",
    "OccupationVector",
    "AmplitudeSample",
    "PhaseConvention",
    "kernel",
    "transition_probability",
    "survival_sum",
    "multiquanta_amplitude",
    "spectrum_energy",
    "vacuum_energy",
    "transformation_function_normal",
    "transformation_function_dressed",
    "number_overlap",
    "PhaseSpacePropagator",
    "gershgorin_frequency_bound",
    "max_stable_dt",
    "accuracy_dt",
    "integrate_propagator",
    "symplectic_defect",
    "kernel_from_propagator",
    "analytic_two_mode",
    "__version__",
]
