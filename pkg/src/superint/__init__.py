"""Numerical verification of superintegrable Hamiltonian systems.

Forward-mode automatic differentiation over phase-space fields, a catalog of
Coulomb and anisotropic-oscillator models with their integrals of motion,
torus reduction between full and reduced systems, verification campaigns,
and trajectory integration.
"""

from .catalog import MODEL_NAMES, Integral, Model, get_model
from .dynamics import (
    Trajectory,
    conservation_drift,
    integrate_adaptive,
    integrate_euler,
    integrate_verlet,
    orbit_closure,
    verlet_step,
)
from .errors import DimensionError, DomainError, ParameterError, SamplingError, StepSizeError, SuperintError
from .fields import PhaseField, PhasePoint, Weights, ZField, gradient, poisson_bracket, z_bracket
from .reduction import ReductionMap, lift, momentum_map, project, pullback_check, reduce_check
from .verifier import SampleSpec, VerificationReport, check_commutation, independence_rank, involution_table, sample_points, verify

__version__ = "0.1.0"

__all__ = [
    "MODEL_NAMES", "Integral", "Model", "get_model",
    "Trajectory", "conservation_drift", "integrate_adaptive", "integrate_euler", "integrate_verlet",
    "orbit_closure", "verlet_step",
    "DimensionError", "DomainError", "ParameterError", "SamplingError", "StepSizeError", "SuperintError",
    "PhaseField", "PhasePoint", "Weights", "ZField", "gradient", "poisson_bracket", "z_bracket",
    "ReductionMap", "lift", "momentum_map", "project", "pullback_check", "reduce_check",
    "SampleSpec", "VerificationReport", "check_commutation", "independence_rank", "involution_table",
    "sample_points", "verify",
]
