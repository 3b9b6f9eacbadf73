"""Quantum Fisher information limits for the transverse-field Ising chain."""

from .asymptotics import asymptotic_check, f_ghz, g_optimal, kink_detect
from .exact_oracle import MatrixModel, ModelKind, integrated_generator, make_state, variance_of
from .fermion_core import (
    DomainError,
    ModelParams,
    Target,
    UnsupportedModeError,
    VarianceResult,
    generator_block,
    generator_spectrum,
    ghz_variance_b,
    max_variance,
    mode_params,
    staggered_variance_j,
)
from .kernels import BACKEND
from .product_opt import fit_power_law, optimize, product_variance

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DomainError",
    "MatrixModel",
    "ModelKind",
    "ModelParams",
    "Target",
    "UnsupportedModeError",
    "VarianceResult",
    "asymptotic_check",
    "f_ghz",
    "fit_power_law",
    "g_optimal",
    "generator_block",
    "generator_spectrum",
    "ghz_variance_b",
    "integrated_generator",
    "kink_detect",
    "make_state",
    "max_variance",
    "mode_params",
    "optimize",
    "product_variance",
    "staggered_variance_j",
    "variance_of",
]
