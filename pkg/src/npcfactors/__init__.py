"""Normalized principal components for approximate factor models.

Estimators (population and sample), their n -> infinity limit objects, and a
Monte Carlo harness that measures convergence rates on synthetic panels.
"""
from .dgp import ModelConfig, SyntheticPanel, draw_loadings, idio_covariance, simulate_panel
from .errors import (
    ConfigurationError,
    DegeneracyError,
    DegeneracyWarning,
    NumericalError,
    ValidationError,
)
from .kernels import BACKEND
from .pca import (
    FactorEstimate,
    LimitObjects,
    estimate_from_panel,
    limit_objects,
    normalized_pcs,
    pc_loadings,
    rotation_h,
)
from .spectra import EigenSystem, fix_signs, top_r_eigs

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConfigurationError",
    "DegeneracyError",
    "DegeneracyWarning",
    "EigenSystem",
    "FactorEstimate",
    "LimitObjects",
    "ModelConfig",
    "NumericalError",
    "SyntheticPanel",
    "ValidationError",
    "draw_loadings",
    "estimate_from_panel",
    "fix_signs",
    "idio_covariance",
    "limit_objects",
    "normalized_pcs",
    "pc_loadings",
    "rotation_h",
    "simulate_panel",
    "top_r_eigs",
]
