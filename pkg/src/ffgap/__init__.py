"""Finite-size criteria for spectral gaps of frustration-free lattice models."""

from .criteria import LatticeKind, closed_form_bound, threshold
from .profiles import CoefficientProfile, validate_profile
from .scalars import QuadraticScalar, qf_make, qf_to_float

__version__ = "0.1.0"

__all__ = [
    "CoefficientProfile",
    "LatticeKind",
    "QuadraticScalar",
    "closed_form_bound",
    "qf_make",
    "qf_to_float",
    "threshold",
    "validate_profile",
]
