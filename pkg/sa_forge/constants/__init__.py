"""Problem-constant estimators and the batch reference optimizer."""

from sa_forge.constants.estimators import (
    KappaMode,
    ProblemConstants,
    RhoEstimate,
    estimate_constants,
    estimate_kappa,
    estimate_radius,
    estimate_rho,
)
from sa_forge.constants.reference import ReferenceSolution, batch_reference

__all__ = [
    "KappaMode",
    "ProblemConstants",
    "RhoEstimate",
    "estimate_constants",
    "estimate_kappa",
    "estimate_radius",
    "estimate_rho",
    "ReferenceSolution",
    "batch_reference",
]
