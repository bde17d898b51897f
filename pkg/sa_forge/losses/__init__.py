"""Loss models and self-concordance checks."""

from sa_forge.losses.checks import (
    SelfConcordanceReport,
    check_distance_inequality,
    check_self_concordance,
    prediction_grid,
)
from sa_forge.losses.models import (
    LOGISTIC,
    SQUARE,
    DerivTriple,
    LossKind,
    LossModel,
    curvature,
    empirical_gradient,
    empirical_hessian,
    empirical_risk,
    first_derivatives,
    gradient_parts,
    loss_derivatives,
    loss_value,
    loss_values,
    second_derivatives,
)

__all__ = [
    "SelfConcordanceReport",
    "check_distance_inequality",
    "check_self_concordance",
    "prediction_grid",
    "LOGISTIC",
    "SQUARE",
    "DerivTriple",
    "LossKind",
    "LossModel",
    "curvature",
    "empirical_gradient",
    "empirical_hessian",
    "empirical_risk",
    "first_derivatives",
    "gradient_parts",
    "loss_derivatives",
    "loss_value",
    "loss_values",
    "second_derivatives",
]
