"""Loss models in the prediction: value and first three derivatives.

Both losses are written as ``l(y, yhat)`` with derivatives taken with
respect to the prediction ``yhat``. The logistic loss is evaluated through
``logaddexp`` and ``expit`` so extreme margins neither overflow nor lose
precision.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.special import expit

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.core.state import Observation
from sa_forge.core.vector import Vector


class LossKind(str, Enum):
    SQUARE = "square"
    LOGISTIC = "logistic"


@dataclass(frozen=True)
class LossModel:
    """A loss identified by its kind."""

    kind: LossKind

    @classmethod
    def from_name(cls, name: str) -> "LossModel":
        try:
            return cls(LossKind(name.lower()))
        except ValueError:
            valid = [k.value for k in LossKind]
            raise ContractViolationError(f"Unknown loss '{name}', expected one of {valid}")

    @property
    def is_logistic(self) -> bool:
        return self.kind is LossKind.LOGISTIC

    def __str__(self) -> str:
        return self.kind.value


SQUARE = LossModel(LossKind.SQUARE)
LOGISTIC = LossModel(LossKind.LOGISTIC)


@dataclass(frozen=True)
class DerivTriple:
    """First, second and third derivatives of the loss at ``(y, yhat)``."""

    d1: float
    d2: float
    d3: float


def _check_label(model: LossModel, y: float) -> None:
    if model.is_logistic and y not in (-1.0, 1.0):
        raise ContractViolationError(f"Logistic label must be -1 or +1, got {y}")


def loss_value(model: LossModel, y: float, yhat: float) -> float:
    """Loss at one point.

    Raises:
        ContractViolationError: If a logistic label is not in {-1, +1}
    """
    _check_label(model, y)
    if model.is_logistic:
        return float(np.logaddexp(0.0, -y * yhat))
    return 0.5 * (yhat - y) ** 2


def loss_derivatives(model: LossModel, y: float, yhat: float) -> DerivTriple:
    """Closed-form first three derivatives in the prediction.

    Raises:
        ContractViolationError: If a logistic label is not in {-1, +1}
    """
    _check_label(model, y)
    if model.is_logistic:
        s = float(expit(-y * yhat))
        curv = s * (1.0 - s)
        return DerivTriple(d1=-y * s, d2=curv, d3=-y * curv * (1.0 - 2.0 * s))
    return DerivTriple(d1=yhat - y, d2=1.0, d3=0.0)


# Array versions used for empirical risks over whole datasets.

def _check_labels(model: LossModel, y: np.ndarray) -> None:
    if model.is_logistic and not np.all(np.abs(y) == 1.0):
        raise ContractViolationError("Logistic labels must all be -1 or +1")


def loss_values(model: LossModel, y: np.ndarray, yhat: np.ndarray) -> np.ndarray:
    _check_labels(model, y)
    if model.is_logistic:
        return np.logaddexp(0.0, -y * yhat)
    return 0.5 * (yhat - y) ** 2


def first_derivatives(model: LossModel, y: np.ndarray, yhat: np.ndarray) -> np.ndarray:
    if model.is_logistic:
        return -y * expit(-y * yhat)
    return yhat - y


def second_derivatives(model: LossModel, y: np.ndarray, yhat: np.ndarray) -> np.ndarray:
    if model.is_logistic:
        s = expit(-y * yhat)
        return s * (1.0 - s)
    return np.ones_like(np.asarray(yhat, dtype=np.float64))


def empirical_risk(model: LossModel, X, y: np.ndarray, theta: np.ndarray) -> float:
    """Average loss of ``theta`` over a design matrix (dense or CSR) and responses."""
    yhat = X @ theta
    return float(np.mean(loss_values(model, y, np.asarray(yhat).ravel())))


def empirical_gradient(model: LossModel, X, y: np.ndarray, theta: np.ndarray) -> np.ndarray:
    yhat = np.asarray(X @ theta).ravel()
    g = X.T @ first_derivatives(model, y, yhat)
    return np.asarray(g).ravel() / X.shape[0]


def empirical_hessian(model: LossModel, X, y: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Dense ``(1/n) sum l''_i x_i x_i^T``."""
    yhat = np.asarray(X @ theta).ravel()
    w = second_derivatives(model, y, yhat)
    if sparse.issparse(X):
        Xw = sparse.diags(w) @ X
        return np.asarray((X.T @ Xw).todense()) / X.shape[0]
    return (X.T * w) @ X / X.shape[0]


# Per-observation kernels shared by the recursions.

def gradient_parts(model: LossModel, obs: Observation, yhat: float) -> Tuple[float, Optional[Vector]]:
    """Per-observation gradient written as ``coef * x - offset``.

    Labelled observations give ``(l'(y, yhat), None)``. Least-squares
    observations with an explicit target term give ``(yhat, z)`` so the
    recursion reads ``<theta, x> x - z``.
    """
    if obs.y is None:
        if model.is_logistic:
            raise ContractViolationError("Logistic observations need a label y")
        return yhat, obs.z
    _check_label(model, obs.y)
    if model.is_logistic:
        return float(-obs.y * expit(-obs.y * yhat)), None
    return yhat - obs.y, None


def curvature(model: LossModel, obs: Observation, yhat: float) -> float:
    """Second derivative ``l''`` for one observation."""
    if not model.is_logistic:
        return 1.0
    s = float(expit(-obs.y * yhat))
    return s * (1.0 - s)
