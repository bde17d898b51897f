"""Batch reference optimizer: the empirical minimizer ``theta_*`` and ``f_*``.

Excess-risk curves on real data are measured against this reference. The
square loss needs a single least-squares solve on the data span; the
logistic loss runs damped Newton iterations (iteratively reweighted least
squares) with a halving line search.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import LinearOperator, lsqr, minres

from sa_forge.core.exceptions import ContractViolationError, ConvergenceError
from sa_forge.data.dataset import Dataset
from sa_forge.losses.models import (
    LossModel,
    empirical_gradient,
    empirical_hessian,
    empirical_risk,
    second_derivatives,
)

logger = logging.getLogger(__name__)

DEFAULT_TOL_SCALE = 1e-10
DEFAULT_MAX_ITER = 100
DEFAULT_SEPARABLE_NORM_SCALE = 1e3
DEFAULT_DENSE_LIMIT = 2000
ARMIJO = 1e-4
MAX_HALVINGS = 60


@dataclass
class ReferenceSolution:
    """Empirical minimizer with its risk and convergence diagnostics.

    ``grad_norm`` is the norm of the summed gradient. ``near_separable`` is
    set when the logistic minimizer was capped at ``norm_cap``.
    """

    theta_star: np.ndarray
    f_star: float
    grad_norm: float
    iterations: int
    near_separable: bool = False
    norm_cap: Optional[float] = None


def _summed_gradient_norm(model: LossModel, dataset: Dataset, theta: np.ndarray) -> float:
    return float(np.linalg.norm(empirical_gradient(model, dataset.X, dataset.y, theta)) * dataset.n)


def _least_squares(dataset: Dataset, dense_limit: int) -> np.ndarray:
    if dataset.is_sparse and dataset.dimension > dense_limit:
        return lsqr(dataset.X, dataset.y, atol=0.0, btol=0.0, iter_lim=10 * dataset.dimension)[0]
    X = dataset.X.toarray() if dataset.is_sparse else dataset.X
    theta, *_ = scipy.linalg.lstsq(X, dataset.y)
    return theta


def _newton_direction(
    model: LossModel, dataset: Dataset, theta: np.ndarray, grad: np.ndarray, dense_limit: int
) -> np.ndarray:
    """Minimum-norm solution of ``H p = -g``; Hessian-free above ``dense_limit``."""
    if dataset.dimension <= dense_limit:
        H = empirical_hessian(model, dataset.X, dataset.y, theta)
        direction, *_ = scipy.linalg.lstsq(H, -grad)
        return direction
    X = dataset.X
    w = second_derivatives(model, dataset.y, np.asarray(X @ theta).ravel())

    def matvec(v: np.ndarray) -> np.ndarray:
        return np.asarray(X.T @ (w * np.asarray(X @ v).ravel())).ravel() / dataset.n

    op = LinearOperator((dataset.dimension, dataset.dimension), matvec=matvec, dtype=np.float64)
    direction, _ = minres(op, -grad)
    return direction


def batch_reference(
    dataset: Dataset,
    model: LossModel,
    tol: Optional[float] = None,
    max_iter: int = DEFAULT_MAX_ITER,
    norm_cap: Optional[float] = None,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> ReferenceSolution:
    """Minimize the empirical risk to summed-gradient norm ``<= tol``.

    Args:
        dataset: Nonempty dataset
        model: Loss model
        tol: Bound on the summed gradient norm (default ``1e-10 * n``)
        max_iter: Newton iteration cap (logistic loss)
        norm_cap: Cap on ``||theta_*||`` for nearly separable data (default ``1e3 / R``)
        dense_limit: Largest dimension for which the Hessian is formed explicitly

    Returns:
        ReferenceSolution with ``theta_star`` and ``f_star``

    Raises:
        ContractViolationError: If the dataset is empty
        ConvergenceError: If the gradient tolerance is not reached
    """
    if dataset.n == 0:
        raise ContractViolationError("batch reference needs a nonempty dataset")
    if tol is None:
        tol = DEFAULT_TOL_SCALE * dataset.n
    if norm_cap is None:
        R = float(np.sqrt(np.mean(dataset.row_norms() ** 2)))
        norm_cap = DEFAULT_SEPARABLE_NORM_SCALE / R if R > 0 else np.inf

    if not model.is_logistic:
        theta = _least_squares(dataset, dense_limit)
        grad_norm = _summed_gradient_norm(model, dataset, theta)
        if grad_norm > tol:
            raise ConvergenceError(1, grad_norm)
        f_star = empirical_risk(model, dataset.X, dataset.y, theta)
        logger.debug(f"Least-squares reference: f*={f_star:.6g}, |grad|={grad_norm:.3e}")
        return ReferenceSolution(theta, f_star, grad_norm, 1, norm_cap=norm_cap)

    theta = np.zeros(dataset.dimension)
    risk = empirical_risk(model, dataset.X, dataset.y, theta)
    for iteration in range(1, max_iter + 1):
        grad = empirical_gradient(model, dataset.X, dataset.y, theta)
        grad_norm = float(np.linalg.norm(grad) * dataset.n)
        if grad_norm <= tol:
            logger.debug(f"Logistic reference converged in {iteration - 1} iterations, f*={risk:.6g}")
            return ReferenceSolution(theta, risk, grad_norm, iteration - 1, norm_cap=norm_cap)

        direction = _newton_direction(model, dataset, theta, grad, dense_limit)
        slope = float(grad @ direction)
        if slope >= 0:
            direction, slope = -grad, -float(grad @ grad)
        step = 1.0
        for _ in range(MAX_HALVINGS):
            candidate = theta + step * direction
            candidate_risk = empirical_risk(model, dataset.X, dataset.y, candidate)
            if candidate_risk <= risk + ARMIJO * step * slope:
                break
            step *= 0.5
        else:
            raise ConvergenceError(iteration, grad_norm)
        theta, risk = candidate, candidate_risk

        norm = float(np.linalg.norm(theta))
        if norm > norm_cap:
            theta = theta * (norm_cap / norm)
            risk = empirical_risk(model, dataset.X, dataset.y, theta)
            grad_norm = _summed_gradient_norm(model, dataset, theta)
            logger.warning(
                f"Data looks nearly separable: |theta*| capped at {norm_cap:.3g} "
                f"(gradient norm {grad_norm:.3e})"
            )
            return ReferenceSolution(theta, risk, grad_norm, iteration, near_separable=True, norm_cap=norm_cap)

    raise ConvergenceError(max_iter, _summed_gradient_norm(model, dataset, theta))
