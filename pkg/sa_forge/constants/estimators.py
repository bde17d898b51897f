"""Estimators for the problem constants that set step sizes and bounds.

- ``R^2``: average squared covariate norm, an estimate of ``tr H``.
- ``kappa``: largest normalized fourth moment ``E<z,x>^4 / <z,Hz>^2`` over
  directions ``z``; 3 for Gaussian covariates, always at least 1.
- ``rho``: smallest ``rho`` with ``E[x x^T] <= rho H(theta_*)``; at least 4 for
  logistic regression.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import scipy.linalg
from scipy import sparse

from sa_forge.constants.reference import batch_reference
from sa_forge.core.exceptions import ContractViolationError
from sa_forge.data.dataset import Dataset
from sa_forge.data.rng import StreamRole, make_rng
from sa_forge.losses.models import LossModel, second_derivatives

logger = logging.getLogger(__name__)

KAPPA_RESTARTS = 20
KAPPA_ITERATIONS = 200
KAPPA_TOL = 1e-8
RHO_DENSE_LIMIT = 2000
SPAN_RTOL = 1e-10


class KappaMode(str, Enum):
    FASTICA = "fastica"
    AXES = "axes"


@dataclass(frozen=True)
class RhoEstimate:
    """``rho`` and whether it is the loose ``1 / min l''`` bound."""

    value: float
    loose: bool = False


@dataclass
class ProblemConstants:
    """Estimated constants of a dataset under a loss.

    ``kappa_weighted`` is the ``l''``-weighted kurtosis at ``theta_*``
    (logistic only). ``rho`` is 1 for the square loss.
    """

    R2: float
    kappa: float
    rho: float
    theta_star: np.ndarray
    f_star: float
    kappa_mode: KappaMode = KappaMode.FASTICA
    kappa_weighted: Optional[float] = None
    rho_loose: bool = False
    near_separable: bool = False

    def __post_init__(self) -> None:
        if self.R2 <= 0:
            raise ContractViolationError(f"R2 must be positive, got {self.R2}")
        if self.kappa < 1.0:
            raise ContractViolationError(f"kappa must be >= 1, got {self.kappa}")

    @property
    def R(self) -> float:
        return float(np.sqrt(self.R2))


def _dense(X) -> np.ndarray:
    return X.toarray() if sparse.issparse(X) else np.asarray(X, dtype=np.float64)


def _weighted_design(dataset: Dataset, weights: Optional[np.ndarray]):
    if weights is None:
        return dataset.X
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (dataset.n,) or np.any(weights < 0):
        raise ContractViolationError("weights must be nonnegative, one per observation")
    root = np.sqrt(weights)
    if dataset.is_sparse:
        return sparse.diags(root) @ dataset.X
    return dataset.X * root[:, None]


def estimate_radius(dataset: Dataset) -> float:
    """``(1/n) sum ||x_i||^2``.

    Raises:
        ContractViolationError: If the dataset is empty
    """
    if dataset.n == 0:
        raise ContractViolationError("cannot estimate R^2 of an empty dataset")
    return float(np.mean(dataset.row_norms() ** 2))


def _kappa_axes(X) -> float:
    if sparse.issparse(X):
        X2 = X.multiply(X)
        m2 = np.asarray(X2.mean(axis=0)).ravel()
        m4 = np.asarray(X2.multiply(X2).mean(axis=0)).ravel()
    else:
        X2 = X * X
        m2 = X2.mean(axis=0)
        m4 = (X2 * X2).mean(axis=0)
    active = m2 > 0
    if not np.any(active):
        raise ContractViolationError("every coordinate has zero empirical variance")
    return float(np.max(m4[active] / m2[active] ** 2))


def _kappa_fastica(X, restarts: int, iterations: int, tol: float, rng: np.random.Generator) -> float:
    """Maximize ``E<u, w>^4`` over unit ``u`` for whitened rows ``w``.

    The update ``u <- E[<u, w>^3 w]`` followed by normalization is a
    full-step projected gradient ascent on a convex function of ``u``, so the
    fourth moment never decreases between iterations. It omits the ``-3u``
    term of the kurtosis FastICA update, which would also stop at minima
    such as sub-Gaussian directions.
    """
    X = _dense(X)
    n, d = X.shape
    eigenvalues, basis = scipy.linalg.eigh(X.T @ X / n)
    if eigenvalues[0] <= SPAN_RTOL * max(eigenvalues[-1], 0.0):
        raise ContractViolationError(
            "empirical covariance is degenerate; use axes mode for kappa"
        )
    W = X @ (basis / np.sqrt(eigenvalues))

    best = 1.0
    for restart in range(restarts):
        u = rng.standard_normal(d)
        u /= np.linalg.norm(u)
        for iteration in range(iterations):
            proj = W @ u
            u_new = W.T @ proj ** 3 / n
            u_new /= np.linalg.norm(u_new)
            change = 1.0 - abs(float(u_new @ u))
            u = u_new
            if change < tol:
                break
        value = float(np.mean((W @ u) ** 4))
        logger.debug(f"kappa restart {restart}: {value:.6g} after {iteration + 1} iterations")
        best = max(best, value)
    return best


def estimate_kappa(
    dataset: Dataset,
    mode: KappaMode = KappaMode.FASTICA,
    weights: Optional[np.ndarray] = None,
    restarts: int = KAPPA_RESTARTS,
    iterations: int = KAPPA_ITERATIONS,
    tol: float = KAPPA_TOL,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Estimate the kurtosis constant ``kappa``.

    ``fastica`` maximizes over all directions with random restarts; ``axes``
    only looks at coordinate directions and skips zero-variance coordinates.
    With ``weights`` the estimator runs on ``sqrt(w_i) x_i``, which gives the
    ``l''``-weighted constant when ``w_i = l''(y_i, <theta_*, x_i>)``.

    Returns:
        The estimate, floored at 1

    Raises:
        ContractViolationError: On an empty dataset, or a degenerate
            covariance in fastica mode
    """
    if dataset.n == 0:
        raise ContractViolationError("cannot estimate kappa of an empty dataset")
    if restarts < 1 or iterations < 1:
        raise ContractViolationError("restarts and iterations must be positive")
    mode = KappaMode(mode)
    X = _weighted_design(dataset, weights)
    if mode is KappaMode.AXES:
        value = _kappa_axes(X)
    else:
        rng = rng if rng is not None else make_rng(0, 0, StreamRole.ESTIMATOR)
        value = _kappa_fastica(X, restarts, iterations, tol, rng)
    return max(value, 1.0)


def _span_basis(S: np.ndarray) -> np.ndarray:
    eigenvalues, basis = scipy.linalg.eigh(S)
    keep = eigenvalues > SPAN_RTOL * max(eigenvalues[-1], 0.0)
    return basis[:, keep]


def estimate_rho(
    dataset: Dataset,
    theta_star: np.ndarray,
    model: LossModel,
    dense_limit: int = RHO_DENSE_LIMIT,
) -> RhoEstimate:
    """Largest generalized eigenvalue of ``(Sigma, H(theta_*))`` on the data span.

    Above ``dense_limit`` dimensions the loose bound ``1 / min_i l''_i`` is
    returned instead and flagged.

    Raises:
        ContractViolationError: If the Hessian is singular on the data span
    """
    if dataset.n == 0:
        raise ContractViolationError("cannot estimate rho of an empty dataset")
    margins = np.asarray(dataset.X @ np.asarray(theta_star, dtype=np.float64)).ravel()
    curv = second_derivatives(model, dataset.y, margins)
    if dataset.dimension > dense_limit:
        smallest = float(curv.min())
        if smallest <= 0:
            raise ContractViolationError("second derivative vanishes at theta_*")
        logger.info(f"d={dataset.dimension} > {dense_limit}: reporting loose rho bound")
        return RhoEstimate(1.0 / smallest, loose=True)

    X = _dense(dataset.X)
    sigma = X.T @ X / dataset.n
    hessian = (X.T * curv) @ X / dataset.n
    P = _span_basis(sigma)
    if P.shape[1] == 0:
        raise ContractViolationError("data span is empty")
    a = P.T @ sigma @ P
    b = P.T @ hessian @ P
    try:
        values = scipy.linalg.eigh(a, b, eigvals_only=True)
    except np.linalg.LinAlgError:
        raise ContractViolationError("Hessian at theta_* is singular on the data span")
    return RhoEstimate(float(values[-1]))


def estimate_constants(
    dataset: Dataset,
    model: LossModel,
    kappa_mode: Optional[KappaMode] = None,
    restarts: int = KAPPA_RESTARTS,
    iterations: int = KAPPA_ITERATIONS,
    tol: float = KAPPA_TOL,
    dense_limit: int = RHO_DENSE_LIMIT,
    reference_tol: Optional[float] = None,
    max_iter: int = 100,
    norm_cap: Optional[float] = None,
    seed: int = 0,
) -> ProblemConstants:
    """Estimate every constant of a dataset under ``model``.

    The kappa mode defaults to axes for sparse or high-dimensional data and
    fastica otherwise.
    """
    R2 = estimate_radius(dataset)
    if kappa_mode is None:
        high_dim = dataset.is_sparse or dataset.dimension > dense_limit
        kappa_mode = KappaMode.AXES if high_dim else KappaMode.FASTICA
    kappa_mode = KappaMode(kappa_mode)
    rng = make_rng(seed, 0, StreamRole.ESTIMATOR)
    kappa = estimate_kappa(dataset, kappa_mode, None, restarts, iterations, tol, rng)

    reference = batch_reference(dataset, model, reference_tol, max_iter, norm_cap, dense_limit)
    kappa_weighted = None
    rho = RhoEstimate(1.0)
    if model.is_logistic:
        margins = np.asarray(dataset.X @ reference.theta_star).ravel()
        weights = second_derivatives(model, dataset.y, margins)
        kappa_weighted = estimate_kappa(dataset, kappa_mode, weights, restarts, iterations, tol, rng)
        rho = estimate_rho(dataset, reference.theta_star, model, dense_limit)
        if not rho.loose and rho.value < 4.0:
            logger.warning(f"Estimated rho={rho.value:.4g} is below the logistic floor of 4")

    logger.info(
        f"Constants for {dataset.name}: R2={R2:.4g}, kappa={kappa:.4g} ({kappa_mode.value}), "
        f"rho={rho.value:.4g}{' (loose)' if rho.loose else ''}"
    )
    return ProblemConstants(
        R2=R2,
        kappa=kappa,
        rho=rho.value,
        theta_star=reference.theta_star,
        f_star=reference.f_star,
        kappa_mode=kappa_mode,
        kappa_weighted=kappa_weighted,
        rho_loose=rho.loose,
        near_separable=reference.near_separable,
    )
