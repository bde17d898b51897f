"""Runtime checks of the self-concordance conditions and the weighted-distance bound."""

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Tuple

import numpy as np

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.core.vector import as_dense
from sa_forge.losses.models import LossModel, loss_derivatives

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelfConcordanceReport:
    """Extrema of the derivative conditions over a grid of ``(y, yhat)`` points."""

    max_abs_d1: float
    max_d2: float
    max_d3_excess: float
    points: int

    def holds(self, tol: float = 1e-12) -> bool:
        """True when ``|l'| <= 1``, ``l'' <= 1/4`` and ``|l'''| <= l''`` everywhere."""
        return (
            self.max_abs_d1 <= 1.0 + tol
            and self.max_d2 <= 0.25 + tol
            and self.max_d3_excess <= tol
        )


def check_self_concordance(
    model: LossModel, grid: Iterable[Tuple[float, float]]
) -> SelfConcordanceReport:
    """Sweep a grid and report ``max |l'|``, ``max l''`` and ``max(|l'''| - l'')``.

    Raises:
        ContractViolationError: If the grid is empty
    """
    max_d1 = max_d2 = max_d3 = -np.inf
    count = 0
    for y, yhat in grid:
        t = loss_derivatives(model, y, yhat)
        max_d1 = max(max_d1, abs(t.d1))
        max_d2 = max(max_d2, t.d2)
        max_d3 = max(max_d3, abs(t.d3) - t.d2)
        count += 1
    if count == 0:
        raise ContractViolationError("self-concordance grid is empty")
    report = SelfConcordanceReport(float(max_d1), float(max_d2), float(max_d3), count)
    logger.debug(f"Self-concordance sweep for {model} over {count} points: {report}")
    return report


def prediction_grid(low: float = -30.0, high: float = 30.0, points: int = 10_000) -> list:
    """``(y, yhat)`` pairs for both labels over an evenly spaced prediction range.

    Each label gets an odd number of predictions, ``points // 2`` rounded up
    to odd. When the range straddles zero the nearest prediction is moved to
    ``yhat = 0``, where the logistic curvature peaks.
    """
    yhats = np.linspace(low, high, max(points // 2, 1) | 1)
    if low < 0.0 < high:
        yhats[np.argmin(np.abs(yhats))] = 0.0
    return [(y, float(v)) for y in (-1.0, 1.0) for v in yhats]


def _check_psd(H: np.ndarray, tol: float = 1e-10) -> None:
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ContractViolationError(f"H must be square, got shape {H.shape}")
    if not np.allclose(H, H.T, atol=tol * max(1.0, np.abs(H).max())):
        raise ContractViolationError("H must be symmetric")
    eigs = np.linalg.eigvalsh(H)
    if eigs.size and eigs[0] < -tol * max(1.0, abs(eigs[-1])):
        raise ContractViolationError(f"H is not positive semi-definite (min eigenvalue {eigs[0]:.3e})")


def check_distance_inequality(
    f_handle: Callable[[np.ndarray], float],
    H: np.ndarray,
    theta_star,
    points: Sequence,
    kappa: float,
    rho: float,
) -> float:
    """Worst violation of ``<d, H d> <= 3 D + kappa rho D^2`` over sampled points.

    ``d = theta - theta_star`` and ``D = f(theta) - f(theta_star)``. A
    nonpositive result means the bound held at every point.

    Raises:
        ContractViolationError: If H is not symmetric positive semi-definite
            or no points are given
    """
    H = np.asarray(H, dtype=np.float64)
    _check_psd(H)
    if len(points) == 0:
        raise ContractViolationError("at least one point is required")
    theta_star = as_dense(theta_star)
    f_star = f_handle(theta_star)
    worst = -np.inf
    for theta in points:
        diff = as_dense(theta) - theta_star
        gap = f_handle(theta_star + diff) - f_star
        violation = float(diff @ H @ diff - 3.0 * gap - kappa * rho * gap ** 2)
        worst = max(worst, violation)
    return worst
