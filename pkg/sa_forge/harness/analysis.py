"""Rate fitting and bound verification on risk curves."""

import logging
import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.harness.runner import ProblemSetup
from sa_forge.lms.bounds import BoundParams, theorem1_bound
from sa_forge.models.experiment import BoundReport, RiskCurve

logger = logging.getLogger(__name__)

MIN_SLOPE_POINTS = 5
AVERAGED_CONSTANT_IDS = ("lms-avg-const", "avg-const-sgd")


def loglog_slope(
    n: Sequence[float],
    values: Sequence[float],
    window: Tuple[float, float] = (0.1, 1.0),
) -> float:
    """Least-squares slope of ``log10(values)`` against ``log10(n)``.

    ``window`` selects a fraction range of the ``log10(n)`` span of the
    positive sample counts. Nonpositive values in the window are excluded
    with a warning.

    Raises:
        ContractViolationError: If fewer than 5 usable points remain
    """
    n = np.asarray(n, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    lo_frac, hi_frac = window
    if not 0.0 <= lo_frac < hi_frac <= 1.0:
        raise ContractViolationError(f"window must satisfy 0 <= lo < hi <= 1, got {window}")
    positive_n = n > 0
    if not np.any(positive_n):
        raise ContractViolationError("no positive sample counts")
    logn = np.log10(n[positive_n])
    vals = values[positive_n]
    start, span = logn.min(), logn.max() - logn.min()
    tol = 1e-12 * max(span, 1.0)
    in_window = (logn >= start + lo_frac * span - tol) & (logn <= start + hi_frac * span + tol)
    usable = in_window & (vals > 0)
    dropped = int(np.sum(in_window & ~(vals > 0)))
    if dropped:
        logger.warning(f"Excluded {dropped} nonpositive values from the slope fit")
    if usable.sum() < MIN_SLOPE_POINTS:
        raise ContractViolationError(
            f"need at least {MIN_SLOPE_POINTS} positive points in the window, got {int(usable.sum())}"
        )
    slope, _ = np.polyfit(logn[usable], np.log10(vals[usable]), 1)
    return float(slope)


def decade_window(curve: RiskCurve, decades: float = 1.0) -> Tuple[float, float]:
    """Window covering the last ``decades`` decades of the curve's sample counts."""
    positive = curve.checkpoints[curve.checkpoints > 0]
    if positive.size == 0:
        raise ContractViolationError("curve has no positive checkpoints")
    span = np.log10(positive.max()) - np.log10(positive.min())
    if span <= 0:
        raise ContractViolationError("curve spans a single sample count")
    return (max(0.0, 1.0 - decades / span), 1.0)


def fit_loglog_slope(
    curve: RiskCurve,
    window: Optional[Tuple[float, float]] = None,
    split: str = "train",
    decades: Optional[float] = None,
) -> float:
    """Slope of the mean normalized curve in log-log coordinates.

    Args:
        curve: Risk curve
        window: Fraction range of the log-n span (default ``(0.1, 1.0)``)
        split: ``train`` or ``test``
        decades: Alternatively, fit over the last ``decades`` decades

    Raises:
        ContractViolationError: If fewer than 5 usable points remain
    """
    if decades is not None:
        window = decade_window(curve, decades)
    elif window is None:
        window = (0.1, 1.0)
    return loglog_slope(curve.checkpoints, curve.mean(split, normalized=True), window)


def verify_bound(
    curve: RiskCurve,
    bound_fn: Callable[[int], float],
    split: str = "train",
) -> BoundReport:
    """Compare mean + 2 stderr of the raw excess risk to ``bound_fn`` per checkpoint.

    After ``k`` samples the averaged iterate mixes ``k + 1`` iterates, so the
    bound is evaluated at ``n = k + 1``.
    """
    mean = curve.mean(split, normalized=False)
    upper = mean + 2.0 * curve.stderr(split, normalized=False)
    bound = np.array([bound_fn(int(k) + 1) for k in curve.checkpoints], dtype=np.float64)
    violations = [int(k) for k, u, b in zip(curve.checkpoints, upper, bound) if u > b]
    if violations:
        logger.warning(f"{curve.optimizer}: bound violated at {len(violations)} checkpoints")
    return BoundReport(checkpoints=curve.checkpoints.copy(), upper=upper, bound=bound, violations=violations)


def lms_bound_report(setup: ProblemSetup, curve: RiskCurve) -> Optional[BoundReport]:
    """Check a synthetic least-squares curve against the averaged LMS expected-risk bound.

    Returns ``None`` when the bound does not apply: real data, the logistic
    loss, an optimizer other than the averaged constant step, or a step with
    ``gamma R^2 >= 1``.
    """
    config = setup.config
    population = setup.population
    if population is None or setup.model.is_logistic or config.optimizer not in AVERAGED_CONSTANT_IDS:
        return None
    if not 0.0 < curve.gamma * setup.R2 < 1.0:
        logger.warning(f"{config.name}: gamma R^2 = {curve.gamma * setup.R2:.3g}, bound does not apply")
        return None
    params = BoundParams(
        R=math.sqrt(setup.R2),
        sigma=population.sigma,
        tau=population.sigma,
        kappa=1.0,
        d=population.d,
        dist0=float(np.linalg.norm(setup.theta0 - population.theta_star)),
    )
    return verify_bound(curve, lambda n: theorem1_bound(params, curve.gamma, n))
