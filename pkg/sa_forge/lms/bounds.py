"""Closed-form excess-risk bounds for averaged constant-step LMS."""

import math
from dataclasses import dataclass

from sa_forge.core.exceptions import ContractViolationError, HypothesisViolationError


@dataclass(frozen=True)
class BoundParams:
    """Problem constants feeding the LMS bounds.

    Attributes:
        R: Radius bound
        sigma: Noise scale
        tau: p-th moment noise scale (``tau >= sigma``)
        kappa: Kurtosis constant (``>= 1``)
        d: Dimension
        dist0: Distance ``||theta_0 - theta_*||``
    """

    R: float
    sigma: float
    tau: float
    kappa: float
    d: int
    dist0: float

    def __post_init__(self) -> None:
        for name in ("R", "sigma", "tau", "kappa", "d", "dist0"):
            if getattr(self, name) < 0:
                raise ContractViolationError(f"{name} must be nonnegative, got {getattr(self, name)}")
        if self.tau < self.sigma:
            raise ContractViolationError(f"tau ({self.tau}) must be >= sigma ({self.sigma})")
        if self.kappa < 1:
            raise ContractViolationError(f"kappa must be >= 1, got {self.kappa}")

    @property
    def R2(self) -> float:
        return self.R * self.R


def _check_n(n: int) -> None:
    if n < 1:
        raise ContractViolationError(f"n must be >= 1, got {n}")


def theorem1_bound(p: BoundParams, gamma: float, n: int) -> float:
    """Expected excess risk bound of the averaged iterate after ``n`` observations.

    ``(1/2n) [sigma sqrt(d) / (1 - sqrt(gamma R^2)) + R dist0 / sqrt(gamma R^2)]^2``

    Raises:
        HypothesisViolationError: Unless ``0 < gamma R^2 < 1``
    """
    _check_n(n)
    g = gamma * p.R2
    if not 0.0 < g < 1.0:
        raise HypothesisViolationError("0 < gamma R^2 < 1", g, 1.0)
    root = math.sqrt(g)
    inner = p.sigma * math.sqrt(p.d) / (1.0 - root) + p.R * p.dist0 / root
    return inner * inner / (2.0 * n)


def theorem2_pmoment_bound(p_params: BoundParams, p: float, gamma: float, n: int) -> float:
    """Bound on ``(E |f(theta_bar) - f_*|^p)^(1/p)`` for real ``p >= 1``.

    Raises:
        ContractViolationError: If ``p < 1``
        HypothesisViolationError: Unless ``0 < gamma <= 1 / (12 p kappa R^2)``
    """
    _check_n(n)
    if p < 1:
        raise ContractViolationError(f"p must be >= 1, got {p}")
    limit = 1.0 / (12.0 * p * p_params.kappa * p_params.R2)
    if not 0.0 < gamma <= limit * (1.0 + 1e-12):
        raise HypothesisViolationError("0 < gamma <= 1/(12 p kappa R^2)", gamma, limit)
    inner = 7.0 * p_params.tau * math.sqrt(p_params.d) + p_params.R * p_params.dist0 * math.sqrt(
        3.0 + 2.0 / (gamma * p * p_params.R2)
    )
    return p / (2.0 * n) * inner * inner


def theorem2_special_case_bound(p_params: BoundParams, p: float, n: int) -> float:
    """Simplified p-th moment bound at ``gamma = 1 / (12 p kappa R^2)``.

    Always at least the general-form bound at that step-size; the two agree
    when ``dist0 == 0``.
    """
    _check_n(n)
    if p < 1:
        raise ContractViolationError(f"p must be >= 1, got {p}")
    inner = 7.0 * p_params.tau * math.sqrt(p_params.d) + 6.0 * math.sqrt(p_params.kappa) * p_params.R * p_params.dist0
    return p / (2.0 * n) * inner * inner


def corollary_tail_threshold(p_params: BoundParams, gamma: float, delta: float, n: int) -> float:
    """Threshold ``t`` with ``P(f(theta_bar_{n-1}) - f_* >= t) <= delta``.

    ``delta = 1`` is accepted and drops the ``delta`` power term.

    Raises:
        ContractViolationError: Unless ``0 < delta <= 1``
        HypothesisViolationError: Unless ``0 < gamma <= 1 / (12 kappa R^2)``
    """
    _check_n(n)
    if not 0.0 < delta <= 1.0:
        raise ContractViolationError(f"delta must lie in (0, 1], got {delta}")
    scale = gamma * p_params.kappa * p_params.R2
    limit = 1.0 / (12.0 * p_params.kappa * p_params.R2)
    if not 0.0 < gamma <= limit * (1.0 + 1e-12):
        raise HypothesisViolationError("0 < gamma <= 1/(12 kappa R^2)", gamma, limit)
    inner = 7.0 * p_params.tau * math.sqrt(p_params.d) + p_params.R * p_params.dist0 * (
        math.sqrt(3.0) + math.sqrt(24.0 * p_params.kappa)
    )
    return inner * inner / (24.0 * scale * n * delta ** (12.0 * scale))
