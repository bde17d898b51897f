"""Excess-risk bound for the two-step Newton procedure on self-concordant losses."""

from dataclasses import dataclass
from typing import Tuple

from sa_forge.core.exceptions import ContractViolationError


@dataclass(frozen=True)
class NewtonBoundParams:
    """Constants of the two-step bound (``rho >= 4`` and ``kappa >= 1`` for logistic losses)."""

    kappa: float
    rho: float
    d: int
    R: float
    dist0: float

    def __post_init__(self) -> None:
        if self.kappa < 1:
            raise ContractViolationError(f"kappa must be >= 1, got {self.kappa}")
        if self.rho < 4:
            raise ContractViolationError(f"rho must be >= 4, got {self.rho}")
        if self.d < 1 or self.R < 0 or self.dist0 < 0:
            raise ContractViolationError("d must be >= 1 and R, dist0 nonnegative")

    @property
    def minimum_n(self) -> float:
        """Smallest ``n`` for which the bound applies: ``(19 + 9 R dist0)^4``."""
        return (19.0 + 9.0 * self.R * self.dist0) ** 4


def theorem3_bound(p: NewtonBoundParams, n: int) -> Tuple[float, bool]:
    """``kappa^{3/2} rho^3 d / n (16 R dist0 + 19)^4`` and whether ``n`` is large enough.

    ``n`` counts observations per phase; the procedure consumes ``2n``.
    """
    if n < 1:
        raise ContractViolationError(f"n must be >= 1, got {n}")
    bound = p.kappa ** 1.5 * p.rho ** 3 * p.d / n * (16.0 * p.R * p.dist0 + 19.0) ** 4
    return bound, n >= p.minimum_n
