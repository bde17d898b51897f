"""Least-mean-squares recursion with constant or decaying step-sizes."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from sa_forge.core.driver import TRACK_AVERAGE, RunTrace, run_recursion
from sa_forge.core.exceptions import ContractViolationError
from sa_forge.core.state import IterateState, Observation, update_average
from sa_forge.core.vector import add_scaled, dot
from sa_forge.losses.models import SQUARE, gradient_parts

logger = logging.getLogger(__name__)


class ScheduleKind(str, Enum):
    CONSTANT = "constant"
    DECAYING = "decaying"


@dataclass(frozen=True)
class StepSchedule:
    """Step-size sequence: constant ``gamma`` or ``C / (R^2 sqrt(n))``."""

    kind: ScheduleKind
    gamma: float = 0.0
    C: float = 0.0
    R2: float = 1.0

    def __post_init__(self) -> None:
        if self.kind is ScheduleKind.CONSTANT and self.gamma < 0:
            raise ContractViolationError(f"step-size must be nonnegative, got {self.gamma}")
        if self.kind is ScheduleKind.DECAYING:
            if self.C <= 0:
                raise ContractViolationError(f"decaying constant C must be positive, got {self.C}")
            if self.R2 <= 0:
                raise ContractViolationError(f"R^2 must be positive, got {self.R2}")

    @classmethod
    def constant(cls, gamma: float) -> "StepSchedule":
        return cls(ScheduleKind.CONSTANT, gamma=gamma)

    @classmethod
    def decaying(cls, C: float, R2: float) -> "StepSchedule":
        return cls(ScheduleKind.DECAYING, C=C, R2=R2)

    def gamma_at(self, n: int) -> float:
        """Step-size for the 1-based step index ``n``."""
        if self.kind is ScheduleKind.CONSTANT:
            return self.gamma
        if n < 1:
            raise ContractViolationError(f"step index starts at 1, got {n}")
        return self.C / (self.R2 * math.sqrt(n))

    def satisfies_lms_hypothesis(self, R2: float) -> bool:
        """Whether ``gamma R^2 < 1`` holds (constant schedules only)."""
        return self.kind is ScheduleKind.CONSTANT and self.gamma * R2 < 1.0


def lms_step(state: IterateState, obs: Observation, gamma: float) -> IterateState:
    """One LMS step ``theta <- theta - gamma (<theta, x> x - z)``, then average.

    Costs one inner product and one axpy on the covariate.

    Raises:
        ContractViolationError: If ``gamma`` is negative
        DimensionMismatchError: If the observation dimension differs from the iterate
    """
    if gamma < 0:
        raise ContractViolationError(f"step-size must be nonnegative, got {gamma}")
    yhat = dot(state.theta, obs.x)
    coef, offset = gradient_parts(SQUARE, obs, yhat)
    add_scaled(state.theta, -gamma * coef, obs.x)
    if offset is not None:
        add_scaled(state.theta, gamma, offset)
    return update_average(state, state.theta)


def run_averaged_lms(
    stream: Iterable[Observation],
    gamma: float,
    n: int,
    theta0,
    checkpoints: Optional[Iterable[int]] = None,
    track: str = TRACK_AVERAGE,
) -> RunTrace:
    """Run ``n`` constant-step LMS steps from ``theta0``.

    Returns the final state and the averaged iterate (or the last iterate
    with ``track="last"``) at each checkpoint.

    Raises:
        StreamExhaustedError: If the stream runs out before ``n`` steps
    """
    state = IterateState.start(theta0)
    logger.debug(f"Averaged LMS: gamma={gamma:.4g}, n={n}, d={state.dimension}")
    return run_recursion(
        stream, n, state, lambda s, obs, _k: lms_step(s, obs, gamma), checkpoints, track
    )


def run_decaying_lms(
    stream: Iterable[Observation],
    schedule: StepSchedule,
    n: int,
    theta0,
    checkpoints: Optional[Iterable[int]] = None,
    track: str = TRACK_AVERAGE,
) -> RunTrace:
    """LMS with a step-size schedule, e.g. ``C / (R^2 sqrt(n))``."""
    state = IterateState.start(theta0)
    return run_recursion(
        stream,
        n,
        state,
        lambda s, obs, k: lms_step(s, obs, schedule.gamma_at(k)),
        checkpoints,
        track,
    )
