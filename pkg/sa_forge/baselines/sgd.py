"""Plain stochastic gradient descent, averaged or not."""

import logging
from typing import Iterable, Optional

from sa_forge.core.driver import TRACK_AVERAGE, TRACK_LAST, RunTrace, run_recursion
from sa_forge.core.state import IterateState, Observation, update_average
from sa_forge.core.vector import add_scaled, dot
from sa_forge.lms.recursion import StepSchedule
from sa_forge.losses.models import LossModel, gradient_parts

logger = logging.getLogger(__name__)


def gradient_step(state: IterateState, obs: Observation, gamma: float, model: LossModel) -> IterateState:
    """``theta <- theta - gamma l'(y, <x, theta>) x`` followed by the average update."""
    yhat = dot(state.theta, obs.x)
    coef, offset = gradient_parts(model, obs, yhat)
    add_scaled(state.theta, -gamma * coef, obs.x)
    if offset is not None:
        add_scaled(state.theta, gamma, offset)
    return update_average(state, state.theta)


def sgd_step(
    state: IterateState, obs: Observation, schedule: StepSchedule, model: LossModel
) -> IterateState:
    """One SGD step with the step-size the schedule gives for step ``state.n + 1``."""
    return gradient_step(state, obs, schedule.gamma_at(state.n + 1), model)


def run_sgd(
    stream: Iterable[Observation],
    schedule: StepSchedule,
    n: int,
    model: LossModel,
    theta0,
    checkpoints: Optional[Iterable[int]] = None,
    averaged: bool = True,
) -> RunTrace:
    """Run ``n`` SGD steps, recording the averaged or the last iterate."""
    state = IterateState.start(theta0)
    logger.debug(
        f"SGD ({'averaged' if averaged else 'last iterate'}): {schedule.kind.value} schedule, "
        f"n={n}, loss={model}"
    )
    return run_recursion(
        stream,
        n,
        state,
        lambda s, obs, _k: sgd_step(s, obs, schedule, model),
        checkpoints,
        TRACK_AVERAGE if averaged else TRACK_LAST,
    )
