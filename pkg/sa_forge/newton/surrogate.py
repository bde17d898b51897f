"""Stochastic step on the local quadratic approximation of a smooth loss."""

import numpy as np

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.core.state import IterateState, Observation, update_average
from sa_forge.core.vector import add_scaled, dot
from sa_forge.losses.models import LossModel, curvature, gradient_parts


def surrogate_step(
    state: IterateState,
    support: np.ndarray,
    obs: Observation,
    gamma: float,
    model: LossModel,
) -> IterateState:
    """One LMS step on the quadratic model of the loss around ``support``.

    ``theta <- theta - gamma [l'(y, <x, s>) + l''(y, <x, s>) <x, theta - s>] x``

    The rank-one second derivative is never formed: the update needs two
    inner products and one axpy, so it costs at most twice a plain
    stochastic gradient step. ``support`` is only read before the iterate
    moves, so it may alias ``state.theta_bar``.

    Raises:
        ContractViolationError: If ``gamma`` is negative
        DimensionMismatchError: On inconsistent dimensions
    """
    if gamma < 0:
        raise ContractViolationError(f"step-size must be nonnegative, got {gamma}")
    yhat_support = dot(support, obs.x)
    yhat = dot(state.theta, obs.x)
    coef, offset = gradient_parts(model, obs, yhat_support)
    coef += curvature(model, obs, yhat_support) * (yhat - yhat_support)
    add_scaled(state.theta, -gamma * coef, obs.x)
    if offset is not None:
        add_scaled(state.theta, gamma, offset)
    return update_average(state, state.theta)
