"""Adagrad: stochastic gradient with per-coordinate diagonal scaling.

The last iterate is reported; the running average kept by the state is not
used.
"""

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from sa_forge.core.driver import TRACK_LAST, RunTrace, run_recursion
from sa_forge.core.exceptions import ContractViolationError
from sa_forge.core.state import IterateState, Observation, update_average
from sa_forge.core.vector import SparseVector, dot, max_abs, to_dense
from sa_forge.losses.models import LossModel, gradient_parts

ADAGRAD_EPS = 1e-10


@dataclass
class AdagradState(IterateState):
    """Iterate plus accumulated squared gradients per coordinate."""

    accum: np.ndarray = field(default_factory=lambda: np.empty(0))

    @classmethod
    def start_for(cls, theta0) -> "AdagradState":
        base = IterateState.start(theta0)
        return cls(theta=base.theta, theta_bar=base.theta_bar, n=0, accum=np.zeros(base.dimension))


def adagrad_step(state: AdagradState, obs: Observation, base_step: float, model: LossModel) -> AdagradState:
    """Accumulate ``g_j^2`` and move ``theta_j -= base_step g_j / sqrt(accum_j + eps)``.

    Only coordinates stored in a sparse covariate are touched.
    """
    coef, offset = gradient_parts(model, obs, dot(state.theta, obs.x))
    if isinstance(obs.x, SparseVector) and offset is None:
        idx = obs.x.indices
        g = coef * obs.x.values
        state.accum[idx] += g * g
        state.theta[idx] -= base_step * g / np.sqrt(state.accum[idx] + ADAGRAD_EPS)
    else:
        g = coef * to_dense(obs.x)
        if offset is not None:
            g = g - to_dense(offset)
        state.accum += g * g
        state.theta -= base_step * g / np.sqrt(state.accum + ADAGRAD_EPS)
    return update_average(state, state.theta)


def run_adagrad(
    stream: Iterable[Observation],
    base_step: float,
    n: int,
    model: LossModel,
    theta0,
    checkpoints: Optional[Iterable[int]] = None,
) -> RunTrace:
    """Run ``n`` Adagrad steps and record the last iterate.

    Raises:
        ContractViolationError: If ``base_step`` is not positive
    """
    if base_step <= 0:
        raise ContractViolationError(f"base step must be positive, got {base_step}")
    state = AdagradState.start_for(theta0)
    return run_recursion(
        stream,
        n,
        state,
        lambda s, obs, _k: adagrad_step(s, obs, base_step, model),
        checkpoints,
        TRACK_LAST,
    )


def default_adagrad_step(observations: Sequence[Observation]) -> float:
    """``1 / max_i ||x_i||_inf`` over the training set."""
    if len(observations) == 0:
        raise ContractViolationError("need at least one observation")
    largest = max(max_abs(obs.x) for obs in observations)
    if largest == 0.0:
        raise ContractViolationError("all covariates are zero")
    return 1.0 / largest
