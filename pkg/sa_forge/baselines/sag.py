"""Stochastic average gradient for finite training sets.

Gradients of linear models are ``l'_i x_i``, so one scalar per example is
stored instead of a d-vector. Stored gradients start at zero and the sum is
always divided by the full number of examples.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from sa_forge.core.driver import RunTrace, validate_checkpoints
from sa_forge.core.exceptions import ContractViolationError, StreamExhaustedError
from sa_forge.core.state import CheckpointRecorder, IterateState, Observation, update_average
from sa_forge.core.vector import add_scaled, dot
from sa_forge.losses.models import LossModel, gradient_parts

logger = logging.getLogger(__name__)


@dataclass
class SagState(IterateState):
    """Iterate plus one stored scalar gradient per example and their weighted sum."""

    grads: np.ndarray = field(default_factory=lambda: np.empty(0))
    grad_sum: np.ndarray = field(default_factory=lambda: np.empty(0))

    @classmethod
    def start_for(cls, theta0, n_examples: int) -> "SagState":
        base = IterateState.start(theta0)
        return cls(
            theta=base.theta,
            theta_bar=base.theta_bar,
            n=0,
            grads=np.zeros(n_examples),
            grad_sum=np.zeros(base.dimension),
        )

    def recompute_sum(self, dataset: Sequence[Observation]) -> np.ndarray:
        """Gradient sum rebuilt from scratch out of the stored scalars."""
        total = np.zeros(self.dimension)
        for g, obs in zip(self.grads, dataset):
            add_scaled(total, g, obs.x)
        return total

    def audit(self, dataset: Sequence[Observation]) -> float:
        """Relative error between the incremental and the recomputed gradient sum."""
        exact = self.recompute_sum(dataset)
        scale = max(np.linalg.norm(exact), np.finfo(float).tiny)
        return float(np.linalg.norm(self.grad_sum - exact) / scale)


def sag_step(state: SagState, dataset: Sequence[Observation], index: int, gamma: float, model: LossModel) -> SagState:
    obs = dataset[index]
    if obs.y is None:
        raise ContractViolationError("SAG needs observations with a response y")
    coef, _ = gradient_parts(model, obs, dot(state.theta, obs.x))
    add_scaled(state.grad_sum, coef - state.grads[index], obs.x)
    state.grads[index] = coef
    state.theta -= (gamma / len(dataset)) * state.grad_sum
    update_average(state, state.theta)
    return state


def run_sag(
    dataset: Sequence[Observation],
    gamma: float,
    passes: float,
    model: LossModel,
    theta0=None,
    rng: Optional[np.random.Generator] = None,
    indices: Optional[Iterable[int]] = None,
    checkpoints: Optional[Iterable[int]] = None,
) -> RunTrace:
    """Run SAG for ``passes`` effective passes (``passes * len(dataset)`` updates).

    Examples are drawn uniformly with replacement from ``rng`` unless an
    explicit index stream is given. The last iterate is recorded.

    Raises:
        ContractViolationError: If the dataset is empty
    """
    if len(dataset) == 0:
        raise ContractViolationError("SAG needs a nonempty dataset")
    n_ex = len(dataset)
    steps = int(round(passes * n_ex))
    if theta0 is None:
        theta0 = np.zeros(dataset[0].dimension)
    state = SagState.start_for(theta0, n_ex)
    if indices is None:
        rng = rng if rng is not None else np.random.default_rng()
        indices = rng.integers(0, n_ex, size=steps)
    it = iter(indices)
    recorder = CheckpointRecorder(validate_checkpoints(checkpoints, steps))
    recorder.offer(0, state.theta)
    logger.debug(f"SAG: gamma={gamma:.4g}, {n_ex} examples, {steps} updates")
    for k in range(1, steps + 1):
        idx = next(it, None)
        if idx is None:
            raise StreamExhaustedError(k - 1, steps)
        sag_step(state, dataset, int(idx), gamma, model)
        recorder.offer(k, state.theta)
    return RunTrace(state=state, checkpoints=recorder.checkpoints, iterates=np.array(recorder.snapshots))


def default_sag_step(R2: float) -> float:
    """``1 / (16 R^2)``."""
    return 1.0 / (16.0 * R2)
