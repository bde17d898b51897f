"""
Factory for optimizers addressed by their experiment id.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from itertools import islice
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from sa_forge.baselines.adagrad import default_adagrad_step, run_adagrad
from sa_forge.baselines.sag import default_sag_step, run_sag
from sa_forge.baselines.sgd import run_sgd
from sa_forge.core.driver import RunTrace
from sa_forge.core.exceptions import ContractViolationError
from sa_forge.core.state import IterateState, Observation
from sa_forge.lms.recursion import StepSchedule, run_averaged_lms
from sa_forge.losses.models import LossModel
from sa_forge.models.experiment import OPTIMIZER_IDS
from sa_forge.newton.policies import SupportPolicy, run_online_newton

logger = logging.getLogger(__name__)

DECAY_CONSTANT = 0.5


@dataclass
class RunContext:
    """Everything an optimizer needs for one replication.

    ``stream`` builds a fresh observation stream. ``train`` is the finite
    training set when there is one; ``pilot`` is a sample used for
    data-dependent default steps. ``indices`` builds a fresh index stream
    into ``train``.
    """

    model: LossModel
    n: int
    theta0: np.ndarray
    checkpoints: np.ndarray
    R2: float
    stream: Callable[[], Iterator[Observation]]
    train: Optional[Sequence[Observation]] = None
    pilot: Optional[Sequence[Observation]] = None
    indices: Optional[Callable[[], Iterator[int]]] = None
    rng: Optional[np.random.Generator] = None


class Optimizer(ABC):
    """An optimizer run by the harness.

    Implementations record the averaged iterate unless ``tracks_average`` is
    false, in which case the last iterate is recorded.
    """

    tracks_average: bool = True

    def __init__(self, optimizer_id: str):
        self.optimizer_id = optimizer_id

    @abstractmethod
    def theoretical_step(self, context: RunContext) -> float:
        """Default step size for this optimizer on the given problem."""
        pass

    @abstractmethod
    def run(self, context: RunContext, gamma: float) -> RunTrace:
        """Run ``context.n`` steps at step size ``gamma``."""
        pass

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.optimizer_id!r})"


class AveragedLms(Optimizer):
    """Averaged least-mean-squares with a constant step."""

    def theoretical_step(self, context: RunContext) -> float:
        return 1.0 / (4.0 * context.R2)

    def run(self, context: RunContext, gamma: float) -> RunTrace:
        return run_averaged_lms(context.stream(), gamma, context.n, context.theta0, context.checkpoints)


class Sgd(Optimizer):
    """Plain SGD: constant or ``gamma / sqrt(n)`` steps, averaged or not.

    For the decaying schedule ``gamma`` is the first step, ``C / R^2``.
    """

    def __init__(self, optimizer_id: str, averaged: bool, decaying: bool):
        super().__init__(optimizer_id)
        self.averaged = averaged
        self.decaying = decaying
        self.tracks_average = averaged

    def theoretical_step(self, context: RunContext) -> float:
        if self.decaying:
            return DECAY_CONSTANT / context.R2
        if context.model.is_logistic:
            return 1.0 / (2.0 * context.R2 * math.sqrt(max(context.n, 1)))
        return 1.0 / (4.0 * context.R2)

    def schedule(self, gamma: float, R2: float) -> StepSchedule:
        if self.decaying:
            return StepSchedule.decaying(gamma * R2, R2)
        return StepSchedule.constant(gamma)

    def run(self, context: RunContext, gamma: float) -> RunTrace:
        return run_sgd(
            context.stream(),
            self.schedule(gamma, context.R2),
            context.n,
            context.model,
            context.theta0,
            context.checkpoints,
            averaged=self.averaged,
        )


class OnlineNewton(Optimizer):
    """Stochastic Newton steps on quadratic models around a support point.

    The two-step policies use their own step schedule, so ``gamma`` is only
    reported for them.
    """

    def __init__(self, optimizer_id: str, policy: SupportPolicy):
        super().__init__(optimizer_id)
        self.policy = policy

    @property
    def uses_gamma(self) -> bool:
        return self.policy in (SupportPolicy.CURRENT_AVERAGE, SupportPolicy.DOUBLING_APPROX)

    def theoretical_step(self, context: RunContext) -> float:
        if self.uses_gamma:
            return 1.0 / (2.0 * context.R2)
        return 1.0 / context.R2

    def run(self, context: RunContext, gamma: float) -> RunTrace:
        return run_online_newton(
            context.stream(),
            gamma,
            context.n,
            self.policy,
            context.model,
            context.theta0,
            context.checkpoints,
            R=math.sqrt(context.R2),
        )


class Sag(Optimizer):
    """Stochastic average gradient over the finite training set.

    Without a training set (synthetic problems) the first ``n`` streamed
    observations form one and a single effective pass is made.
    """

    tracks_average = False

    def theoretical_step(self, context: RunContext) -> float:
        return default_sag_step(context.R2)

    def run(self, context: RunContext, gamma: float) -> RunTrace:
        if context.n == 0:
            return _start_only(context)
        train = list(context.train) if context.train is not None else list(islice(context.stream(), context.n))
        indices = context.indices() if context.indices is not None else None
        return run_sag(
            train,
            gamma,
            context.n / len(train),
            context.model,
            context.theta0,
            rng=context.rng,
            indices=indices,
            checkpoints=context.checkpoints,
        )


class Adagrad(Optimizer):
    """Adagrad with diagonal scaling; the last iterate is reported."""

    tracks_average = False

    def theoretical_step(self, context: RunContext) -> float:
        sample = context.train if context.train is not None else context.pilot
        if not sample:
            raise ContractViolationError("adagrad needs a sample to set its default step")
        return default_adagrad_step(sample)

    def run(self, context: RunContext, gamma: float) -> RunTrace:
        return run_adagrad(context.stream(), gamma, context.n, context.model, context.theta0, context.checkpoints)


def _start_only(context: RunContext) -> RunTrace:
    """Trace of a zero-step run: only the starting point is recorded."""
    state = IterateState.start(context.theta0)
    return RunTrace(state=state, checkpoints=context.checkpoints, iterates=state.theta[None, :].copy())


_NEWTON_POLICIES = {
    "newton:2step": SupportPolicy.TWO_STEP,
    "newton:2step-dbl": SupportPolicy.TWO_STEP_DOUBLING,
    "newton:dbl-approx": SupportPolicy.DOUBLING_APPROX,
    "newton:online": SupportPolicy.CURRENT_AVERAGE,
}


def create_optimizer(optimizer_id: str) -> Optimizer:
    """Create the optimizer registered under ``optimizer_id``.

    Args:
        optimizer_id: One of the experiment optimizer ids

    Returns:
        Configured Optimizer instance

    Raises:
        ContractViolationError: If the id is unknown
    """
    if optimizer_id not in OPTIMIZER_IDS:
        raise ContractViolationError(
            f"Unknown optimizer '{optimizer_id}'. Available: {', '.join(OPTIMIZER_IDS)}"
        )

    if optimizer_id == "lms-avg-const":
        return AveragedLms(optimizer_id)
    if optimizer_id in _NEWTON_POLICIES:
        return OnlineNewton(optimizer_id, _NEWTON_POLICIES[optimizer_id])
    if optimizer_id == "sag":
        return Sag(optimizer_id)
    if optimizer_id == "adagrad":
        return Adagrad(optimizer_id)

    averaged = optimizer_id.startswith("avg-")
    decaying = optimizer_id.endswith("decay-sgd") or optimizer_id.endswith("-decay")
    logger.debug(f"Creating SGD optimizer {optimizer_id}: averaged={averaged}, decaying={decaying}")
    return Sgd(optimizer_id, averaged=averaged, decaying=decaying)
