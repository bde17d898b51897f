"""Online Newton schemes: how the support point of the quadratic model is chosen.

- ``two_step``: averaged SGD with step ``1/(2 R^2 sqrt(m))`` for the first half
  of the budget, then averaged LMS with step ``1/R^2`` on the quadratic model
  around the first-half average.
- ``two_step_doubling``: the two-step procedure restarted on dyadic blocks
  ``[2^j, 2^{j+1})``, each warm-started from the previous block's output.
- ``doubling_approx``: Newton steps only, support refreshed to the current
  average at steps ``2^j``.
- ``current_average``: the support is the running average before each step.
"""

import logging
import math
from enum import Enum
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from sa_forge.baselines.sgd import gradient_step
from sa_forge.core.driver import RunTrace, run_recursion, validate_checkpoints
from sa_forge.core.exceptions import ContractViolationError
from sa_forge.core.state import CheckpointRecorder, IterateState, Observation, next_observation
from sa_forge.losses.models import LossModel
from sa_forge.newton.surrogate import surrogate_step

logger = logging.getLogger(__name__)


class SupportPolicy(str, Enum):
    TWO_STEP = "two_step"
    TWO_STEP_DOUBLING = "two_step_doubling"
    DOUBLING_APPROX = "doubling_approx"
    CURRENT_AVERAGE = "current_average"

    @classmethod
    def from_name(cls, name: str) -> "SupportPolicy":
        aliases = {
            "2step": cls.TWO_STEP,
            "2step-dbl": cls.TWO_STEP_DOUBLING,
            "dbl-approx": cls.DOUBLING_APPROX,
            "online": cls.CURRENT_AVERAGE,
        }
        if name in aliases:
            return aliases[name]
        try:
            return cls(name)
        except ValueError:
            raise ContractViolationError(f"Unknown support policy '{name}'")


def _is_power_of_two(k: int) -> bool:
    return k > 0 and (k & (k - 1)) == 0


def _two_step_block(
    it: Iterator[Observation],
    n1: int,
    n2: int,
    model: LossModel,
    R2: float,
    theta0: np.ndarray,
    consumed: int,
    requested: int,
    on_step: Callable[[int, np.ndarray], None],
) -> IterateState:
    """Run one two-step procedure; ``on_step`` sees the global step and the current average."""
    phase1 = IterateState.start(theta0)
    gamma1 = 1.0 / (2.0 * R2 * math.sqrt(n1)) if n1 > 0 else 0.0
    for k in range(1, n1 + 1):
        obs = next_observation(it, consumed + k - 1, requested)
        gradient_step(phase1, obs, gamma1, model)
        on_step(consumed + k, phase1.theta_bar)
    support = phase1.theta_bar.copy()
    phase2 = IterateState.start(support)
    gamma2 = 1.0 / R2
    for k in range(1, n2 + 1):
        obs = next_observation(it, consumed + n1 + k - 1, requested)
        surrogate_step(phase2, support, obs, gamma2, model)
        on_step(consumed + n1 + k, phase2.theta_bar)
    return phase2


def _check_radius(R: Optional[float]) -> float:
    if R is None or R <= 0:
        raise ContractViolationError(f"two-step procedures need a positive radius R, got {R}")
    return R * R


def run_two_step(
    stream: Iterable[Observation],
    n: int,
    model: LossModel,
    R: float,
    theta0,
    checkpoints: Optional[Iterable[int]] = None,
) -> RunTrace:
    """``n`` averaged SGD steps at ``1/(2 R^2 sqrt(n))`` then ``n`` Newton steps at ``1/R^2``.

    Consumes ``2n`` observations; checkpoints index total samples consumed.
    The second phase starts from the first-phase average, which is also the
    fixed support point. The final average is ``trace.final``.

    On the square loss the quadratic model is exact, so the second phase is
    plain averaged LMS at ``1/R^2`` started from the first-phase average.

    Raises:
        StreamExhaustedError: If fewer than ``2n`` observations are available
    """
    if n < 1:
        raise ContractViolationError(f"n must be >= 1, got {n}")
    R2 = _check_radius(R)
    start = IterateState.start(theta0)
    recorder = CheckpointRecorder(validate_checkpoints(checkpoints, 2 * n))
    recorder.offer(0, start.theta_bar)
    final = _two_step_block(iter(stream), n, n, model, R2, start.theta, 0, 2 * n, recorder.offer)
    return RunTrace(state=final, checkpoints=recorder.checkpoints, iterates=np.array(recorder.snapshots))


def run_online_newton(
    stream: Iterable[Observation],
    gamma: float,
    n: int,
    policy: SupportPolicy,
    model: LossModel,
    theta0,
    checkpoints: Optional[Iterable[int]] = None,
    R: Optional[float] = None,
) -> RunTrace:
    """Run ``n`` Newton-type steps under a support policy and record the average.

    ``gamma`` drives the ``current_average`` and ``doubling_approx``
    policies; the two-step policies use their own schedule from ``R``. For
    ``two_step_doubling`` the recorded value is the output of the last
    completed block.

    On the square loss ``current_average`` and ``doubling_approx`` reproduce
    averaged LMS at ``gamma``. The two-step policies ignore ``gamma`` there
    too: the first half runs SGD at ``1/(2 R^2 sqrt(n // 2))`` and the rest
    is averaged LMS at ``1/R^2``.

    Raises:
        ContractViolationError: On an unknown policy or missing radius
        StreamExhaustedError: If the stream runs out early
    """
    if not isinstance(policy, SupportPolicy):
        policy = SupportPolicy.from_name(str(policy))
    state = IterateState.start(theta0)

    if policy is SupportPolicy.CURRENT_AVERAGE:
        return run_recursion(
            stream,
            n,
            state,
            lambda s, obs, _k: surrogate_step(s, s.theta_bar, obs, gamma, model),
            checkpoints,
        )

    if policy is SupportPolicy.DOUBLING_APPROX:
        support = [state.theta_bar.copy()]

        def approx_step(s: IterateState, obs: Observation, k: int) -> IterateState:
            if _is_power_of_two(k):
                support[0] = s.theta_bar.copy()
            return surrogate_step(s, support[0], obs, gamma, model)

        return run_recursion(stream, n, state, approx_step, checkpoints)

    R2 = _check_radius(R)
    recorder = CheckpointRecorder(validate_checkpoints(checkpoints, n))
    recorder.offer(0, state.theta_bar)
    it = iter(stream)

    if policy is SupportPolicy.TWO_STEP:
        if n == 0:
            final = state
        else:
            n1 = n // 2
            final = _two_step_block(it, n1, n - n1, model, R2, state.theta, 0, n, recorder.offer)
        return RunTrace(state=final, checkpoints=recorder.checkpoints, iterates=np.array(recorder.snapshots))

    # two_step_doubling
    current = state.theta.copy()
    final = state
    consumed = 0
    block = 0
    while consumed < n:
        size = min(2 ** block, n - consumed)
        end = consumed + size
        previous = current

        def on_step(k: int, avg: np.ndarray, end=end, previous=previous) -> None:
            recorder.offer(k, avg if k == end else previous)

        final = _two_step_block(it, size // 2, size - size // 2, model, R2, current, consumed, n, on_step)
        current = final.theta_bar.copy()
        consumed = end
        block += 1
    logger.debug(f"Two-step doubling finished {block} blocks over {n} steps")
    return RunTrace(state=final, checkpoints=recorder.checkpoints, iterates=np.array(recorder.snapshots))
