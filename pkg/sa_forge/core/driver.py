"""Generic loop that feeds a stream of observations through a one-step update."""

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.core.state import CheckpointRecorder, IterateState, Observation, next_observation

logger = logging.getLogger(__name__)

StepFn = Callable[[IterateState, Observation, int], IterateState]

TRACK_AVERAGE = "average"
TRACK_LAST = "last"


@dataclass
class RunTrace:
    """Final state plus the tracked vector recorded at each checkpoint."""

    state: IterateState
    checkpoints: np.ndarray
    iterates: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]


def validate_checkpoints(checkpoints: Optional[Iterable[int]], n: int) -> np.ndarray:
    if checkpoints is None:
        return np.array([n], dtype=np.int64)
    points = np.asarray(list(checkpoints), dtype=np.int64)
    if points.size and (points[0] < 0 or points[-1] > n or np.any(np.diff(points) <= 0)):
        raise ContractViolationError(
            f"checkpoints must be strictly increasing within [0, {n}]"
        )
    return points


def run_recursion(
    stream: Iterable[Observation],
    n: int,
    state: IterateState,
    step: StepFn,
    checkpoints: Optional[Iterable[int]] = None,
    track: str = TRACK_AVERAGE,
) -> RunTrace:
    """Apply ``step`` to ``n`` observations, recording at checkpoints.

    ``step`` receives the state, the observation and the 1-based step index.
    ``track`` selects whether the running average or the last iterate is
    recorded.

    Raises:
        StreamExhaustedError: If the stream yields fewer than ``n`` observations
    """
    if n < 0:
        raise ContractViolationError(f"n must be nonnegative, got {n}")
    if track not in (TRACK_AVERAGE, TRACK_LAST):
        raise ContractViolationError(f"unknown track mode '{track}'")
    recorder = CheckpointRecorder(validate_checkpoints(checkpoints, n))

    def tracked() -> np.ndarray:
        return state.theta_bar if track == TRACK_AVERAGE else state.theta

    recorder.offer(0, tracked())
    it = iter(stream)
    for k in range(1, n + 1):
        obs = next_observation(it, k - 1, n)
        step(state, obs, k)
        recorder.offer(k, tracked())
    logger.debug(f"Completed {n} steps, recorded {len(recorder.snapshots)} checkpoints")
    iterates = np.array(recorder.snapshots) if recorder.snapshots else np.empty((0, state.dimension))
    return RunTrace(state=state, checkpoints=recorder.checkpoints, iterates=iterates)
