"""Observations and the running-average iterate shared by every optimizer."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from sa_forge.core.exceptions import (
    ContractViolationError,
    DimensionMismatchError,
    StreamExhaustedError,
)
from sa_forge.core.vector import SparseVector, Vector, as_dense, dimension


@dataclass(frozen=True)
class Observation:
    """One data pair feeding a recursion.

    Least-squares observations carry either an explicit target term ``z``
    (the ``y * x`` vector of the LMS recursion) or a real response ``y``, in
    which case ``z`` is ``y * x``. Logistic observations carry ``y`` in
    {-1, +1}; the label is checked by the loss, not here.
    """

    x: Vector
    y: Optional[float] = None
    z: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if self.y is None and self.z is None:
            raise ContractViolationError("observation needs a response y or a target term z")
        if self.z is not None and self.z.shape[0] != dimension(self.x):
            raise DimensionMismatchError(dimension(self.x), self.z.shape[0], "target term z")

    @classmethod
    def least_squares(cls, x: Vector, z) -> "Observation":
        return cls(x=x, z=as_dense(z))

    @classmethod
    def labelled(cls, x: Vector, y: float) -> "Observation":
        return cls(x=x, y=float(y))

    @property
    def dimension(self) -> int:
        return dimension(self.x)

    def target(self) -> Vector:
        """The target term ``z`` (``y * x`` when only a response was given)."""
        if self.z is not None:
            return self.z
        if isinstance(self.x, SparseVector):
            return self.x.scaled(self.y)
        return self.y * self.x


@dataclass
class IterateState:
    """Current iterate, its running average and the number of completed steps.

    The average includes the starting point: after ``n`` steps
    ``theta_bar == mean(theta_0, ..., theta_n)``. Single-owner and updated in
    place.
    """

    theta: np.ndarray
    theta_bar: np.ndarray
    n: int = 0

    @classmethod
    def start(cls, theta0) -> "IterateState":
        theta = as_dense(theta0)
        return cls(theta=theta, theta_bar=theta.copy(), n=0)

    @property
    def dimension(self) -> int:
        return int(self.theta.shape[0])

    def copy(self) -> "IterateState":
        return IterateState(self.theta.copy(), self.theta_bar.copy(), self.n)


def update_average(state: IterateState, new_theta: np.ndarray) -> IterateState:
    """Advance the step count and fold ``new_theta`` into the running average.

    Uses the incremental form ``theta_bar += (new - theta_bar) / (n + 1)`` so
    no history is stored. ``new_theta`` may be ``state.theta`` itself when a
    recursion has already written the new iterate in place.

    Raises:
        DimensionMismatchError: If ``new_theta`` has the wrong dimension
    """
    if new_theta.shape[0] != state.theta.shape[0]:
        raise DimensionMismatchError(state.theta.shape[0], new_theta.shape[0], "new iterate")
    state.n += 1
    if new_theta is not state.theta:
        state.theta[:] = new_theta
    state.theta_bar += (state.theta - state.theta_bar) / (state.n + 1)
    return state


@dataclass
class CheckpointRecorder:
    """Collects copies of a tracked vector at chosen step counts."""

    checkpoints: np.ndarray
    snapshots: list = field(default_factory=list)
    _next: int = 0

    def __post_init__(self) -> None:
        self.checkpoints = np.asarray(self.checkpoints, dtype=np.int64)

    @property
    def next_checkpoint(self) -> Optional[int]:
        if self._next < self.checkpoints.size:
            return int(self.checkpoints[self._next])
        return None

    def offer(self, step: int, vector: np.ndarray) -> None:
        """Record ``vector`` for every checkpoint equal to ``step``."""
        while self._next < self.checkpoints.size and self.checkpoints[self._next] == step:
            self.snapshots.append(vector.copy())
            self._next += 1


def log_checkpoints(n: int, per_decade: int = 50) -> np.ndarray:
    """Logarithmically spaced step counts in ``[0, n]``, always including 0 and n."""
    if n < 0:
        raise ContractViolationError(f"n must be nonnegative, got {n}")
    if per_decade < 1:
        raise ContractViolationError(f"per_decade must be positive, got {per_decade}")
    if n == 0:
        return np.array([0], dtype=np.int64)
    exponents = np.arange(0, int(np.ceil(np.log10(n) * per_decade)) + 1) / per_decade
    points = np.unique(np.round(10.0 ** exponents).astype(np.int64))
    points = points[points <= n]
    return np.unique(np.concatenate(([0], points, [n]))).astype(np.int64)


def next_observation(stream, step: int, requested: int) -> Observation:
    """Pull one observation, naming the step reached if the stream ran dry."""
    obs = next(stream, None)
    if obs is None:
        raise StreamExhaustedError(step, requested)
    return obs
