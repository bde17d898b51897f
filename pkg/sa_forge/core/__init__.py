"""Vector arithmetic, observations and iterate bookkeeping."""

from sa_forge.core.exceptions import (
    ContractViolationError,
    ConvergenceError,
    DataFormatError,
    DimensionMismatchError,
    ExperimentError,
    HypothesisViolationError,
    SaForgeError,
    StreamExhaustedError,
)
from sa_forge.core.driver import TRACK_AVERAGE, TRACK_LAST, RunTrace, run_recursion
from sa_forge.core.state import (
    CheckpointRecorder,
    IterateState,
    Observation,
    log_checkpoints,
    next_observation,
    update_average,
)
from sa_forge.core.vector import (
    SparseVector,
    Vector,
    add_scaled,
    as_dense,
    dimension,
    dot,
    max_abs,
    squared_norm,
    to_dense,
)

__all__ = [
    "TRACK_AVERAGE",
    "TRACK_LAST",
    "RunTrace",
    "run_recursion",
    "ContractViolationError",
    "ConvergenceError",
    "DataFormatError",
    "DimensionMismatchError",
    "ExperimentError",
    "HypothesisViolationError",
    "SaForgeError",
    "StreamExhaustedError",
    "CheckpointRecorder",
    "IterateState",
    "Observation",
    "log_checkpoints",
    "next_observation",
    "update_average",
    "SparseVector",
    "Vector",
    "add_scaled",
    "as_dense",
    "dimension",
    "dot",
    "max_abs",
    "squared_norm",
    "to_dense",
]
