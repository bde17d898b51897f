"""Custom exceptions for sa-forge."""

from typing import Optional


class SaForgeError(Exception):
    """Base exception for all sa-forge errors."""
    pass


class ContractViolationError(SaForgeError, ValueError):
    """A precondition of an operation does not hold (dimension, label, range)."""
    pass


class DimensionMismatchError(ContractViolationError):
    """Two vectors that must share a dimension do not."""

    def __init__(self, expected: int, actual: int, what: str = "vector"):
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"Dimension mismatch for {what}: expected {expected}, got {actual}"
        )


class HypothesisViolationError(ContractViolationError):
    """A theorem's hypothesis (usually on the step-size) is violated."""

    def __init__(self, hypothesis: str, value: float, limit: float):
        self.hypothesis = hypothesis
        self.value = value
        self.limit = limit
        super().__init__(
            f"Hypothesis violated: {hypothesis} (got {value:.6g}, limit {limit:.6g})"
        )


class StreamExhaustedError(SaForgeError):
    """An observation stream ended before the requested number of steps."""

    def __init__(self, step: int, requested: int):
        self.step = step
        self.requested = requested
        super().__init__(
            f"Observation stream exhausted at step {step} of {requested}"
        )


class DataFormatError(SaForgeError):
    """Malformed dataset file."""

    def __init__(self, path: str, line: Optional[int], reason: str):
        self.path = path
        self.line = line
        self.reason = reason
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"Malformed data in {where}: {reason}")


class ConvergenceError(SaForgeError):
    """An iterative solver hit its iteration cap."""

    def __init__(self, iterations: int, grad_norm: float):
        self.iterations = iterations
        self.grad_norm = grad_norm
        super().__init__(
            f"No convergence after {iterations} iterations "
            f"(final gradient norm {grad_norm:.3e})"
        )


class ExperimentError(SaForgeError):
    """An optimizer or data error raised while running an experiment."""

    def __init__(self, context: str, cause: Exception):
        self.context = context
        self.cause = cause
        super().__init__(f"{context}: {cause}")
