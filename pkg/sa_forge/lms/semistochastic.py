"""Semi-stochastic recursion ``alpha_n = (I - gamma H) alpha_{n-1} + gamma xi_n``.

The random rank-one ``x x^T`` of LMS is replaced by its expectation ``H``;
only the noise stays random. Used as a reference oracle in tests.
"""

from typing import Iterable

import numpy as np

from sa_forge.core.exceptions import (
    ContractViolationError,
    HypothesisViolationError,
    StreamExhaustedError,
)
from sa_forge.core.state import IterateState, update_average
from sa_forge.core.vector import as_dense


def _spectrum(H: np.ndarray) -> np.ndarray:
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ContractViolationError(f"H must be square, got shape {H.shape}")
    if not np.allclose(H, H.T):
        raise ContractViolationError("H must be symmetric")
    eigs = np.linalg.eigvalsh(H)
    if eigs[0] < -1e-12 * max(1.0, abs(eigs[-1])):
        raise ContractViolationError(f"H is not positive semi-definite (min eigenvalue {eigs[0]:.3e})")
    return eigs


def run_semistochastic(
    H, xi_stream: Iterable, gamma: float, n: int, alpha0
) -> np.ndarray:
    """Return the average ``(1/n) sum_{k<n} alpha_k`` of the first ``n`` iterates.

    Runs ``n - 1`` recursion steps; ``n = 1`` returns ``alpha0``.

    Raises:
        HypothesisViolationError: If ``gamma * lambda_max(H) > 1``
        StreamExhaustedError: If the noise stream runs dry
    """
    H = np.asarray(H, dtype=np.float64)
    eigs = _spectrum(H)
    if gamma < 0:
        raise ContractViolationError(f"step-size must be nonnegative, got {gamma}")
    if gamma * eigs[-1] > 1.0 + 1e-12:
        raise HypothesisViolationError("gamma * lambda_max(H) <= 1", gamma * eigs[-1], 1.0)
    if n < 1:
        raise ContractViolationError(f"n must be >= 1, got {n}")
    state = IterateState.start(alpha0)
    if state.dimension != H.shape[0]:
        raise ContractViolationError("alpha0 and H dimensions differ")
    it = iter(xi_stream)
    for k in range(1, n):
        xi = next(it, None)
        if xi is None:
            raise StreamExhaustedError(k - 1, n - 1)
        new = state.theta - gamma * (H @ state.theta) + gamma * as_dense(xi)
        update_average(state, new)
    return state.theta_bar.copy()


def semistochastic_bound(alpha0, noise_cov, H, gamma: float, n: int) -> float:
    """Bound ``||alpha0||^2 / (n gamma) + tr(C H^{-1}) / n`` on ``E <alpha_bar, H alpha_bar>``."""
    H = np.asarray(H, dtype=np.float64)
    alpha0 = as_dense(alpha0)
    trace_term = float(np.trace(np.linalg.solve(H, np.asarray(noise_cov, dtype=np.float64))))
    initial = float(alpha0 @ alpha0) / (n * gamma) if gamma > 0 else (0.0 if not alpha0.any() else np.inf)
    return initial + trace_term / n
