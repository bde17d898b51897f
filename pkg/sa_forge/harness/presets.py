"""Built-in experiment suites on synthetic Gaussian problems (d = 20).

- ``fig1-left``: least squares; averaged and non-averaged constant steps on
  the grid ``4^k / (4 R^2)``, plus decaying steps.
- ``fig1-middle``: logistic regression; the same families with the grid
  around ``1 / (2 R^2 sqrt(N))``.
- ``fig1-right``: logistic regression; the Newton variants against
  averaged SGD at ``1 / (2 R^2)``.
"""

from typing import Dict, List

import numpy as np

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.models.experiment import ExperimentConfig

PRESET_D = 20
DEFAULT_PRESET_N = 100_000
GRID = (-1, 0, 1)


def population_radius2(d: int) -> float:
    """``tr H`` of the synthetic covariance with eigenvalues ``1/k``."""
    return float(np.sum(1.0 / np.arange(1, d + 1)))


def _config(optimizer: str, loss: str, gamma: float, n: int, replications: int, seed: int, label: str) -> ExperimentConfig:
    return ExperimentConfig(
        dataset="synthetic",
        d=PRESET_D,
        loss=loss,
        optimizer=optimizer,
        step_rule="explicit",
        gamma=gamma,
        n=n,
        replications=replications,
        seed=seed,
        label=label,
    )


def _fig1_left(n: int, replications: int, seed: int) -> List[ExperimentConfig]:
    R2 = population_radius2(PRESET_D)
    base = 1.0 / (4.0 * R2)
    configs = []
    for k in GRID:
        gamma = base * 4.0 ** k
        configs.append(_config("lms-avg-const", "square", gamma, n, replications, seed, "avg-const"))
        configs.append(_config("sgd-nonavg-const", "square", gamma, n, replications, seed, "nonavg-const"))
    decay = 0.5 / R2
    configs.append(_config("avg-decay-sgd", "square", decay, n, replications, seed, "avg-decay"))
    configs.append(_config("sgd-nonavg-decay", "square", decay, n, replications, seed, "nonavg-decay"))
    return configs


def _fig1_middle(n: int, replications: int, seed: int) -> List[ExperimentConfig]:
    R2 = population_radius2(PRESET_D)
    base = 1.0 / (2.0 * R2 * np.sqrt(max(n, 1)))
    configs = []
    for k in GRID:
        gamma = base * 4.0 ** k
        configs.append(_config("avg-const-sgd", "logistic", gamma, n, replications, seed, "avg-const"))
        configs.append(_config("sgd-nonavg-const", "logistic", gamma, n, replications, seed, "nonavg-const"))
    decay = 0.5 / R2
    configs.append(_config("avg-decay-sgd", "logistic", decay, n, replications, seed, "avg-decay"))
    configs.append(_config("sgd-nonavg-decay", "logistic", decay, n, replications, seed, "nonavg-decay"))
    return configs


def _fig1_right(n: int, replications: int, seed: int) -> List[ExperimentConfig]:
    R2 = population_radius2(PRESET_D)
    gamma = 1.0 / (2.0 * R2)
    two_step_gamma = 1.0 / R2
    return [
        _config("newton:online", "logistic", gamma, n, replications, seed, "newton-online"),
        _config("newton:dbl-approx", "logistic", gamma, n, replications, seed, "newton-dbl-approx"),
        _config("newton:2step", "logistic", two_step_gamma, n, replications, seed, "newton-2step"),
        _config("newton:2step-dbl", "logistic", two_step_gamma, n, replications, seed, "newton-2step-dbl"),
        _config("avg-const-sgd", "logistic", gamma, n, replications, seed, "avg-const"),
    ]


PRESETS: Dict[str, object] = {
    "fig1-left": _fig1_left,
    "fig1-middle": _fig1_middle,
    "fig1-right": _fig1_right,
}


def get_preset(name: str, n: int = DEFAULT_PRESET_N, replications: int = 10, seed: int = 0) -> List[ExperimentConfig]:
    """
    Experiment configurations of a named preset.

    Raises:
        ContractViolationError: If the preset is unknown
    """
    if name not in PRESETS:
        raise ContractViolationError(f"Unknown preset '{name}'. Available: {', '.join(PRESETS)}")
    return PRESETS[name](n, replications, seed)
