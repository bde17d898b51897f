"""Comparison optimizers: plain SGD, SAG and Adagrad."""

from sa_forge.baselines.adagrad import (
    ADAGRAD_EPS,
    AdagradState,
    adagrad_step,
    default_adagrad_step,
    run_adagrad,
)
from sa_forge.baselines.sag import SagState, default_sag_step, run_sag, sag_step
from sa_forge.baselines.sgd import gradient_step, run_sgd, sgd_step

__all__ = [
    "ADAGRAD_EPS",
    "AdagradState",
    "adagrad_step",
    "default_adagrad_step",
    "run_adagrad",
    "SagState",
    "default_sag_step",
    "run_sag",
    "sag_step",
    "gradient_step",
    "run_sgd",
    "sgd_step",
]
