"""Stochastic quadratic-approximation (online Newton) schemes."""

from sa_forge.newton.bounds import NewtonBoundParams, theorem3_bound
from sa_forge.newton.policies import SupportPolicy, run_online_newton, run_two_step
from sa_forge.newton.surrogate import surrogate_step

__all__ = [
    "NewtonBoundParams",
    "theorem3_bound",
    "SupportPolicy",
    "run_online_newton",
    "run_two_step",
    "surrogate_step",
]
