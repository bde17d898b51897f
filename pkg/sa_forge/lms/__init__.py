"""Averaged least-mean-squares recursions and their non-asymptotic bounds."""

from sa_forge.lms.bounds import (
    BoundParams,
    corollary_tail_threshold,
    theorem1_bound,
    theorem2_pmoment_bound,
    theorem2_special_case_bound,
)
from sa_forge.lms.recursion import (
    ScheduleKind,
    StepSchedule,
    lms_step,
    run_averaged_lms,
    run_decaying_lms,
)
from sa_forge.lms.semistochastic import semistochastic_bound, run_semistochastic

__all__ = [
    "BoundParams",
    "corollary_tail_threshold",
    "theorem1_bound",
    "theorem2_pmoment_bound",
    "theorem2_special_case_bound",
    "ScheduleKind",
    "StepSchedule",
    "lms_step",
    "run_averaged_lms",
    "run_decaying_lms",
    "semistochastic_bound",
    "run_semistochastic",
]
