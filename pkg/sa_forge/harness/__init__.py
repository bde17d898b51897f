"""Experiment orchestration: optimizer registry, runner, analysis and export."""

from sa_forge.harness.analysis import (
    decade_window,
    fit_loglog_slope,
    lms_bound_report,
    loglog_slope,
    verify_bound,
)
from sa_forge.harness.export import CSV_COLUMNS, export_results, read_csv_results
from sa_forge.harness.presets import PRESETS, get_preset
from sa_forge.harness.registry import Optimizer, RunContext, create_optimizer
from sa_forge.harness.risk import EmpiricalRisk, LogisticKLRisk, QuadraticRisk, RiskEvaluator
from sa_forge.harness.runner import (
    ExperimentRunner,
    ProblemSetup,
    build_setup,
    run_experiment,
    select_step_size,
)

__all__ = [
    "decade_window",
    "fit_loglog_slope",
    "lms_bound_report",
    "loglog_slope",
    "verify_bound",
    "CSV_COLUMNS",
    "export_results",
    "read_csv_results",
    "PRESETS",
    "get_preset",
    "Optimizer",
    "RunContext",
    "create_optimizer",
    "EmpiricalRisk",
    "LogisticKLRisk",
    "QuadraticRisk",
    "RiskEvaluator",
    "ExperimentRunner",
    "ProblemSetup",
    "build_setup",
    "run_experiment",
    "select_step_size",
]
