"""Data models for sa-forge."""

from sa_forge.models.experiment import OPTIMIZER_IDS, BoundReport, ExperimentConfig, RiskCurve

__all__ = ["OPTIMIZER_IDS", "BoundReport", "ExperimentConfig", "RiskCurve"]
