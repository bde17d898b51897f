"""Experiment configuration, risk curves and bound reports."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from sa_forge.core.exceptions import ContractViolationError

OPTIMIZER_IDS = (
    "avg-const-sgd",
    "avg-decay-sgd",
    "sgd-nonavg-const",
    "sgd-nonavg-decay",
    "lms-avg-const",
    "newton:2step",
    "newton:2step-dbl",
    "newton:dbl-approx",
    "newton:online",
    "sag",
    "adagrad",
)

STEP_RULES = ("theoretical", "grid", "explicit")
SYNTHETIC = "synthetic"


class ExperimentConfig(BaseModel):
    """One optimizer on one dataset with a step-size rule.

    ``dataset`` is ``synthetic`` (a Gaussian problem of dimension ``d``) or
    the path of a libsvm file. The budget is ``n`` steps, or ``passes``
    effective passes over the training half of a real dataset.
    """

    model_config = ConfigDict(extra="forbid")

    dataset: str = Field(default=SYNTHETIC)
    d: int = Field(default=20, ge=1)
    loss: str = Field(default="square")
    optimizer: str
    step_rule: str = Field(default="theoretical")
    gamma: Optional[float] = Field(default=None, gt=0.0)
    step_multiplier: float = Field(default=1.0, gt=0.0)
    grid_exponents: List[int] = Field(default_factory=lambda: [-2, -1, 0, 1, 2])
    n: Optional[int] = Field(default=None, ge=0)
    passes: Optional[float] = Field(default=None, gt=0.0)
    replications: int = Field(default=10, ge=1)
    seed: int = Field(default=0, ge=0)
    checkpoints_per_decade: int = Field(default=50, ge=1)
    theta0_perturbation: Optional[float] = Field(default=None, ge=0.0)
    label: Optional[str] = None

    @field_validator("loss")
    @classmethod
    def validate_loss(cls, v):
        if v.lower() not in ("square", "logistic"):
            raise ValueError("Loss must be 'square' or 'logistic'")
        return v.lower()

    @field_validator("optimizer")
    @classmethod
    def validate_optimizer(cls, v):
        if v not in OPTIMIZER_IDS:
            raise ValueError(f"Optimizer must be one of {list(OPTIMIZER_IDS)}")
        return v

    @field_validator("step_rule")
    @classmethod
    def validate_step_rule(cls, v):
        if v not in STEP_RULES:
            raise ValueError(f"Step rule must be one of {list(STEP_RULES)}")
        return v

    @model_validator(mode="after")
    def check_consistency(self) -> "ExperimentConfig":
        if self.step_rule == "explicit" and self.gamma is None:
            raise ValueError("Explicit step rule needs gamma")
        if self.step_rule == "grid" and not self.grid_exponents:
            raise ValueError("Grid step rule needs at least one exponent")
        if self.n is not None and self.passes is not None:
            raise ValueError("Give either n or passes, not both")
        if self.is_synthetic and self.n is None:
            raise ValueError("Synthetic experiments need n")
        if self.optimizer == "lms-avg-const" and self.loss != "square":
            raise ValueError("lms-avg-const runs on the square loss only")
        if self.theta0_perturbation is not None and not self.is_synthetic:
            raise ValueError("theta0_perturbation needs a synthetic dataset")
        return self

    @property
    def is_synthetic(self) -> bool:
        return self.dataset == SYNTHETIC

    @property
    def name(self) -> str:
        return self.label or self.optimizer

    @classmethod
    def from_file(cls, path: Path) -> "ExperimentConfig":
        """
        Load an experiment from a YAML mapping.

        Raises:
            FileNotFoundError: If the file does not exist
            ContractViolationError: If the file is not valid YAML or not a mapping
            pydantic.ValidationError: On unknown keys or invalid values
        """
        path = Path(path)
        with open(path, "r") as f:
            try:
                data = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ContractViolationError(f"Error parsing experiment file {path}: {e}")
        if not isinstance(data, dict):
            raise ContractViolationError(f"Experiment file {path} must contain a mapping")
        return cls(**data)


def _stderr(values: np.ndarray) -> np.ndarray:
    if values.shape[0] < 2:
        return np.zeros(values.shape[1])
    return values.std(axis=0, ddof=1) / np.sqrt(values.shape[0])


def _normalize(values: np.ndarray) -> np.ndarray:
    out = values.copy()
    anchor = values[:, 0]
    positive = anchor > 0
    out[positive] = values[positive] / anchor[positive, None]
    return out


@dataclass
class RiskCurve:
    """Excess risk of one optimizer at one step size, per replication and checkpoint.

    ``train`` and ``test`` hold raw excess risks with shape
    ``(replications, checkpoints)``. Normalized values divide each
    replication by its value at checkpoint 0, so they start at exactly 1;
    a replication that starts at the optimum is left unscaled.
    """

    optimizer: str
    gamma: float
    checkpoints: np.ndarray
    train: np.ndarray
    test: np.ndarray
    first_pass: Optional[int] = None

    def __post_init__(self) -> None:
        self.checkpoints = np.asarray(self.checkpoints, dtype=np.int64)
        self.train = np.atleast_2d(np.asarray(self.train, dtype=np.float64))
        self.test = np.atleast_2d(np.asarray(self.test, dtype=np.float64))
        if self.checkpoints.size > 1 and np.any(np.diff(self.checkpoints) <= 0):
            raise ContractViolationError("checkpoint sample counts must be strictly increasing")
        if self.train.shape != self.test.shape or self.train.shape[1] != self.checkpoints.size:
            raise ContractViolationError(
                f"risk arrays {self.train.shape}/{self.test.shape} do not match "
                f"{self.checkpoints.size} checkpoints"
            )

    @property
    def replications(self) -> int:
        return int(self.train.shape[0])

    @property
    def normalization(self) -> Tuple[np.ndarray, np.ndarray]:
        """Per-replication ``f(theta_0) - f_*`` on train and test."""
        return self.train[:, 0].copy(), self.test[:, 0].copy()

    def normalized(self, split: str = "train") -> np.ndarray:
        return _normalize(self._split(split))

    def mean(self, split: str = "train", normalized: bool = True) -> np.ndarray:
        values = self.normalized(split) if normalized else self._split(split)
        return values.mean(axis=0)

    def stderr(self, split: str = "train", normalized: bool = True) -> np.ndarray:
        values = self.normalized(split) if normalized else self._split(split)
        return _stderr(values)

    def _split(self, split: str) -> np.ndarray:
        if split == "train":
            return self.train
        if split == "test":
            return self.test
        raise ContractViolationError(f"split must be 'train' or 'test', got '{split}'")


@dataclass
class BoundReport:
    """Mean + 2 stderr of the raw excess risk against a bound, per checkpoint."""

    checkpoints: np.ndarray
    upper: np.ndarray
    bound: np.ndarray
    violations: List[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def rows(self) -> List[Dict[str, Any]]:
        return [
            {"n": int(n), "upper": float(u), "bound": float(b)}
            for n, u, b in zip(self.checkpoints, self.upper, self.bound)
        ]
