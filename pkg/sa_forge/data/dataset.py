"""Dataset containers."""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np
from scipy import sparse

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.core.state import Observation
from sa_forge.core.vector import SparseVector


class ModelKind(str, Enum):
    LSQ = "lsq"
    LOGISTIC = "logistic"


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of a synthetic problem draw."""

    d: int
    n: int
    seed: int = 0
    model: ModelKind = ModelKind.LSQ

    def __post_init__(self) -> None:
        if self.d < 1 or self.n < 1:
            raise ContractViolationError(f"d and n must be >= 1, got d={self.d}, n={self.n}")
        object.__setattr__(self, "model", ModelKind(self.model))


@dataclass(frozen=True)
class GroundTruth:
    """Known optimum, covariate covariance and noise level of a synthetic problem.

    ``sigma`` is the noise standard deviation for least-squares and ``None``
    for logistic problems.
    """

    theta_star: np.ndarray
    covariance: np.ndarray
    sigma: Optional[float] = None


@dataclass(frozen=True, eq=False)
class Dataset:
    """Covariates (dense array or CSR matrix) with responses.

    Frozen after construction; observations are materialized lazily and cached.
    """

    X: object
    y: np.ndarray
    ground_truth: Optional[GroundTruth] = None
    name: str = "dataset"
    _observations: Optional[List[Observation]] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "y", np.asarray(self.y, dtype=np.float64))
        if self.X.shape[0] != self.y.shape[0]:
            raise ContractViolationError(
                f"{self.X.shape[0]} covariate rows but {self.y.shape[0]} responses"
            )
        if sparse.issparse(self.X):
            X = sparse.csr_matrix(self.X, dtype=np.float64)
            X.sort_indices()
            X.eliminate_zeros()
        else:
            X = np.asarray(self.X, dtype=np.float64)
        object.__setattr__(self, "X", X)

    @property
    def n(self) -> int:
        return int(self.X.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.X.shape[1])

    @property
    def is_sparse(self) -> bool:
        return sparse.issparse(self.X)

    @property
    def is_synthetic(self) -> bool:
        return self.ground_truth is not None

    @property
    def nnz(self) -> int:
        return int(self.X.nnz) if self.is_sparse else int(np.count_nonzero(self.X))

    @property
    def sparsity(self) -> float:
        """Fraction of stored nonzeros, ``nnz / (n d)``."""
        cells = self.n * self.dimension
        return self.nnz / cells if cells else 0.0

    def row(self, i: int):
        if self.is_sparse:
            start, end = self.X.indptr[i], self.X.indptr[i + 1]
            return SparseVector(self.X.indices[start:end], self.X.data[start:end], self.dimension)
        return self.X[i]

    @property
    def observations(self) -> List[Observation]:
        if self._observations is None:
            object.__setattr__(self, "_observations", [Observation.labelled(self.row(i), self.y[i]) for i in range(self.n)])
        return self._observations

    def row_norms(self) -> np.ndarray:
        if self.is_sparse:
            return np.sqrt(np.asarray(self.X.multiply(self.X).sum(axis=1)).ravel())
        return np.linalg.norm(self.X, axis=1)

    def subset(self, indices, name: Optional[str] = None) -> "Dataset":
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(
            X=self.X[indices],
            y=self.y[indices],
            ground_truth=self.ground_truth,
            name=name or self.name,
        )

    def scaled(self, factor: float) -> "Dataset":
        """Copy with every covariate multiplied by ``factor``."""
        return Dataset(X=self.X * factor, y=self.y.copy(), ground_truth=None, name=self.name)
