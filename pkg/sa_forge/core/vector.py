"""Dense and sparse vector arithmetic.

Dense vectors are plain ``numpy`` float64 arrays. Sparse vectors are
immutable, index-sorted ``SparseVector`` values. Iterates are always dense;
covariates may be either.
"""

from dataclasses import dataclass
from typing import Iterable, Tuple, Union

import numpy as np

from sa_forge.core.exceptions import ContractViolationError, DimensionMismatchError


@dataclass(frozen=True, eq=False)
class SparseVector:
    """Sparse vector stored as strictly increasing indices and nonzero values."""

    indices: np.ndarray
    values: np.ndarray
    dimension: int

    def __post_init__(self) -> None:
        indices = np.asarray(self.indices, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        if indices.ndim != 1 or values.ndim != 1 or indices.shape != values.shape:
            raise ContractViolationError("indices and values must be 1-d arrays of equal length")
        if self.dimension < 0:
            raise ContractViolationError(f"dimension must be nonnegative, got {self.dimension}")
        if indices.size:
            if indices[0] < 0 or indices[-1] >= self.dimension:
                raise ContractViolationError(
                    f"indices must lie in [0, {self.dimension}), got "
                    f"[{indices[0]}, {indices[-1]}]"
                )
            if np.any(np.diff(indices) <= 0):
                raise ContractViolationError("indices must be strictly increasing")
            if np.any(values == 0.0):
                raise ContractViolationError("stored values must be nonzero")
        indices.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_dense(cls, dense: Iterable[float]) -> "SparseVector":
        """Build a sparse vector from a dense array, dropping zeros."""
        arr = np.asarray(dense, dtype=np.float64)
        nz = np.flatnonzero(arr)
        return cls(nz, arr[nz], arr.shape[0])

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, float]], dimension: int) -> "SparseVector":
        """Build a sparse vector from ``(index, value)`` pairs; zero values are skipped."""
        kept = [(int(i), float(v)) for i, v in pairs if v != 0.0]
        if not kept:
            return cls(np.empty(0, np.int64), np.empty(0), dimension)
        idx, vals = zip(*kept)
        return cls(np.array(idx), np.array(vals), dimension)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dimension)
        out[self.indices] = self.values
        return out

    def scaled(self, factor: float) -> "SparseVector":
        """Return ``factor * self``."""
        if factor == 0.0:
            return SparseVector(np.empty(0, np.int64), np.empty(0), self.dimension)
        return SparseVector(self.indices, self.values * factor, self.dimension)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash((self.dimension, self.indices.tobytes(), self.values.tobytes()))


Vector = Union[np.ndarray, SparseVector]


def dimension(v: Vector) -> int:
    """Ambient dimension of a dense or sparse vector."""
    if isinstance(v, SparseVector):
        return v.dimension
    return int(v.shape[0])


def _check_dims(a: Vector, b: Vector) -> None:
    da, db = dimension(a), dimension(b)
    if da != db:
        raise DimensionMismatchError(da, db)


def dot(a: Vector, b: Vector) -> float:
    """Inner product of two vectors.

    Sparse operands only touch their stored entries, so a sparse-dense product
    costs O(nnz).

    Raises:
        DimensionMismatchError: If the dimensions differ
    """
    _check_dims(a, b)
    a_sparse = isinstance(a, SparseVector)
    b_sparse = isinstance(b, SparseVector)
    if a_sparse and b_sparse:
        _, ia, ib = np.intersect1d(a.indices, b.indices, assume_unique=True, return_indices=True)
        return float(np.dot(a.values[ia], b.values[ib]))
    if a_sparse:
        return float(np.dot(a.values, b[a.indices]))
    if b_sparse:
        return float(np.dot(b.values, a[b.indices]))
    return float(np.dot(a, b))


def add_scaled(target: np.ndarray, coef: float, x: Vector) -> None:
    """In-place ``target += coef * x`` on a dense target (the axpy kernel)."""
    _check_dims(target, x)
    if coef == 0.0:
        return
    if isinstance(x, SparseVector):
        target[x.indices] += coef * x.values
    else:
        target += coef * x


def squared_norm(x: Vector) -> float:
    values = x.values if isinstance(x, SparseVector) else x
    return float(np.dot(values, values))


def max_abs(x: Vector) -> float:
    """Infinity norm."""
    values = x.values if isinstance(x, SparseVector) else x
    return float(np.max(np.abs(values))) if values.size else 0.0


def to_dense(x: Vector) -> np.ndarray:
    if isinstance(x, SparseVector):
        return x.to_dense()
    return np.asarray(x, dtype=np.float64)


def as_dense(values: Iterable[float]) -> np.ndarray:
    """Coerce to a fresh 1-d float64 array."""
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ContractViolationError(f"expected a 1-d vector, got shape {arr.shape}")
    return arr
