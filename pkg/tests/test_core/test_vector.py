"""Tests for dense and sparse vector arithmetic."""

import numpy as np
import pytest

from sa_forge.core.exceptions import ContractViolationError, DimensionMismatchError
from sa_forge.core.vector import (
    SparseVector,
    add_scaled,
    as_dense,
    dimension,
    dot,
    max_abs,
    squared_norm,
    to_dense,
)


class TestSparseVector:
    """Test SparseVector construction and validation."""

    def test_from_dense_drops_zeros(self):
        v = SparseVector.from_dense([0.0, 2.0, 0.0, -1.0])
        assert v.nnz == 2
        assert v.indices.tolist() == [1, 3]
        assert v.values.tolist() == [2.0, -1.0]
        assert v.dimension == 4

    def test_from_pairs_skips_zero_values(self):
        v = SparseVector.from_pairs([(0, 1.0), (5, 0.0), (7, 3.0)], 10)
        assert v.indices.tolist() == [0, 7]

    def test_from_pairs_empty(self):
        v = SparseVector.from_pairs([], 3)
        assert v.nnz == 0
        assert to_dense(v).tolist() == [0.0, 0.0, 0.0]

    def test_rejects_unsorted_indices(self):
        with pytest.raises(ContractViolationError):
            SparseVector(np.array([3, 1]), np.array([1.0, 2.0]), 5)

    def test_rejects_out_of_range_index(self):
        with pytest.raises(ContractViolationError):
            SparseVector(np.array([5]), np.array([1.0]), 5)

    def test_rejects_stored_zero(self):
        with pytest.raises(ContractViolationError):
            SparseVector(np.array([0]), np.array([0.0]), 2)

    def test_arrays_are_read_only(self):
        v = SparseVector.from_dense([1.0, 2.0])
        with pytest.raises(ValueError):
            v.values[0] = 5.0

    def test_equality_and_hash(self):
        a = SparseVector.from_dense([0.0, 1.5])
        b = SparseVector.from_pairs([(1, 1.5)], 2)
        assert a == b
        assert hash(a) == hash(b)

    def test_scaled_by_zero_is_empty(self):
        v = SparseVector.from_dense([1.0, 2.0]).scaled(0.0)
        assert v.nnz == 0


class TestDot:
    """Test the inner product on every operand combination."""

    def test_dense_hand_arithmetic(self):
        assert dot(np.array([1.0, 2.0]), np.array([3.0, 4.0])) == 11.0

    def test_zero_vector(self, rng):
        v = rng.standard_normal(6)
        assert dot(v, np.zeros(6)) == 0.0

    def test_sparse_dense_touches_stored_entries(self):
        s = SparseVector(np.array([0, 999]), np.array([1.0, 2.0]), 1000)
        e = np.zeros(1000)
        e[999] = 5.0
        assert dot(s, e) == 10.0
        assert dot(e, s) == 10.0

    def test_sparse_sparse(self):
        a = SparseVector.from_pairs([(0, 1.0), (3, 2.0)], 5)
        b = SparseVector.from_pairs([(3, 4.0), (4, 1.0)], 5)
        assert dot(a, b) == 8.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError) as exc_info:
            dot(np.ones(3), np.ones(4))
        assert exc_info.value.expected == 3
        assert exc_info.value.actual == 4

    def test_symmetric_and_bilinear(self, rng):
        for _ in range(20):
            a, b, c = rng.standard_normal((3, 8))
            s, t = rng.standard_normal(2)
            assert dot(a, b) == pytest.approx(dot(b, a), rel=1e-12)
            assert dot(s * a + t * b, c) == pytest.approx(s * dot(a, c) + t * dot(b, c), rel=1e-10, abs=1e-12)

    def test_sparse_matches_dense(self, rng):
        dense = rng.standard_normal(50) * (rng.random(50) < 0.2)
        other = rng.standard_normal(50)
        assert dot(SparseVector.from_dense(dense), other) == pytest.approx(dot(dense, other), rel=1e-12)


class TestKernels:
    """Test axpy, norms and conversions."""

    def test_add_scaled_dense(self):
        target = np.array([1.0, 1.0])
        add_scaled(target, 2.0, np.array([1.0, -1.0]))
        assert target.tolist() == [3.0, -1.0]

    def test_add_scaled_sparse_only_touches_indices(self):
        target = np.ones(4)
        add_scaled(target, -1.0, SparseVector.from_pairs([(2, 3.0)], 4))
        assert target.tolist() == [1.0, 1.0, -2.0, 1.0]

    def test_add_scaled_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            add_scaled(np.ones(2), 1.0, np.ones(3))

    def test_norms(self):
        s = SparseVector.from_pairs([(1, -3.0), (2, 4.0)], 3)
        assert squared_norm(s) == 25.0
        assert max_abs(s) == 4.0
        assert max_abs(SparseVector.from_pairs([], 3)) == 0.0

    def test_dimension(self):
        assert dimension(np.zeros(7)) == 7
        assert dimension(SparseVector.from_pairs([], 9)) == 9

    def test_as_dense_rejects_matrix(self):
        with pytest.raises(ContractViolationError):
            as_dense(np.zeros((2, 2)))
