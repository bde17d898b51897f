"""Tests for the dataset container."""

import dataclasses

import numpy as np
import pytest
from scipy import sparse

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.data.dataset import Dataset


def test_fields_cannot_be_reassigned():
    """A dataset is frozen once built."""
    data = Dataset(X=np.eye(2), y=[1.0, -1.0])
    with pytest.raises(dataclasses.FrozenInstanceError):
        data.y = np.zeros(2)
    with pytest.raises(dataclasses.FrozenInstanceError):
        data.name = "other"


def test_coerces_inputs():
    """Responses become float arrays and sparse covariates become CSR."""
    data = Dataset(X=sparse.coo_matrix(np.eye(3)), y=[1, -1, 1])
    assert data.y.dtype == np.float64
    assert sparse.isspmatrix_csr(data.X)


def test_observations_are_cached():
    """Observations are built once."""
    data = Dataset(X=np.eye(2), y=[1.0, -1.0])
    assert data.observations is data.observations
    assert len(data.observations) == 2


def test_row_count_mismatch():
    """Rows and responses must agree."""
    with pytest.raises(ContractViolationError):
        Dataset(X=np.eye(2), y=[1.0])
