"""Tests for the stochastic average gradient baseline."""

import numpy as np
import pytest

from sa_forge.baselines.sag import SagState, default_sag_step, run_sag, sag_step
from sa_forge.core.exceptions import ContractViolationError, StreamExhaustedError
from sa_forge.core.state import Observation
from sa_forge.data.dataset import Dataset
from sa_forge.losses.models import LOGISTIC, SQUARE


@pytest.fixture
def lsq_data(rng) -> Dataset:
    X = rng.standard_normal((20, 2))
    y = X @ np.array([1.0, -1.0]) + 0.1 * rng.standard_normal(20)
    return Dataset(X=X, y=y)


class TestSagStep:
    """Test the incremental update."""

    def test_sum_is_divided_by_all_examples(self):
        data = [
            Observation.labelled(np.array([1.0, 0.0]), 1.0),
            Observation.labelled(np.array([0.0, 1.0]), 1.0),
        ]
        state = SagState.start_for(np.zeros(2), 2)
        sag_step(state, data, 0, 1.0, LOGISTIC)
        # stored gradient -0.5 e1 over two examples
        np.testing.assert_allclose(state.theta, [0.25, 0.0])
        assert state.grads.tolist() == [-0.5, 0.0]

    def test_replaces_stored_gradient(self):
        data = [Observation.labelled(np.array([1.0]), 2.0)]
        state = SagState.start_for(np.zeros(1), 1)
        sag_step(state, data, 0, 0.5, SQUARE)
        sag_step(state, data, 0, 0.5, SQUARE)
        # theta 0 -> 1 -> 1.5 with the stored gradient overwritten each time
        assert state.theta[0] == pytest.approx(1.5)
        assert state.grads[0] == pytest.approx(-1.0)


class TestRunSag:
    """Test full runs."""

    def test_converges_to_empirical_minimizer(self, lsq_data):
        R2 = float(np.max(lsq_data.row_norms() ** 2))
        trace = run_sag(lsq_data.observations, default_sag_step(R2), 500, SQUARE, rng=np.random.default_rng(0))
        expected = np.linalg.lstsq(lsq_data.X, lsq_data.y, rcond=None)[0]
        np.testing.assert_allclose(trace.final, expected, atol=1e-6)

    def test_gradient_sum_stays_consistent(self, lsq_data):
        trace = run_sag(lsq_data.observations, 0.01, 50, SQUARE, rng=np.random.default_rng(1))
        assert trace.state.audit(lsq_data.observations) <= 1e-8

    def test_seeded_runs_repeat(self, lsq_data):
        a = run_sag(lsq_data.observations, 0.01, 2, SQUARE, rng=np.random.default_rng(5), checkpoints=[0, 20, 40])
        b = run_sag(lsq_data.observations, 0.01, 2, SQUARE, rng=np.random.default_rng(5), checkpoints=[0, 20, 40])
        np.testing.assert_array_equal(a.iterates, b.iterates)

    def test_index_stream_exhausted(self, lsq_data):
        with pytest.raises(StreamExhaustedError):
            run_sag(lsq_data.observations, 0.01, 1, SQUARE, indices=[0, 1])

    def test_empty_dataset(self):
        with pytest.raises(ContractViolationError):
            run_sag([], 0.1, 1, SQUARE)

    def test_default_step(self):
        assert default_sag_step(4.0) == pytest.approx(1.0 / 64.0)
