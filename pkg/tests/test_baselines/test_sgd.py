"""Tests for plain and averaged SGD."""

import numpy as np
import pytest

from sa_forge.baselines.sgd import gradient_step, run_sgd, sgd_step
from sa_forge.core.exceptions import StreamExhaustedError
from sa_forge.core.state import IterateState, Observation
from sa_forge.lms.recursion import StepSchedule, lms_step
from sa_forge.losses.models import LOGISTIC, SQUARE


def _repeat(obs, count):
    return [obs] * count


class TestGradientStep:
    """Test one gradient step."""

    def test_logistic_at_zero(self):
        state = gradient_step(IterateState.start([0.0, 0.0]), Observation.labelled(np.array([2.0, 0.0]), -1.0), 0.5, LOGISTIC)
        # l'(-1, 0) = 1/2, so theta = -0.5 * 0.5 * x
        np.testing.assert_allclose(state.theta, [-0.5, 0.0])


class TestSgdStep:
    """Test the scheduled step."""

    def test_square_loss_matches_lms(self, rng):
        x, y = rng.standard_normal(4), 0.7
        theta0 = rng.standard_normal(4)
        sgd = sgd_step(IterateState.start(theta0), Observation.labelled(x, y), StepSchedule.constant(0.1), SQUARE)
        lms = lms_step(IterateState.start(theta0), Observation.labelled(x, y), 0.1)

        np.testing.assert_allclose(sgd.theta, lms.theta, rtol=0, atol=1e-15)
        np.testing.assert_allclose(sgd.theta_bar, lms.theta_bar, rtol=0, atol=1e-15)

    def test_decaying_uses_next_step_index(self):
        obs = Observation.labelled(np.array([1.0]), 0.0)
        state = IterateState.start([1.0])
        state = sgd_step(state, obs, StepSchedule.decaying(C=0.5, R2=1.0), SQUARE)
        # gamma_1 = 0.5
        assert state.theta[0] == pytest.approx(0.5)
        state = sgd_step(state, obs, StepSchedule.decaying(C=0.5, R2=1.0), SQUARE)
        # gamma_2 = 0.5 / sqrt(2)
        assert state.theta[0] == pytest.approx(0.5 * (1 - 0.5 / np.sqrt(2)))


class TestRunSgd:
    """Test averaged and last-iterate runs on a one-dimensional problem."""

    def test_constant_step(self):
        obs = Observation.labelled(np.array([1.0]), 1.0)
        averaged = run_sgd(iter(_repeat(obs, 2)), StepSchedule.constant(0.5), 2, SQUARE, [0.0])
        last = run_sgd(iter(_repeat(obs, 2)), StepSchedule.constant(0.5), 2, SQUARE, [0.0], averaged=False)
        # iterates 0, 0.5, 0.75
        assert last.final[0] == pytest.approx(0.75)
        assert averaged.final[0] == pytest.approx(1.25 / 3)

    def test_decaying_step(self):
        obs = Observation.labelled(np.array([1.0]), 1.0)
        trace = run_sgd(iter(_repeat(obs, 2)), StepSchedule.decaying(C=1.0, R2=1.0), 2, SQUARE, [0.0], [0, 1, 2])
        # gamma_1 = 1 jumps straight to the optimum
        np.testing.assert_allclose(trace.iterates.ravel(), [0.0, 0.5, 2.0 / 3.0])

    def test_exhausted(self):
        obs = Observation.labelled(np.array([1.0]), 1.0)
        with pytest.raises(StreamExhaustedError):
            run_sgd(iter(_repeat(obs, 2)), StepSchedule.constant(0.1), 3, SQUARE, [0.0])
