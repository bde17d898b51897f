"""Tests for the support-point policies."""

import math

import numpy as np
import pytest

from sa_forge.baselines.sgd import run_sgd
from sa_forge.core.exceptions import ContractViolationError, StreamExhaustedError
from sa_forge.core.state import Observation, log_checkpoints
from sa_forge.data.dataset import ModelKind
from sa_forge.data.rng import StreamRole, make_rng
from sa_forge.data.synthetic import make_population
from sa_forge.lms.recursion import StepSchedule, run_averaged_lms
from sa_forge.losses.models import LOGISTIC, SQUARE
from sa_forge.newton.policies import SupportPolicy, run_online_newton, run_two_step


def _observations(model_kind, d, count, seed=1):
    population = make_population(d, model_kind, seed)
    stream = population.stream(make_rng(seed, 0, StreamRole.DATA), chunk=256)
    return population, [next(stream) for _ in range(count)]


class TestSupportPolicy:
    """Test policy lookup."""

    @pytest.mark.parametrize(
        "name,policy",
        [
            ("online", SupportPolicy.CURRENT_AVERAGE),
            ("dbl-approx", SupportPolicy.DOUBLING_APPROX),
            ("2step", SupportPolicy.TWO_STEP),
            ("2step-dbl", SupportPolicy.TWO_STEP_DOUBLING),
            ("two_step", SupportPolicy.TWO_STEP),
        ],
    )
    def test_from_name(self, name, policy):
        assert SupportPolicy.from_name(name) is policy

    def test_unknown(self):
        with pytest.raises(ContractViolationError):
            SupportPolicy.from_name("bfgs")


class TestSquareLossIdentity:
    """On the square loss the quadratic model is exact."""

    @pytest.mark.parametrize("policy", [SupportPolicy.CURRENT_AVERAGE, SupportPolicy.DOUBLING_APPROX])
    def test_reproduces_averaged_lms(self, policy):
        population, observations = _observations(ModelKind.LSQ, 5, 10_000)
        gamma = 1.0 / (4.0 * population.radius2)
        checkpoints = log_checkpoints(10_000, 10)
        newton = run_online_newton(iter(observations), gamma, 10_000, policy, SQUARE, np.zeros(5), checkpoints)
        lms = run_averaged_lms(iter(observations), gamma, 10_000, np.zeros(5), checkpoints)
        np.testing.assert_allclose(newton.iterates, lms.iterates, rtol=0, atol=1e-12)

    def test_two_step_second_phase_is_lms(self):
        population, observations = _observations(ModelKind.LSQ, 3, 200)
        R = math.sqrt(population.radius2)
        trace = run_online_newton(iter(observations), 0.0, 200, SupportPolicy.TWO_STEP, SQUARE, np.zeros(3), R=R)
        first = run_sgd(
            iter(observations[:100]),
            StepSchedule.constant(1.0 / (2.0 * population.radius2 * math.sqrt(100))),
            100,
            SQUARE,
            np.zeros(3),
        )
        second = run_averaged_lms(iter(observations[100:]), 1.0 / population.radius2, 100, first.final)
        np.testing.assert_allclose(trace.final, second.final, rtol=0, atol=1e-12)

    @pytest.mark.parametrize("policy", [SupportPolicy.TWO_STEP, SupportPolicy.TWO_STEP_DOUBLING])
    def test_two_step_ignores_gamma(self, policy):
        population, observations = _observations(ModelKind.LSQ, 3, 64)
        R = math.sqrt(population.radius2)
        small = run_online_newton(iter(observations), 1e-4, 64, policy, SQUARE, np.zeros(3), R=R)
        large = run_online_newton(iter(observations), 0.5 / population.radius2, 64, policy, SQUARE, np.zeros(3), R=R)
        np.testing.assert_array_equal(small.final, large.final)

    def test_two_step_doubling_first_block_is_one_lms_step(self):
        population, observations = _observations(ModelKind.LSQ, 3, 3)
        R = math.sqrt(population.radius2)
        trace = run_online_newton(
            iter(observations), 0.0, 3, SupportPolicy.TWO_STEP_DOUBLING, SQUARE, np.zeros(3), range(4), R=R
        )
        lms = run_averaged_lms(iter(observations[:1]), 1.0 / population.radius2, 1, np.zeros(3))
        np.testing.assert_allclose(trace.iterates[1], lms.final, rtol=0, atol=1e-12)


class TestRunOnlineNewton:
    """Test policy bookkeeping."""

    def test_current_average_first_step(self):
        obs = Observation.labelled(np.array([1.0, 0.0]), 1.0)
        trace = run_online_newton(iter([obs]), 1.0, 1, "online", LOGISTIC, np.zeros(2))
        # support 0: l' = -1/2, l'' = 1/4, theta = 0.5 e1, average 0.25 e1
        np.testing.assert_allclose(trace.state.theta, [0.5, 0.0])
        np.testing.assert_allclose(trace.final, [0.25, 0.0])

    def test_doubling_refreshes_at_powers_of_two(self):
        _, observations = _observations(ModelKind.LOGISTIC, 3, 9)
        a = run_online_newton(iter(observations), 0.3, 2, SupportPolicy.DOUBLING_APPROX, LOGISTIC, np.zeros(3))
        b = run_online_newton(iter(observations), 0.3, 2, SupportPolicy.CURRENT_AVERAGE, LOGISTIC, np.zeros(3))
        # steps 1 and 2 both use the current average as support
        np.testing.assert_allclose(a.final, b.final, atol=1e-15)
        c = run_online_newton(iter(observations), 0.3, 3, SupportPolicy.DOUBLING_APPROX, LOGISTIC, np.zeros(3))
        d = run_online_newton(iter(observations), 0.3, 3, SupportPolicy.CURRENT_AVERAGE, LOGISTIC, np.zeros(3))
        assert not np.allclose(c.final, d.final)

    def test_two_step_needs_radius(self):
        with pytest.raises(ContractViolationError):
            run_online_newton(iter([]), 0.1, 4, SupportPolicy.TWO_STEP, LOGISTIC, np.zeros(2))

    def test_two_step_doubling_records_completed_blocks(self):
        population, observations = _observations(ModelKind.LOGISTIC, 3, 7)
        R = math.sqrt(population.radius2)
        trace = run_online_newton(
            iter(observations), 0.0, 7, SupportPolicy.TWO_STEP_DOUBLING, LOGISTIC, np.zeros(3), range(8), R=R
        )
        assert trace.iterates.shape == (8, 3)
        # blocks end after 1, 3 and 7 samples; in between the previous output is held
        np.testing.assert_array_equal(trace.iterates[3], trace.iterates[4])
        np.testing.assert_array_equal(trace.iterates[4], trace.iterates[6])
        assert not np.array_equal(trace.iterates[6], trace.iterates[7])

    def test_exhausted_stream(self):
        _, observations = _observations(ModelKind.LOGISTIC, 2, 3)
        with pytest.raises(StreamExhaustedError):
            run_online_newton(iter(observations), 0.1, 5, SupportPolicy.CURRENT_AVERAGE, LOGISTIC, np.zeros(2))

    def test_two_step_zero_budget(self):
        trace = run_online_newton(iter([]), 0.1, 0, SupportPolicy.TWO_STEP, LOGISTIC, np.ones(2), [0], R=1.0)
        np.testing.assert_array_equal(trace.final, np.ones(2))


class TestRunTwoStep:
    """Test the fixed two-phase procedure."""

    def test_consumes_two_n(self):
        population, observations = _observations(ModelKind.LOGISTIC, 3, 40)
        trace = run_two_step(iter(observations), 20, LOGISTIC, math.sqrt(population.radius2), np.zeros(3), [0, 20, 40])
        assert trace.checkpoints.tolist() == [0, 20, 40]
        assert trace.iterates.shape == (3, 3)

    def test_short_stream(self):
        _, observations = _observations(ModelKind.LOGISTIC, 3, 30)
        with pytest.raises(StreamExhaustedError):
            run_two_step(iter(observations), 20, LOGISTIC, 1.0, np.zeros(3))

    def test_n_positive(self):
        with pytest.raises(ContractViolationError):
            run_two_step(iter([]), 0, LOGISTIC, 1.0, np.zeros(3))
