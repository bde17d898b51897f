"""Tests for the optimizer registry."""

import numpy as np
import pytest

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.core.state import Observation
from sa_forge.harness.registry import (
    Adagrad,
    AveragedLms,
    OnlineNewton,
    RunContext,
    Sag,
    Sgd,
    create_optimizer,
)
from sa_forge.losses.models import LOGISTIC, SQUARE
from sa_forge.models.experiment import OPTIMIZER_IDS
from sa_forge.newton.policies import SupportPolicy


def _context(model=SQUARE, n=100, R2=2.0, observations=None, **kwargs):
    observations = observations or [Observation.labelled(np.array([1.0, 0.0]), 1.0)] * max(n, 1)
    return RunContext(
        model=model,
        n=n,
        theta0=np.zeros(2),
        checkpoints=np.array([0, n]) if n > 0 else np.array([0]),
        R2=R2,
        stream=lambda: iter(observations),
        **kwargs,
    )


class TestCreateOptimizer:
    """Test optimizer lookup."""

    @pytest.mark.parametrize("optimizer_id", OPTIMIZER_IDS)
    def test_every_id(self, optimizer_id):
        optimizer = create_optimizer(optimizer_id)
        assert optimizer.optimizer_id == optimizer_id
        assert optimizer_id in repr(optimizer)

    @pytest.mark.parametrize(
        "optimizer_id,averaged,decaying",
        [
            ("avg-const-sgd", True, False),
            ("avg-decay-sgd", True, True),
            ("sgd-nonavg-const", False, False),
            ("sgd-nonavg-decay", False, True),
        ],
    )
    def test_sgd_flags(self, optimizer_id, averaged, decaying):
        optimizer = create_optimizer(optimizer_id)
        assert isinstance(optimizer, Sgd)
        assert optimizer.averaged is averaged
        assert optimizer.decaying is decaying
        assert optimizer.tracks_average is averaged

    def test_newton_policies(self):
        assert create_optimizer("newton:online").policy is SupportPolicy.CURRENT_AVERAGE
        assert create_optimizer("newton:2step-dbl").policy is SupportPolicy.TWO_STEP_DOUBLING

    def test_last_iterate_baselines(self):
        assert not create_optimizer("sag").tracks_average
        assert not create_optimizer("adagrad").tracks_average

    def test_unknown(self):
        with pytest.raises(ContractViolationError, match="Available"):
            create_optimizer("lbfgs")


class TestTheoreticalSteps:
    """Test default step sizes with R^2 = 2 and n = 100."""

    def test_lms(self):
        assert AveragedLms("lms-avg-const").theoretical_step(_context()) == pytest.approx(1 / 8)

    def test_sgd_square(self):
        assert create_optimizer("avg-const-sgd").theoretical_step(_context()) == pytest.approx(1 / 8)

    def test_sgd_logistic(self):
        step = create_optimizer("avg-const-sgd").theoretical_step(_context(model=LOGISTIC))
        assert step == pytest.approx(1 / (2 * 2 * 10))

    def test_decaying_first_step(self):
        optimizer = create_optimizer("avg-decay-sgd")
        gamma = optimizer.theoretical_step(_context())
        assert gamma == pytest.approx(0.25)
        assert optimizer.schedule(gamma, 2.0).gamma_at(1) == pytest.approx(gamma)
        assert optimizer.schedule(gamma, 2.0).gamma_at(4) == pytest.approx(gamma / 2)

    def test_newton(self):
        assert OnlineNewton("newton:online", SupportPolicy.CURRENT_AVERAGE).theoretical_step(_context()) == pytest.approx(0.25)
        two_step = OnlineNewton("newton:2step", SupportPolicy.TWO_STEP)
        assert not two_step.uses_gamma
        assert two_step.theoretical_step(_context()) == pytest.approx(0.5)

    def test_sag(self):
        assert Sag("sag").theoretical_step(_context()) == pytest.approx(1 / 32)

    def test_adagrad_needs_sample(self):
        with pytest.raises(ContractViolationError):
            Adagrad("adagrad").theoretical_step(_context())

    def test_adagrad_uses_pilot(self):
        pilot = [Observation.labelled(np.array([0.5, -4.0]), 1.0)]
        assert Adagrad("adagrad").theoretical_step(_context(pilot=pilot)) == pytest.approx(0.25)


class TestRun:
    """Test running through the registry."""

    def test_sag_on_stream_uses_first_n(self):
        observations = [Observation.labelled(np.array([1.0, 0.0]), 1.0), Observation.labelled(np.array([0.0, 1.0]), -1.0)] * 5
        context = _context(n=10, observations=observations, rng=np.random.default_rng(0))
        trace = Sag("sag").run(context, 0.1)
        assert trace.iterates.shape == (2, 2)
        assert trace.state.grads.shape == (10,)

    def test_sag_zero_budget(self):
        trace = Sag("sag").run(_context(n=0), 0.1)
        np.testing.assert_array_equal(trace.iterates, np.zeros((1, 2)))

    def test_decaying_sgd_runs(self):
        trace = create_optimizer("sgd-nonavg-decay").run(_context(n=4), 0.5)
        assert trace.iterates.shape == (2, 2)
