"""Tests for slope fitting, bound verification and the risk-curve model."""

import numpy as np
import pytest

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.harness.analysis import decade_window, fit_loglog_slope, lms_bound_report, loglog_slope, verify_bound
from sa_forge.harness.runner import build_setup, run_experiment
from sa_forge.lms.bounds import BoundParams, theorem1_bound
from sa_forge.models.experiment import ExperimentConfig, RiskCurve


@pytest.fixture
def counts():
    return np.unique(np.round(np.logspace(0, 4, 60)).astype(np.int64))


def _curve(checkpoints, values, optimizer="opt", gamma=0.1):
    values = np.atleast_2d(values)
    return RiskCurve(optimizer=optimizer, gamma=gamma, checkpoints=checkpoints, train=values, test=values)


class TestLoglogSlope:
    """Test the least-squares slope."""

    def test_inverse_n(self, counts):
        assert loglog_slope(counts, 3.0 / counts) == pytest.approx(-1.0, abs=1e-12)

    def test_inverse_sqrt_n(self, counts):
        assert loglog_slope(counts, 2.0 / np.sqrt(counts)) == pytest.approx(-0.5, abs=1e-12)

    def test_window(self, counts):
        values = np.where(counts < 100, 1.0, 100.0 / counts)
        assert loglog_slope(counts, values, window=(0.5, 1.0)) == pytest.approx(-1.0, abs=1e-12)

    def test_skips_zero_count_and_nonpositive_values(self, counts):
        n = np.concatenate(([0], counts))
        values = np.concatenate(([1.0], 1.0 / counts))
        values[5] = 0.0
        assert loglog_slope(n, values) == pytest.approx(-1.0, abs=1e-12)

    def test_too_few_points(self):
        n = np.array([1, 10, 100, 1000])
        with pytest.raises(ContractViolationError, match="at least 5"):
            loglog_slope(n, 1.0 / n)

    def test_bad_window(self, counts):
        with pytest.raises(ContractViolationError):
            loglog_slope(counts, 1.0 / counts, window=(0.8, 0.2))


class TestFitLoglogSlope:
    """Test slopes of mean normalized curves."""

    def test_mean_curve(self, counts):
        checkpoints = np.concatenate(([0], counts))
        rep = np.concatenate(([1.0], 1.0 / counts))
        curve = _curve(checkpoints, np.vstack([rep, 2.0 * rep]))
        assert fit_loglog_slope(curve) == pytest.approx(-1.0, abs=1e-12)
        assert fit_loglog_slope(curve, decades=1.0) == pytest.approx(-1.0, abs=1e-12)

    def test_decade_window(self, counts):
        curve = _curve(counts, 1.0 / counts)
        assert decade_window(curve, 1.0) == pytest.approx((0.75, 1.0))
        assert decade_window(curve, 10.0) == (0.0, 1.0)


class TestRiskCurve:
    """Test normalization and validation of risk curves."""

    def test_normalized_starts_at_one(self):
        curve = _curve([0, 1, 2], [[4.0, 2.0, 1.0], [2.0, 2.0, 2.0]])
        normalized = curve.normalized()
        assert normalized[:, 0].tolist() == [1.0, 1.0]
        np.testing.assert_allclose(curve.mean(), [1.0, 0.75, 0.625])

    def test_zero_anchor_is_left_unscaled(self):
        curve = _curve([0, 1], [[0.0, 0.5]])
        assert curve.normalized().tolist() == [[0.0, 0.5]]

    def test_stderr(self):
        curve = _curve([0, 1], [[1.0, 1.0], [1.0, 3.0]])
        np.testing.assert_allclose(curve.stderr(normalized=False), [0.0, 1.0])
        assert _curve([0, 1], [[1.0, 2.0]]).stderr().tolist() == [0.0, 0.0]

    def test_normalization_constants(self):
        curve = _curve([0, 1], [[4.0, 2.0]])
        assert curve.normalization[0].tolist() == [4.0]

    def test_checkpoints_increase(self):
        with pytest.raises(ContractViolationError):
            _curve([0, 2, 2], [[1.0, 1.0, 1.0]])

    def test_shapes_match(self):
        with pytest.raises(ContractViolationError):
            RiskCurve(optimizer="x", gamma=0.1, checkpoints=[0, 1], train=[[1.0, 1.0]], test=[[1.0]])

    def test_unknown_split(self):
        with pytest.raises(ContractViolationError):
            _curve([0], [[1.0]]).mean("validation")


class TestVerifyBound:
    """Test per-checkpoint bound comparison."""

    def test_noiseless_start_at_optimum(self):
        params = BoundParams(R=1.0, sigma=0.0, tau=0.0, kappa=1.0, d=3, dist0=0.0)
        curve = _curve([0, 10, 100], np.zeros((3, 3)))
        report = verify_bound(curve, lambda n: theorem1_bound(params, 0.25, n))
        assert report.ok
        assert report.bound.tolist() == [0.0, 0.0, 0.0]

    def test_bound_evaluated_one_past_checkpoint(self):
        curve = _curve([0, 9], [[1.0, 0.05]])
        report = verify_bound(curve, lambda n: 1.0 / n)
        assert report.bound.tolist() == [1.0, 0.1]
        assert report.ok
        assert [row["n"] for row in report.rows()] == [0, 9]

    def test_reports_violations(self):
        curve = _curve([0, 9, 99], [[1.0, 0.5, 0.5]])
        report = verify_bound(curve, lambda n: 1.0 / n)
        assert not report.ok
        assert report.violations == [9, 99]

    def test_uses_two_standard_errors(self):
        curve = _curve([0], [[0.9], [1.1]])
        # mean 1.0, stderr 0.1
        assert verify_bound(curve, lambda n: 1.19).violations == [0]
        assert verify_bound(curve, lambda n: 1.21).ok


class TestLmsBoundReport:
    """Test the averaged LMS bound on synthetic runs."""

    @pytest.fixture
    def config(self):
        return ExperimentConfig(
            dataset="synthetic",
            d=5,
            loss="square",
            optimizer="lms-avg-const",
            n=2000,
            replications=10,
            seed=1,
            checkpoints_per_decade=5,
            theta0_perturbation=0.0,
        )

    def test_holds_with_true_noise(self, config):
        setup = build_setup(config)
        curve = run_experiment(config)
        report = lms_bound_report(setup, curve)
        assert report is not None
        assert report.ok

    def test_understated_noise_is_caught(self, config):
        setup = build_setup(config)
        curve = run_experiment(config)
        population = setup.population
        params = BoundParams(
            R=np.sqrt(setup.R2),
            sigma=population.sigma / 10,
            tau=population.sigma / 10,
            kappa=1.0,
            d=population.d,
            dist0=0.0,
        )
        report = verify_bound(curve, lambda n: theorem1_bound(params, curve.gamma, n))
        assert not report.ok
        assert 2000 in report.violations

    def test_not_applicable(self, config):
        logistic = ExperimentConfig(**{**config.model_dump(), "loss": "logistic", "optimizer": "avg-const-sgd", "n": 10})
        setup = build_setup(logistic)
        curve = run_experiment(logistic)
        assert lms_bound_report(setup, curve) is None
