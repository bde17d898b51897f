"""Tests for the excess-risk evaluators."""

import numpy as np
import pytest
from scipy.special import expit

from sa_forge.constants.reference import batch_reference
from sa_forge.data.dataset import Dataset
from sa_forge.harness.risk import EmpiricalRisk, LogisticKLRisk, QuadraticRisk
from sa_forge.losses.models import LOGISTIC


class TestQuadraticRisk:
    """Test the closed-form least-squares excess risk."""

    def test_values(self):
        risk = QuadraticRisk(np.array([1.0, 0.0]), np.diag([2.0, 1.0]))
        values = risk.excess(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 2.0]]))
        np.testing.assert_allclose(values, [1.0, 0.0, 2.0])

    def test_single_iterate(self):
        risk = QuadraticRisk(np.zeros(2), np.eye(2))
        assert risk.excess(np.array([3.0, 4.0])).tolist() == [12.5]


class TestLogisticKLRisk:
    """Test the Bernoulli divergence estimate."""

    def test_zero_at_optimum(self, rng):
        theta_star = rng.standard_normal(3)
        risk = LogisticKLRisk(theta_star, rng.standard_normal((500, 3)))
        assert risk.excess(theta_star[None, :])[0] == pytest.approx(0.0, abs=1e-15)

    def test_matches_explicit_divergence(self, rng):
        theta_star = rng.standard_normal(3)
        theta = rng.standard_normal(3)
        X = rng.standard_normal((200, 3))
        p = expit(X @ theta_star)
        q = expit(X @ theta)
        expected = np.mean(p * np.log(p / q) + (1 - p) * np.log((1 - p) / (1 - q)))

        value = LogisticKLRisk(theta_star, X).excess(theta)[0]

        assert value == pytest.approx(expected, rel=1e-9)
        assert value > 0


class TestEmpiricalRisk:
    """Test empirical excess risk against the batch reference."""

    def test_zero_at_reference(self, rng):
        X = rng.standard_normal((100, 2))
        y = np.where(rng.random(100) < expit(X @ np.array([1.0, -1.0])), 1.0, -1.0)
        data = Dataset(X=X, y=y)
        ref = batch_reference(data, LOGISTIC)
        risk = EmpiricalRisk(data, LOGISTIC, ref.f_star)

        values = risk.excess(np.vstack([ref.theta_star, np.zeros(2)]))

        assert values[0] == pytest.approx(0.0, abs=1e-12)
        assert values[1] > 0
