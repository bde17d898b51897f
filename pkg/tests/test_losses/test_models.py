"""Tests for loss values, derivatives and empirical risks."""

import numpy as np
import pytest
from scipy import sparse

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.core.state import Observation
from sa_forge.losses.models import (
    LOGISTIC,
    SQUARE,
    LossModel,
    curvature,
    empirical_gradient,
    empirical_hessian,
    empirical_risk,
    gradient_parts,
    loss_derivatives,
    loss_value,
)


class TestLossModel:
    """Test loss model lookup."""

    def test_from_name(self):
        assert LossModel.from_name("Logistic") == LOGISTIC
        assert LossModel.from_name("square") == SQUARE

    def test_unknown_name(self):
        with pytest.raises(ContractViolationError, match="Unknown loss"):
            LossModel.from_name("hinge")


class TestDerivatives:
    """Test closed-form derivatives against hand values and finite differences."""

    def test_logistic_at_zero(self):
        t = loss_derivatives(LOGISTIC, 1.0, 0.0)
        assert t.d1 == pytest.approx(-0.5)
        assert t.d2 == pytest.approx(0.25)
        assert t.d3 == pytest.approx(0.0, abs=1e-15)

    def test_square(self):
        t = loss_derivatives(SQUARE, 0.0, 2.0)
        assert (t.d1, t.d2, t.d3) == (2.0, 1.0, 0.0)

    def test_logistic_label_checked(self):
        with pytest.raises(ContractViolationError):
            loss_value(LOGISTIC, 0.0, 1.0)
        with pytest.raises(ContractViolationError):
            loss_derivatives(LOGISTIC, 2.0, 1.0)

    def test_logistic_extreme_margins_are_finite(self):
        assert loss_value(LOGISTIC, 1.0, -1000.0) == pytest.approx(1000.0)
        assert loss_value(LOGISTIC, 1.0, 1000.0) == 0.0
        t = loss_derivatives(LOGISTIC, -1.0, 800.0)
        assert np.isfinite([t.d1, t.d2, t.d3]).all()

    @pytest.mark.parametrize("model", [LOGISTIC, SQUARE])
    def test_finite_differences(self, model, rng):
        h = 1e-4
        for _ in range(200):
            y = float(rng.choice([-1.0, 1.0]))
            v = float(rng.uniform(-6.0, 6.0))
            f = [loss_value(model, y, v + k * h) for k in (-1, 0, 1)]
            t = loss_derivatives(model, y, v)
            d1 = (f[2] - f[0]) / (2 * h)
            lo, hi = (loss_derivatives(model, y, v + k * h) for k in (-1, 1))
            d2 = (hi.d1 - lo.d1) / (2 * h)
            d3 = (hi.d2 - lo.d2) / (2 * h)
            assert t.d1 == pytest.approx(d1, abs=1e-6)
            assert t.d2 == pytest.approx(d2, abs=1e-6)
            assert t.d3 == pytest.approx(d3, abs=1e-6)

    def test_logistic_monotone_in_margin(self):
        margins = np.linspace(-20, 20, 401)
        values = [loss_value(LOGISTIC, 1.0, m) for m in margins]
        assert np.all(np.diff(values) < 0)


class TestPerObservationKernels:
    """Test gradient coefficients used by the recursions."""

    def test_square_with_target_term(self):
        obs = Observation.least_squares(np.ones(2), [1.0, 2.0])
        coef, offset = gradient_parts(SQUARE, obs, 3.0)
        assert coef == 3.0
        assert offset.tolist() == [1.0, 2.0]

    def test_square_with_response(self):
        obs = Observation.labelled(np.ones(2), 1.0)
        coef, offset = gradient_parts(SQUARE, obs, 3.0)
        assert coef == 2.0
        assert offset is None

    def test_logistic_needs_label(self):
        obs = Observation.least_squares(np.ones(2), [1.0, 2.0])
        with pytest.raises(ContractViolationError):
            gradient_parts(LOGISTIC, obs, 0.0)

    def test_curvature(self):
        obs = Observation.labelled(np.ones(2), 1.0)
        assert curvature(LOGISTIC, obs, 0.0) == pytest.approx(0.25)
        assert curvature(SQUARE, obs, 5.0) == 1.0


class TestEmpiricalRisk:
    """Test dataset-level risk, gradient and Hessian."""

    @pytest.fixture
    def data(self, rng):
        X = rng.standard_normal((30, 3))
        y = np.where(rng.random(30) < 0.5, 1.0, -1.0)
        return X, y

    def test_gradient_matches_finite_difference(self, data, rng):
        X, y = data
        theta = rng.standard_normal(3)
        grad = empirical_gradient(LOGISTIC, X, y, theta)
        h = 1e-6
        for j in range(3):
            e = np.zeros(3)
            e[j] = h
            fd = (empirical_risk(LOGISTIC, X, y, theta + e) - empirical_risk(LOGISTIC, X, y, theta - e)) / (2 * h)
            assert grad[j] == pytest.approx(fd, abs=1e-7)

    def test_sparse_matches_dense(self, data, rng):
        X, y = data
        theta = rng.standard_normal(3)
        Xs = sparse.csr_matrix(X)
        assert empirical_risk(LOGISTIC, Xs, y, theta) == pytest.approx(empirical_risk(LOGISTIC, X, y, theta))
        np.testing.assert_allclose(
            empirical_hessian(LOGISTIC, Xs, y, theta), empirical_hessian(LOGISTIC, X, y, theta), atol=1e-12
        )

    def test_square_hessian_is_covariance(self, data):
        X, y = data
        np.testing.assert_allclose(empirical_hessian(SQUARE, X, y, np.zeros(3)), X.T @ X / 30, atol=1e-12)
