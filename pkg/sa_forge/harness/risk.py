"""Excess-risk evaluators applied to the iterates recorded at checkpoints."""

from abc import ABC, abstractmethod

import numpy as np
from scipy.special import expit

from sa_forge.data.dataset import Dataset
from sa_forge.losses.models import LossModel, empirical_risk


class RiskEvaluator(ABC):
    """Maps a stack of iterates, one per row, to their excess risks."""

    @abstractmethod
    def excess(self, iterates: np.ndarray) -> np.ndarray:
        pass


class QuadraticRisk(RiskEvaluator):
    """Population least-squares excess risk ``1/2 (theta - theta_*)^T H (theta - theta_*)``."""

    def __init__(self, theta_star: np.ndarray, covariance: np.ndarray):
        self.theta_star = np.asarray(theta_star, dtype=np.float64)
        self.covariance = np.asarray(covariance, dtype=np.float64)

    def excess(self, iterates: np.ndarray) -> np.ndarray:
        delta = np.atleast_2d(iterates) - self.theta_star
        return 0.5 * np.einsum("ij,jk,ik->i", delta, self.covariance, delta)


class LogisticKLRisk(RiskEvaluator):
    """Population logistic excess risk for a well-specified model.

    Equals the mean over covariates of the Bernoulli divergence
    ``KL(sigmoid(<theta_*, x>) || sigmoid(<theta, x>))``, estimated on a
    fixed evaluation sample. Every term is nonnegative.
    """

    def __init__(self, theta_star: np.ndarray, X_eval: np.ndarray):
        self.theta_star = np.asarray(theta_star, dtype=np.float64)
        self.X_eval = np.asarray(X_eval, dtype=np.float64)
        self._margins_star = self.X_eval @ self.theta_star
        self._p = expit(self._margins_star)

    def excess(self, iterates: np.ndarray) -> np.ndarray:
        margins = self.X_eval @ np.atleast_2d(iterates).T
        m_star = self._margins_star[:, None]
        p = self._p[:, None]
        kl = p * (np.logaddexp(0.0, -margins) - np.logaddexp(0.0, -m_star)) + (1.0 - p) * (
            np.logaddexp(0.0, margins) - np.logaddexp(0.0, m_star)
        )
        return np.maximum(kl, 0.0).mean(axis=0)


class EmpiricalRisk(RiskEvaluator):
    """Empirical risk on a split minus the batch reference ``f_*`` of that split."""

    def __init__(self, dataset: Dataset, model: LossModel, f_star: float):
        self.dataset = dataset
        self.model = model
        self.f_star = f_star

    def excess(self, iterates: np.ndarray) -> np.ndarray:
        return np.array(
            [
                empirical_risk(self.model, self.dataset.X, self.dataset.y, theta) - self.f_star
                for theta in np.atleast_2d(iterates)
            ]
        )
