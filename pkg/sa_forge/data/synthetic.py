"""Synthetic Gaussian problems with covariance spectrum ``1/k``.

Covariates are ``N(0, H)`` with ``H = U diag(1/k) U^T`` and ``U`` a
Haar-random orthogonal matrix. The optimum has unit norm and a uniformly
random direction. Least-squares responses get Gaussian noise at unit
signal-to-noise ratio; logistic responses follow the logistic model, so the
population optimum is the generating parameter.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np
from scipy.special import expit

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.core.state import Observation
from sa_forge.core.vector import as_dense
from sa_forge.data.dataset import Dataset, GroundTruth, ModelKind, SyntheticSpec
from sa_forge.data.rng import StreamRole, make_rng

logger = logging.getLogger(__name__)

STREAM_CHUNK = 4096


def random_orthogonal(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix: QR of a Gaussian matrix with sign-fixed diagonal."""
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


@dataclass(frozen=True)
class SyntheticPopulation:
    """The distribution of a synthetic problem, able to draw samples and streams."""

    model: ModelKind
    basis: np.ndarray
    eigenvalues: np.ndarray
    theta_star: np.ndarray
    sigma: Optional[float]

    @property
    def d(self) -> int:
        return int(self.eigenvalues.shape[0])

    @property
    def covariance(self) -> np.ndarray:
        return (self.basis * self.eigenvalues) @ self.basis.T

    @property
    def ground_truth(self) -> GroundTruth:
        return GroundTruth(theta_star=self.theta_star.copy(), covariance=self.covariance, sigma=self.sigma)

    @property
    def radius2(self) -> float:
        """Population average radius ``tr H``."""
        return float(self.eigenvalues.sum())

    def draw_covariates(self, n: int, rng: np.random.Generator) -> np.ndarray:
        g = rng.standard_normal((n, self.d))
        return (g * np.sqrt(self.eigenvalues)) @ self.basis.T

    def draw_responses(self, X: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        margins = X @ self.theta_star
        if self.model is ModelKind.LSQ:
            return margins + self.sigma * rng.standard_normal(X.shape[0])
        return np.where(rng.random(X.shape[0]) < expit(margins), 1.0, -1.0)

    def sample(self, n: int, rng: np.random.Generator, name: str = "synthetic") -> Dataset:
        X = self.draw_covariates(n, rng)
        y = self.draw_responses(X, rng)
        return Dataset(X=X, y=y, ground_truth=self.ground_truth, name=name)

    def stream(self, rng: np.random.Generator, chunk: int = STREAM_CHUNK) -> Iterator[Observation]:
        """Endless i.i.d. observations, drawn in chunks."""
        while True:
            X = self.draw_covariates(chunk, rng)
            y = self.draw_responses(X, rng)
            for i in range(chunk):
                yield Observation.labelled(X[i], y[i])


def make_population(
    d: int,
    model: ModelKind,
    seed: int,
    theta_star=None,
) -> SyntheticPopulation:
    """Draw the problem (eigenbasis and optimum) from the seed's problem stream.

    ``theta_star`` overrides the random unit-norm optimum.
    """
    if d < 1:
        raise ContractViolationError(f"d must be >= 1, got {d}")
    model = ModelKind(model)
    rng = make_rng(seed, 0, StreamRole.PROBLEM)
    basis = random_orthogonal(d, rng)
    eigenvalues = 1.0 / np.arange(1, d + 1)
    direction = rng.standard_normal(d)
    if theta_star is None:
        theta_star = direction / np.linalg.norm(direction)
    else:
        theta_star = as_dense(theta_star)
        if theta_star.shape[0] != d:
            raise ContractViolationError(f"theta_star must have dimension {d}")
    sigma = None
    if model is ModelKind.LSQ:
        signal = float(theta_star @ ((basis * eigenvalues) @ (basis.T @ theta_star)))
        sigma = float(np.sqrt(signal))
    logger.debug(f"Synthetic {model.value} problem: d={d}, sigma={sigma}")
    return SyntheticPopulation(model, basis, eigenvalues, theta_star, sigma)


def generate_lsq(spec: SyntheticSpec, theta_star=None) -> Dataset:
    """Least-squares sample with unit signal-to-noise ratio.

    Raises:
        ContractViolationError: If ``spec.model`` is not least squares
    """
    if spec.model is not ModelKind.LSQ:
        raise ContractViolationError(f"generate_lsq needs an lsq spec, got {spec.model.value}")
    population = make_population(spec.d, ModelKind.LSQ, spec.seed, theta_star)
    return population.sample(spec.n, make_rng(spec.seed, 0, StreamRole.DATA), name=f"lsq-d{spec.d}")


def generate_logistic(spec: SyntheticSpec, theta_star=None) -> Dataset:
    """Logistic-model sample; labels are +1 with probability ``sigmoid(<theta_*, x>)``.

    Raises:
        ContractViolationError: If ``spec.model`` is not logistic
    """
    if spec.model is not ModelKind.LOGISTIC:
        raise ContractViolationError(f"generate_logistic needs a logistic spec, got {spec.model.value}")
    population = make_population(spec.d, ModelKind.LOGISTIC, spec.seed, theta_star)
    return population.sample(spec.n, make_rng(spec.seed, 0, StreamRole.DATA), name=f"logistic-d{spec.d}")
