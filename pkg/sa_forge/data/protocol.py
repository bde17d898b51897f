"""Experimental protocol for real datasets.

1. Drop observations whose norm exceeds ``factor`` times the mean norm of the
   original set (single pass).
2. Shuffle and split into two halves, train and test; an odd leftover goes to
   test.
3. Sample training indices uniformly with replacement for a budget of
   ``passes`` effective passes.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.core.state import Observation
from sa_forge.data.dataset import Dataset
from sa_forge.data.rng import StreamRole, make_rng

logger = logging.getLogger(__name__)

DEFAULT_OUTLIER_FACTOR = 5.0
DEFAULT_PASSES = 100
SAMPLER_CHUNK = 8192


def remove_outliers(dataset: Dataset, factor: float = DEFAULT_OUTLIER_FACTOR) -> Tuple[Dataset, int]:
    """Drop points with ``||x|| > factor * mean ||x||``.

    Returns:
        The filtered dataset and the number of removed observations

    Raises:
        ContractViolationError: If the dataset is empty or nothing survives
    """
    if dataset.n == 0:
        raise ContractViolationError("cannot filter an empty dataset")
    if factor <= 0:
        raise ContractViolationError(f"outlier factor must be positive, got {factor}")
    norms = dataset.row_norms()
    keep = np.flatnonzero(norms <= factor * norms.mean())
    removed = dataset.n - keep.size
    if keep.size == 0:
        raise ContractViolationError("no observations left after outlier removal")
    if removed:
        logger.info(f"Removed {removed} outliers (norm > {factor:g} x mean) from {dataset.name}")
    return dataset.subset(keep), removed


@dataclass
class PassSampler:
    """Deterministic stream of training indices drawn uniformly with replacement."""

    train: Dataset
    seed: int
    replication: int = 0
    passes: int = DEFAULT_PASSES

    @property
    def first_pass(self) -> int:
        """Number of draws making one effective pass."""
        return self.train.n

    @property
    def budget(self) -> int:
        return self.passes * self.train.n

    def indices(self, count=None) -> Iterator[int]:
        """Yield ``count`` indices (the full budget by default); reruns repeat the stream."""
        count = self.budget if count is None else count
        rng = make_rng(self.seed, self.replication, StreamRole.SAMPLER)
        produced = 0
        while produced < count:
            size = min(SAMPLER_CHUNK, count - produced)
            for index in rng.integers(0, self.train.n, size=size).tolist():
                yield index
            produced += size

    def stream(self, count=None) -> Iterator[Observation]:
        observations = self.train.observations
        for index in self.indices(count):
            yield observations[index]


@dataclass
class ProtocolSplit:
    train: Dataset
    test: Dataset
    sampler: PassSampler
    removed: int


def prepare_protocol(
    dataset: Dataset,
    seed: int,
    factor: float = DEFAULT_OUTLIER_FACTOR,
    passes: int = DEFAULT_PASSES,
    replication: int = 0,
) -> ProtocolSplit:
    """Filter outliers, split in halves and build the pass sampler.

    The split depends on ``seed`` only; the sampler stream also depends on
    ``replication``.

    Raises:
        ContractViolationError: If the dataset has fewer than 4 observations
            or fewer than 2 survive filtering
    """
    if dataset.n < 4:
        raise ContractViolationError(f"protocol needs at least 4 observations, got {dataset.n}")
    filtered, removed = remove_outliers(dataset, factor)
    if filtered.n < 2:
        raise ContractViolationError("fewer than 2 observations left after outlier removal")
    order = make_rng(seed, 0, StreamRole.SPLIT).permutation(filtered.n)
    half = filtered.n // 2
    train = filtered.subset(np.sort(order[:half]), name=f"{dataset.name}-train")
    test = filtered.subset(np.sort(order[half:]), name=f"{dataset.name}-test")
    logger.debug(f"Split {filtered.n} observations into {train.n} train / {test.n} test")
    return ProtocolSplit(
        train=train,
        test=test,
        sampler=PassSampler(train, seed, replication, passes),
        removed=removed,
    )
