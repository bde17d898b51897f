"""Seeded random streams.

Every random draw comes from a generator keyed by ``(experiment seed,
replication index, stream role)``, so a run is reproducible bit for bit and
replications never share a stream.
"""

from enum import IntEnum

import numpy as np


class StreamRole(IntEnum):
    PROBLEM = 0
    DATA = 1
    SAMPLER = 2
    SPLIT = 3
    EVAL = 4
    ESTIMATOR = 5


def make_rng(seed: int, replication: int = 0, role: StreamRole = StreamRole.DATA) -> np.random.Generator:
    """PCG64 generator for one ``(seed, replication, role)`` triple."""
    if seed < 0 or replication < 0:
        raise ValueError(f"seed and replication must be nonnegative, got {seed}, {replication}")
    sequence = np.random.SeedSequence([int(seed), int(replication), int(role)])
    return np.random.Generator(np.random.PCG64(sequence))
