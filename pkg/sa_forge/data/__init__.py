"""Synthetic generators, libsvm I/O and the real-data protocol."""

from sa_forge.data.dataset import Dataset, GroundTruth, ModelKind, SyntheticSpec
from sa_forge.data.libsvm import map_labels, parse_libsvm, write_libsvm
from sa_forge.data.protocol import PassSampler, ProtocolSplit, prepare_protocol, remove_outliers
from sa_forge.data.rng import StreamRole, make_rng
from sa_forge.data.synthetic import (
    SyntheticPopulation,
    generate_logistic,
    generate_lsq,
    make_population,
    random_orthogonal,
)

__all__ = [
    "Dataset",
    "GroundTruth",
    "ModelKind",
    "SyntheticSpec",
    "map_labels",
    "parse_libsvm",
    "write_libsvm",
    "PassSampler",
    "ProtocolSplit",
    "prepare_protocol",
    "remove_outliers",
    "StreamRole",
    "make_rng",
    "SyntheticPopulation",
    "generate_logistic",
    "generate_lsq",
    "make_population",
    "random_orthogonal",
]
