"""Reader and writer for the libsvm sparse text format.

Each line is ``label idx:val idx:val ...`` with 1-based, strictly increasing
feature indices. Files ending in ``.gz`` (or starting with the gzip magic
bytes) are decompressed transparently.
"""

import gzip
import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy import sparse

from sa_forge.core.exceptions import DataFormatError
from sa_forge.data.dataset import Dataset

logger = logging.getLogger(__name__)

GZIP_MAGIC = b"\x1f\x8b"

PathLike = Union[str, Path]


def _is_gzip(path: Path) -> bool:
    if path.suffix == ".gz":
        return True
    with open(path, "rb") as fh:
        return fh.read(2) == GZIP_MAGIC


def _open_text(path: Path):
    if _is_gzip(path):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def _parse_line(path: Path, lineno: int, line: str) -> Tuple[float, List[int], List[float]]:
    tokens = line.split()
    try:
        label = float(tokens[0])
    except ValueError:
        raise DataFormatError(str(path), lineno, f"unparseable label '{tokens[0]}'")
    indices: List[int] = []
    values: List[float] = []
    for token in tokens[1:]:
        idx_text, sep, val_text = token.partition(":")
        if not sep:
            raise DataFormatError(str(path), lineno, f"unparseable token '{token}'")
        try:
            idx = int(idx_text)
            val = float(val_text)
        except ValueError:
            raise DataFormatError(str(path), lineno, f"unparseable token '{token}'")
        if idx < 1:
            raise DataFormatError(str(path), lineno, f"feature index {idx} is not 1-based")
        if indices and idx <= indices[-1]:
            raise DataFormatError(
                str(path), lineno, f"feature index {idx} does not increase after {indices[-1]}"
            )
        indices.append(idx)
        values.append(val)
    return label, indices, values


def map_labels(labels: np.ndarray, path: str = "<labels>") -> np.ndarray:
    """Map binary labels onto {-1, +1}.

    {-1, +1} is kept, {0, 1} becomes {-1, +1}, and any other pair of distinct
    values is mapped smaller to -1 and larger to +1.

    Raises:
        DataFormatError: If there are more than two distinct labels
    """
    distinct = np.unique(labels)
    if distinct.size > 2:
        raise DataFormatError(path, None, f"expected binary labels, found {distinct.size} distinct values")
    if np.all(np.isin(distinct, (-1.0, 1.0))):
        return labels.astype(np.float64)
    if np.all(np.isin(distinct, (0.0, 1.0))):
        return 2.0 * labels - 1.0
    if distinct.size == 1:
        raise DataFormatError(path, None, f"cannot interpret single label value {distinct[0]}")
    logger.warning(f"Mapping labels {distinct[0]:g} -> -1 and {distinct[1]:g} -> +1 in {path}")
    return np.where(labels == distinct[1], 1.0, -1.0)


def parse_libsvm(path: PathLike, dimension: Optional[int] = None) -> Dataset:
    """Parse a libsvm file into a sparse dataset.

    Args:
        path: Text or gzip-compressed libsvm file
        dimension: Feature count; defaults to the largest index seen

    Returns:
        Dataset with CSR covariates and labels in {-1, +1}

    Raises:
        FileNotFoundError: If the file does not exist
        DataFormatError: On malformed lines, non-binary labels or an empty file
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Data file not found: {path}")

    labels: List[float] = []
    indptr = [0]
    col: List[int] = []
    data: List[float] = []
    with _open_text(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            label, indices, values = _parse_line(path, lineno, line)
            labels.append(label)
            col.extend(i - 1 for i in indices)
            data.extend(values)
            indptr.append(len(col))

    if not labels:
        raise DataFormatError(str(path), None, "file contains no observations")

    largest = max(col) + 1 if col else 0
    if dimension is None:
        dimension = max(largest, 1)
    elif dimension < largest:
        raise DataFormatError(str(path), None, f"feature index {largest} exceeds dimension {dimension}")

    X = sparse.csr_matrix(
        (np.array(data, dtype=np.float64), np.array(col, dtype=np.int64), np.array(indptr, dtype=np.int64)),
        shape=(len(labels), dimension),
    )
    y = map_labels(np.array(labels, dtype=np.float64), str(path))
    logger.info(f"Parsed {len(labels)} observations with {dimension} features from {path.name}")
    return Dataset(X=X, y=y, name=path.name.split(".")[0])


def _format_label(label: float) -> str:
    if label == 1.0:
        return "+1"
    if label == -1.0:
        return "-1"
    return repr(float(label))


def write_libsvm(dataset: Dataset, path: PathLike) -> Path:
    """Write a dataset in libsvm format with shortest round-trip float text.

    Zero entries are omitted. A ``.gz`` suffix writes a compressed file.
    """
    path = Path(path)
    X = sparse.csr_matrix(dataset.X)
    X.sort_indices()
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "wt", encoding="utf-8") as fh:
        for i in range(dataset.n):
            start, end = X.indptr[i], X.indptr[i + 1]
            pairs = " ".join(
                f"{j + 1}:{v!r}" for j, v in zip(X.indices[start:end].tolist(), X.data[start:end].tolist()) if v != 0.0
            )
            fh.write(f"{_format_label(dataset.y[i])} {pairs}".rstrip() + "\n")
    logger.debug(f"Wrote {dataset.n} observations to {path}")
    return path
