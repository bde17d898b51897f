"""CSV and plot-data export of risk curves.

CSV rows carry normalized excess risks, one row per optimizer, step size,
replication and checkpoint. Floats are written with ``repr`` so they parse
back to the identical value. Plot-data is a JSON document with mean and
standard error per series.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Dict, List, Sequence, Union

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.models.experiment import RiskCurve

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("optimizer", "gamma", "replication", "n", "train_excess", "test_excess")
FORMATS = ("csv", "plot-data")


def _write_csv(curves: Sequence[RiskCurve], path: Path) -> int:
    rows = 0
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for curve in curves:
            train = curve.normalized("train")
            test = curve.normalized("test")
            for rep in range(curve.replications):
                for j, n in enumerate(curve.checkpoints):
                    writer.writerow(
                        [
                            curve.optimizer,
                            repr(float(curve.gamma)),
                            rep,
                            int(n),
                            repr(float(train[rep, j])),
                            repr(float(test[rep, j])),
                        ]
                    )
                    rows += 1
    return rows


def _write_plot_data(curves: Sequence[RiskCurve], path: Path) -> int:
    series = []
    for curve in curves:
        series.append(
            {
                "optimizer": curve.optimizer,
                "gamma": float(curve.gamma),
                "n": [int(n) for n in curve.checkpoints],
                "train_mean": curve.mean("train").tolist(),
                "train_stderr": curve.stderr("train").tolist(),
                "test_mean": curve.mean("test").tolist(),
                "test_stderr": curve.stderr("test").tolist(),
            }
        )
    first_pass = next((c.first_pass for c in curves if c.first_pass is not None), None)
    with open(path, "w", encoding="utf-8") as f:
        json.dump({"series": series, "first_pass": first_pass}, f, indent=2)
        f.write("\n")
    return len(series)


def export_results(curves: Sequence[RiskCurve], path: Union[str, Path], format: str = "csv") -> Path:
    """
    Write curves to ``path`` as CSV or plot-data JSON.

    Args:
        curves: Risk curves (may be empty)
        path: Output file
        format: ``csv`` or ``plot-data``

    Returns:
        The written path

    Raises:
        ContractViolationError: On an unknown format
        OSError: If the file cannot be written
    """
    if format not in FORMATS:
        raise ContractViolationError(f"Unknown format '{format}', expected one of {list(FORMATS)}")
    path = Path(path)
    if format == "csv":
        count = _write_csv(curves, path)
        logger.info(f"Wrote {count} rows to {path}")
    else:
        count = _write_plot_data(curves, path)
        logger.info(f"Wrote {count} series to {path}")
    return path


def read_csv_results(path: Union[str, Path]) -> List[Dict[str, object]]:
    """
    Parse a CSV written by ``export_results`` back into typed rows.

    Raises:
        ContractViolationError: If the header is not the expected one
    """
    with open(path, "r", newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_COLUMNS:
            raise ContractViolationError(f"Unexpected CSV header {header}")
        return [
            {
                "optimizer": row[0],
                "gamma": float(row[1]),
                "replication": int(row[2]),
                "n": int(row[3]),
                "train_excess": float(row[4]),
                "test_excess": float(row[5]),
            }
            for row in reader
        ]
