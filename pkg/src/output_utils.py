#
# Copyright (c) 2025-present Tom Keffer <tkeffer@gmail.com>
#
# This source code is licensed under the MIT license found in the
# LICENSE.txt file in the root directory of this source tree.
#
"""Exit codes, number formatting and the JSON / CSV / text writers used by the command line."""
from __future__ import annotations

import csv
import json
import logging
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from typing import IO, Any, Iterator

import numpy as np

from analytic_core import ConstraintViolated, DegenerateDenominator, NoConvergence, NoSolution

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2

# Reported as exit code 2 with an error record. ValueError covers every invalid input.
INVALID_INPUT_ERRORS = (NoSolution, NoConvergence, DegenerateDenominator, ConstraintViolated,
                        ValueError)

SIGNIFICANT_DIGITS = 12

log = logging.getLogger("qes-radial.output")


def round_sig(x: float, digits: int = SIGNIFICANT_DIGITS) -> float | str:
    """Round to `digits` significant digits. Non-finite values become the strings 'inf', 'nan'."""
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.{digits}g}")


def rounded(value: Any, digits: int = SIGNIFICANT_DIGITS) -> Any:
    """Apply `round_sig` to every float inside nested dicts, lists and tuples."""
    if isinstance(value, dict):
        return {k: rounded(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [rounded(v, digits) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return round_sig(value, digits)
    return value


def error_record(e: BaseException) -> dict[str, str]:
    return {"error": type(e).__name__, "message": str(e)}


@dataclass(frozen=True)
class RadialTable:
    """Samples (r, R(r)) of one state, with the metadata needed to reproduce them."""
    header: dict[str, Any]
    r: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if len(self.r) != len(self.values):
            raise ValueError(f"Table columns differ in length: {len(self.r)} != {len(self.values)}")
        if np.any(np.diff(self.r) <= 0):
            raise ValueError("Table radii must be strictly increasing")
        if not (np.all(np.isfinite(self.r)) and np.all(np.isfinite(self.values))):
            raise ValueError("Table holds non-finite values")

    def as_record(self) -> dict[str, Any]:
        return {"header": self.header, "r": self.r, "R": self.values}


@contextmanager
def open_output(path: str | None) -> Iterator[IO[str]]:
    """The file at `path`, or standard output when `path` is None."""
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", newline="", encoding="utf-8") as f:
        yield f
    log.info("Wrote %s", path)


def write_json(record: Any, stream: IO[str], digits: int = SIGNIFICANT_DIGITS):
    stream.write(json.dumps(rounded(record, digits), indent=2))
    stream.write("\n")


def write_csv(table: RadialTable, stream: IO[str], digits: int = SIGNIFICANT_DIGITS):
    """'#' comment lines with the header, then an 'r,R' header row and one row per sample."""
    for key, value in rounded(table.header, digits).items():
        stream.write(f"# {key}: {json.dumps(value)}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["r", "R"])
    for r, value in zip(table.r, table.values):
        writer.writerow([repr(round_sig(r, digits)), repr(round_sig(value, digits))])


def write_text(record: Any, stream: IO[str], digits: int = SIGNIFICANT_DIGITS, indent: int = 0):
    """Indented 'key: value' lines."""
    pad = "  " * indent
    for key, value in record.items():
        if isinstance(value, dict):
            stream.write(f"{pad}{key}:\n")
            write_text(value, stream, digits, indent + 1)
        else:
            stream.write(f"{pad}{key}: {json.dumps(rounded(value, digits))}\n")
