"""CSV ingestion and emission.

One format, enforced strictly: UTF-8, comma-delimited, a mandatory header
row of unique column names, and every subsequent cell a finite decimal
number. Errors name the offending row and column so a malformed file is
diagnosable from the message alone.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

from .data import Dataset
from .exceptions import DataError


def read_csv(path, response_column: str) -> Dataset:
    """Parse a strict numeric CSV into a :class:`Dataset`.

    Column order is preserved from the header; ``response_column`` must
    name one of the header entries.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DataError(f"input file not found: {path}") from None
    except UnicodeDecodeError as exc:
        raise DataError(f"{path} is not valid UTF-8: {exc}") from None

    rows = list(csv.reader(text.splitlines()))
    if not rows:
        raise DataError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    if any(not h for h in header):
        raise DataError(f"{path}: header has an empty column name")

    columns: list[list[float]] = [[] for _ in header]
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataError(
                f"{path}: row {r} has {len(row)} cells, expected {len(header)}"
            )
        for c, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: row {r}, column {header[c]!r}: "
                    f"cannot parse {cell!r} as a number"
                ) from None
            if not math.isfinite(value):
                raise DataError(
                    f"{path}: row {r}, column {header[c]!r}: "
                    f"non-finite value {cell!r}"
                )
            columns[c].append(value)

    if len(rows) - 1 < 2:
        raise DataError(f"{path}: need at least 2 data rows")
    return Dataset(zip(header, columns), response=response_column)


def write_csv(data: Dataset, path) -> None:
    """Write a dataset back out; round-trips bit exactly through read_csv."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(data.names)
        for i in range(data.n):
            # repr of a float round-trips exactly
            writer.writerow([repr(float(v)) for v in data.values[i]])
