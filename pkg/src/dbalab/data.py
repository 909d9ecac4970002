"""CSV corpus ingestion.

One data row per series: an optional leading string ID, then numeric
values.  A header row is auto-detected when its first data cell is
non-numeric.  Multidimensional series are declared via dim: row values
are consumed in groups of dim coordinates per point.
"""

from __future__ import annotations

import csv

import numpy as np

from dbalab.core import InputError, PointSequence


class FormatError(InputError):
    """Malformed corpus file."""


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def ingest_csv(path: str, dim: int = 1) -> list[PointSequence]:
    """Parse a corpus file into one point sequence per row."""
    if dim < 1:
        raise InputError("dim must be positive")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise FormatError(f"{path}: no data rows")

    def data_cells(row):
        return row[1:] if row and not _is_number(row[0]) else row

    # header: first row whose first *data* cell is still non-numeric
    first = data_cells(rows[0])
    if first and not _is_number(first[0]):
        rows = rows[1:]
        if not rows:
            raise FormatError(f"{path}: only a header row")

    series = []
    expected = None
    for rownum, row in enumerate(rows, start=1):
        cells = data_cells(row)
        try:
            values = [float(c) for c in cells]
        except ValueError as exc:
            raise FormatError(f"{path}: non-numeric cell in row {rownum}") from exc
        if expected is None:
            expected = len(values)
            if expected == 0:
                raise FormatError(f"{path}: row {rownum} has no values")
            if expected % dim:
                raise FormatError(
                    f"{path}: row length {expected} is not a multiple of dim={dim}"
                )
        elif len(values) != expected:
            raise FormatError(
                f"{path}: ragged row {rownum} (got {len(values)}, expected {expected})"
            )
        series.append(PointSequence(np.array(values).reshape(-1, dim)))
    return series
