"""Readers for the experiment CSVs.

The files carry '# '-prefixed comment lines (effective config echo) above
a header row; readers skip the comments, check the columns the chosen
figure needs, and hand back plain dict rows.  Rendering never writes back,
and row order never matters to callers.
"""

from __future__ import annotations

import csv
from pathlib import Path

__all__ = [
    "FigureDataError",
    "MissingColumnError",
    "EmptySeriesError",
    "read_rows",
    "single_value",
]

NOT_REACHED = "not_reached"


class FigureDataError(ValueError):
    """Input data unusable for the requested figure."""


class MissingColumnError(FigureDataError):
    """A required column is absent; the message names it."""

    def __init__(self, column: str, path) -> None:
        self.column = column
        super().__init__(f"{Path(path).name}: missing required column {column!r}")


class EmptySeriesError(FigureDataError):
    """A figure series came out empty; nothing honest to draw."""


def read_rows(path, required: tuple) -> list:
    """Data rows of one CSV as dicts, comments skipped, columns checked."""
    path = Path(path)
    with open(path, newline="") as handle:
        lines = [line for line in handle if not line.startswith("#")]
    reader = csv.DictReader(lines)
    header = reader.fieldnames or ()
    for column in required:
        if column not in header:
            raise MissingColumnError(column, path)
    rows = list(reader)
    if not rows:
        raise EmptySeriesError(f"{path.name}: no data rows")
    return rows


def single_value(rows: list, column: str, path) -> str:
    """The lone value of a column that must not vary within this figure."""
    values = sorted({row[column] for row in rows})
    if len(values) != 1:
        raise FigureDataError(
            f"{Path(path).name}: expected a single {column} value, found {values}"
        )
    return values[0]
