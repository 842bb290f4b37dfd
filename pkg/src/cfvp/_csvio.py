"""Shared CSV conventions for every delimited output.

All files use LF line endings, a '#'-prefixed comment header echoing the
effective configuration (compact JSON, sorted keys) and master seed, one
header row, and shortest-round-trip float formatting.  Nothing
time-or-host-dependent is written, so identical inputs give byte-identical
files.
"""

from __future__ import annotations

import csv
import json


def format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_comments(config: dict | None, master_seed=None) -> list[str]:
    lines = []
    if config is not None:
        lines.append("config: " + json.dumps(config, sort_keys=True, separators=(",", ":")))
    if master_seed is not None:
        lines.append("master_seed: " + str(master_seed))
    return lines


def write_csv(path, comments, columns, rows) -> None:
    with open(path, "w", newline="") as fh:
        for comment in comments:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])


def read_csv(path):
    """Columns and rows (as per-row dicts of strings), comments skipped."""
    with open(path, newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    reader = csv.reader(lines)
    columns = next(reader)
    return columns, [dict(zip(columns, row)) for row in reader]
