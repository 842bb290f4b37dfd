"""Loader for the packaged six-node reference pair.

The fixture is a hand-derived, fully scripted run (see the README next to
the data files); tests replay it and compare against the committed trace
with exact equality.
"""

from __future__ import annotations

import csv
from importlib import resources

from .coupled_system import CoupledSystem
from .engine import TRACE_COLUMNS, StageRecord
from .graph import load_edge_list

__all__ = [
    "REFERENCE_SEED_NODE",
    "REFERENCE_SCRIPT",
    "load_reference_system",
    "load_reference_trace",
]

REFERENCE_SEED_NODE = 1

# Directed (infected, susceptible) transmission outcomes; covers every
# attempt the reference run makes.
REFERENCE_SCRIPT = {
    (1, 0): False,
    (1, 2): True,
    (2, 3): True,
    (2, 4): True,
    (4, 5): False,
}

_DATA = resources.files("cfvp").joinpath("data/reference6")


def load_reference_system() -> CoupledSystem:
    layer_a = load_edge_list(_DATA.joinpath("layer_a.edges").read_text())
    layer_b = load_edge_list(_DATA.joinpath("layer_b.edges").read_text())
    return CoupledSystem(layer_a, layer_b)


def load_reference_trace() -> tuple:
    """The committed per-stage trace as StageRecord values."""
    lines = [
        line for line in _DATA.joinpath("expected_trace.csv").read_text().splitlines()
        if not line.startswith("#")
    ]
    reader = csv.reader(lines)
    columns = tuple(next(reader))
    assert columns == TRACE_COLUMNS
    records = []
    for row in reader:
        vals = dict(zip(columns, row))
        records.append(StageRecord(
            stage=int(vals["stage"]),
            newly_infected=int(vals["newly_infected"]),
            virus_removed=int(vals["virus_removed"]),
            cascade_removed_a=int(vals["cascade_removed_a"]),
            cascade_removed_b=int(vals["cascade_removed_b"]),
            edges_pruned=int(vals["edges_pruned"]),
            f_i_current=float(vals["f_i_current"]),
            f_i_cumulative=float(vals["f_i_cumulative"]),
            functional_fraction=float(vals["functional_fraction"]),
        ))
    return tuple(records)
