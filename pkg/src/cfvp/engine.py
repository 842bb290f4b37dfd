"""The stage loop: virus spreading on layer A feeding failure cascades,
with a per-stage trace, plus the single-layer baseline without cascades.

Each stage runs [isolation if enabled] -> synchronous spreading -> one
full cascade seeded by the nodes the virus just removed.  Cascades finish
inside the stage (failures are assumed much faster than propagation), and
any susceptible or infected nodes they take down are marked FAILED so
they can no longer catch or pass the virus.  The run ends when no
infected nodes remain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._csvio import config_comments, format_cell, write_csv
from .coupled_system import CoupledSystem, cascade
from .epidemic import (
    Compartment,
    EpidemicState,
    IsolationStrategy,
    StrategyKind,
    assign_q,
    isolation_substage,
    seed_infection,
    spread_substage,
)
from .graph import Graph

__all__ = [
    "StageRecord",
    "RunResult",
    "run_cfvp",
    "run_single_layer_sir",
    "run_with_forced_outcomes",
    "TRACE_COLUMNS",
    "format_trace_table",
    "write_trace_csv",
]


@dataclass(frozen=True)
class StageRecord:
    """Observables of one stage.

    ``f_i_current`` is the infected fraction right after spreading (the
    cascade may still fail some of those nodes); ``f_i_cumulative`` counts
    every node that was ever infected, including ones later lost to
    cascades.  ``cascade_removed_a`` counts collateral only, never the
    virus-removed nodes that seeded the cascade; ``virus_removed`` has
    those.  ``functional_fraction`` is measured after the cascade.
    """

    stage: int
    newly_infected: int
    virus_removed: int
    cascade_removed_a: int
    cascade_removed_b: int
    edges_pruned: int
    f_i_current: float
    f_i_cumulative: float
    functional_fraction: float


@dataclass(frozen=True)
class RunResult:
    g_final: float
    stages: tuple
    total_infected: int
    seed: int | None
    collapsed: bool


TRACE_COLUMNS = (
    "stage",
    "newly_infected",
    "virus_removed",
    "cascade_removed_a",
    "cascade_removed_b",
    "edges_pruned",
    "f_i_current",
    "f_i_cumulative",
    "functional_fraction",
)


def _require_fresh(*graphs: Graph) -> None:
    for g in graphs:
        if not g.alive_node.all() or not g.alive_edge.all():
            raise RuntimeError("run requires a fresh system with every node functional")


def _stage_loop(system, state, strategy, rng, outcomes, default, seed):
    layer_a = system.layer_a
    n = system.n
    records = []
    ever_infected = int(np.count_nonzero(state.comp == Compartment.INFECTED))
    while True:
        pruned = []
        if strategy.kind is not StrategyKind.NONE:
            pruned = isolation_substage(state, layer_a, rng)
        newly, removed = spread_substage(state, layer_a, rng, outcomes, default)
        ever_infected += newly.size
        report = cascade(system, removed)
        failed = report.removed_a[state.comp[report.removed_a] != Compartment.REMOVED]
        state.comp[failed] = Compartment.FAILED
        records.append(StageRecord(
            stage=len(records) + 1,
            newly_infected=int(newly.size),
            virus_removed=int(removed.size),
            cascade_removed_a=int(failed.size),
            cascade_removed_b=int(report.removed_b.size),
            edges_pruned=len(pruned),
            f_i_current=newly.size / n,
            f_i_cumulative=ever_infected / n,
            functional_fraction=layer_a.alive_node_count() / n,
        ))
        if not (state.comp == Compartment.INFECTED).any():
            break
    g_final = records[-1].functional_fraction
    return RunResult(g_final, tuple(records), ever_infected, seed, g_final == 0.0)


def run_cfvp(
    system: CoupledSystem,
    lam: float,
    strategy: IsolationStrategy | None = None,
    rng: np.random.Generator | None = None,
    *,
    seed: int | None = None,
) -> RunResult:
    """One full realization on a fresh system.

    Draw order off the rng: the per-node q block (degree-based strategy
    only), the seed-node choice, then per stage the isolation draws
    followed by the transmission draws.  The cascade consumes no
    randomness.  ``seed`` is recorded in the result and used to build an
    rng when none is given.
    """
    if strategy is None:
        strategy = IsolationStrategy()
    if rng is None:
        rng = np.random.default_rng(seed)
    _require_fresh(system.layer_a, system.layer_b)
    state = EpidemicState(system.n, lam)
    state.q = assign_q(strategy, system.layer_a, rng)
    seed_infection(state, rng)
    return _stage_loop(system, state, strategy, rng, None, None, seed)


def run_single_layer_sir(
    graph: Graph,
    lam: float,
    rng: np.random.Generator | None = None,
    *,
    seed: int | None = None,
) -> RunResult:
    """Baseline: same spreading on one layer, no isolation, no cascades.

    Nothing fails, so functional_fraction stays 1.0 and g_final reports
    the fraction still susceptible at the end (baseline-only semantics;
    there is no giant-component observable here).
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    _require_fresh(graph)
    state = EpidemicState(graph.n, lam)
    n = graph.n
    seed_infection(state, rng)
    records = []
    ever_infected = 1
    while True:
        newly, removed = spread_substage(state, graph, rng)
        ever_infected += newly.size
        records.append(StageRecord(
            stage=len(records) + 1,
            newly_infected=int(newly.size),
            virus_removed=int(removed.size),
            cascade_removed_a=0,
            cascade_removed_b=0,
            edges_pruned=0,
            f_i_current=newly.size / n,
            f_i_cumulative=ever_infected / n,
            functional_fraction=1.0,
        ))
        if newly.size == 0:
            break
    g_final = int(np.count_nonzero(state.comp == Compartment.SUSCEPTIBLE)) / n
    return RunResult(g_final, tuple(records), ever_infected, seed, g_final == 0.0)


def run_with_forced_outcomes(
    system: CoupledSystem,
    outcomes: dict,
    *,
    lam: float = 1.0,
    strategy: IsolationStrategy | None = None,
    rng: np.random.Generator | None = None,
    seed: int | None = None,
    default: bool | None = None,
    initial_infected: int | None = None,
) -> RunResult:
    """run_cfvp with transmission results read from a script.

    ``outcomes`` maps directed (infected, susceptible) pairs to booleans;
    uncovered pairs use ``default`` or raise ScriptError.  With
    ``initial_infected`` set, the seed node is fixed and no seeding draw
    is consumed.  A script defaulting every pair to True replays exactly
    like run_cfvp at lambda 1.
    """
    if strategy is None:
        strategy = IsolationStrategy()
    if rng is None:
        rng = np.random.default_rng(seed)
    _require_fresh(system.layer_a, system.layer_b)
    state = EpidemicState(system.n, lam)
    state.q = assign_q(strategy, system.layer_a, rng)
    if initial_infected is None:
        seed_infection(state, rng)
    else:
        state.comp[initial_infected] = Compartment.INFECTED
    return _stage_loop(system, state, strategy, rng, dict(outcomes), default, seed)


def format_trace_table(result: RunResult) -> str:
    """Aligned per-stage table plus the final G line, for human eyes."""
    cells = [[format_cell(getattr(rec, col)) for col in TRACE_COLUMNS] for rec in result.stages]
    widths = [
        max(len(col), *(len(row[i]) for row in cells)) if cells else len(col)
        for i, col in enumerate(TRACE_COLUMNS)
    ]
    lines = ["  ".join(col.rjust(w) for col, w in zip(TRACE_COLUMNS, widths))]
    for row in cells:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
    lines.append(f"g_final = {format_cell(result.g_final)}")
    return "\n".join(lines)


def write_trace_csv(path, result: RunResult, config: dict | None = None, master_seed=None) -> None:
    """One row per stage under the documented column order."""
    rows = [[getattr(rec, col) for col in TRACE_COLUMNS] for rec in result.stages]
    write_csv(path, config_comments(config, master_seed), TRACE_COLUMNS, rows)
