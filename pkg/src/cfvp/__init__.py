"""Virus-driven cascading failures on two-layer interdependent networks.

A discrete-stage process couples SIR spreading on layer A with mutual
giant-component cascades across both layers: virus-removed nodes seed
failures, and failures destroy susceptible and infected nodes, throttling
the epidemic in turn.  The package provides the simulator, adaptive
isolation strategies, Monte Carlo sweep harnesses with reproducible
seeding, and a CLI writing delimited results.
"""

from .errors import ConfigurationError, EdgeListParseError, ScriptError
from .graph import (
    DegreeSpec,
    Graph,
    generate_ba,
    giant_component,
    load_edge_list,
    write_edge_list,
)
from .coupled_system import (
    CascadeReport,
    CoupledSystem,
    build_system,
    cascade,
    giant_fraction,
)
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
from .engine import (
    RunResult,
    StageRecord,
    TRACE_COLUMNS,
    format_trace_table,
    run_cfvp,
    run_single_layer_sir,
    run_with_forced_outcomes,
    write_trace_csv,
)
from .experiments import (
    DEFAULT_LAMBDA_GRID,
    DEFAULT_Q_GRID,
    SweepConfig,
    SweepPoint,
    TimeseriesSeries,
    derive_run_seed,
    estimate_lambda_c,
    isotonic_fit,
    lambda_c_rows,
    sweep_lambda,
    sweep_q,
    timeseries_experiment,
    write_lambda_c_csv,
    write_sweep_lambda_csv,
    write_sweep_q_csv,
    write_timeseries_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "EdgeListParseError",
    "ScriptError",
    "Graph",
    "DegreeSpec",
    "generate_ba",
    "giant_component",
    "load_edge_list",
    "write_edge_list",
    "CoupledSystem",
    "CascadeReport",
    "build_system",
    "cascade",
    "giant_fraction",
    "Compartment",
    "StrategyKind",
    "IsolationStrategy",
    "EpidemicState",
    "assign_q",
    "seed_infection",
    "spread_substage",
    "isolation_substage",
    "StageRecord",
    "RunResult",
    "TRACE_COLUMNS",
    "run_cfvp",
    "run_single_layer_sir",
    "run_with_forced_outcomes",
    "format_trace_table",
    "write_trace_csv",
    "DEFAULT_LAMBDA_GRID",
    "DEFAULT_Q_GRID",
    "SweepConfig",
    "SweepPoint",
    "TimeseriesSeries",
    "derive_run_seed",
    "sweep_lambda",
    "sweep_q",
    "timeseries_experiment",
    "estimate_lambda_c",
    "lambda_c_rows",
    "isotonic_fit",
    "write_sweep_lambda_csv",
    "write_sweep_q_csv",
    "write_timeseries_csv",
    "write_lambda_c_csv",
    "__version__",
]
