"""Command-line entry point.

Subcommands: generate | run | sweep-lambda | sweep-q | timeseries |
threshold.  Values come from a JSON config file when given, overridden by
flags; the master seed falls back to the CFVP_SEED environment variable
and finally to 0.  Exit status: 0 success, 1 configuration error (the
message names the offending field), 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .coupled_system import build_system
from .engine import format_trace_table, run_cfvp, write_trace_csv
from ._csvio import config_comments, read_csv
from .epidemic import IsolationStrategy, StrategyKind
from .errors import ConfigurationError
from .experiments import (
    SweepConfig,
    SweepPoint,
    derive_run_seed,
    lambda_c_rows,
    sweep_lambda,
    sweep_q,
    timeseries_experiment,
    write_lambda_c_csv,
    write_sweep_lambda_csv,
    write_sweep_q_csv,
    write_timeseries_csv,
)
from .graph import DegreeSpec, write_edge_list

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    # spec'd exit status for usage problems is 1, not argparse's 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="cfvp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, doc in [
        ("generate", "generate a coupled system and write both edge lists"),
        ("run", "one full realization; print the stage trace and write trace.csv"),
        ("sweep-lambda", "final-G curve over lambda; writes sweep_lambda.csv and lambda_c.csv"),
        ("sweep-q", "final-G curve over q at fixed lambda; writes sweep_q.csv"),
        ("timeseries", "mean infected fraction per stage vs the single-layer baseline"),
        ("threshold", "re-estimate collapse thresholds from an existing sweep_lambda.csv"),
    ]:
        p = sub.add_parser(name, help=doc)
        p.set_defaults(command=name)
        p.add_argument("--config", metavar="PATH", help="JSON config mirroring the sweep fields")
        p.add_argument("--out", metavar="DIR", default=".", help="output directory (default: .)")
        p.add_argument("--seed", type=int, help="master seed (overrides config and CFVP_SEED)")
        p.add_argument("--n", type=int, help="system size")
        p.add_argument("--ka", type=int, help="average degree of layer A")
        p.add_argument("--kb", type=int, help="average degree of layer B")
        p.add_argument("--lambda", dest="lam", type=float, help="fixed transmission probability")
        p.add_argument("--q", type=float, help="fixed identification probability")
        p.add_argument("--sigma", type=float, help="spread of degree-based q assignment")
        p.add_argument("--strategy", choices=[k.value for k in StrategyKind],
                       help="isolation strategy")
        p.add_argument("--realizations", type=int, help="runs per grid point")
        p.add_argument("--threads", type=int, help="worker cap (default: all cores)")
    return parser


def _effective_config(ns) -> SweepConfig:
    data = {}
    if ns.config:
        text = Path(ns.config).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError("config", f"invalid JSON in {ns.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigurationError("config", "expected a JSON object of configuration keys")
    if ns.lam is not None and not 0.0 <= ns.lam <= 1.0:
        raise ConfigurationError("lambda", f"transmission probability must be in [0, 1], got {ns.lam}")
    if ns.q is not None and not 0.0 <= ns.q <= 1.0:
        raise ConfigurationError("q", f"identification probability must be in [0, 1], got {ns.q}")
    overrides = {
        "n": ns.n,
        "k_a": ns.ka,
        "k_b": ns.kb,
        "lambda_grid": [ns.lam] if ns.lam is not None else None,
        "q_grid": [ns.q] if ns.q is not None else None,
        "sigma": ns.sigma,
        "strategy": ns.strategy,
        "realizations": ns.realizations,
        "master_seed": ns.seed,
    }
    for key, value in overrides.items():
        if value is not None:
            data[key] = value
    if "master_seed" not in data:
        env = os.environ.get("CFVP_SEED")
        if env is not None:
            try:
                data["master_seed"] = int(env)
            except ValueError:
                raise ConfigurationError("master_seed", f"CFVP_SEED is not an integer: {env!r}") from None
    return SweepConfig.from_dict(data)


def _threads(ns) -> int:
    if ns.threads is None:
        return os.cpu_count() or 1
    if ns.threads < 1:
        raise ConfigurationError("threads", f"worker cap must be at least 1, got {ns.threads}")
    return ns.threads


def _single(values, field: str) -> int:
    if len(values) != 1:
        raise ConfigurationError(field, "this command needs a single value, not a list")
    return values[0]


def _out_dir(ns) -> Path:
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_generate(ns) -> int:
    config = _effective_config(ns)
    out = _out_dir(ns)
    ka = _single(config.k_a, "k_a")
    kb = _single(config.k_b, "k_b")
    rng = np.random.default_rng(config.master_seed)
    system = build_system(
        DegreeSpec.from_avg_degree(config.n, ka, "k_a"),
        DegreeSpec.from_avg_degree(config.n, kb, "k_b"),
        rng,
    )
    header = "".join(f"# {c}\n" for c in config_comments(config.to_dict(), config.master_seed))
    for name, layer in [("layer_a.edges", system.layer_a), ("layer_b.edges", system.layer_b)]:
        path = out / name
        path.write_text(header + write_edge_list(layer))
        print(f"wrote {path}")
    return 0


def _cmd_run(ns) -> int:
    config = _effective_config(ns)
    out = _out_dir(ns)
    ka = _single(config.k_a, "k_a")
    kb = _single(config.k_b, "k_b")
    lam = config.fixed_lambda()
    q = config.fixed_q()
    sigma = config.effective_sigma()
    # same derivation as realization 0 of the matching sweep point
    run_seed = derive_run_seed(config.master_seed, "cfvp", ka, kb, config.strategy, q, sigma, lam, 0)
    rng = np.random.default_rng(run_seed)
    system = build_system(
        DegreeSpec.from_avg_degree(config.n, ka, "k_a"),
        DegreeSpec.from_avg_degree(config.n, kb, "k_b"),
        rng,
    )
    result = run_cfvp(system, lam, IsolationStrategy(config.strategy, q, sigma), rng, seed=run_seed)
    print(format_trace_table(result))
    write_trace_csv(out / "trace.csv", result, config.to_dict(), config.master_seed)
    return 0


def _cmd_sweep_lambda(ns) -> int:
    config = _effective_config(ns)
    out = _out_dir(ns)
    points = sweep_lambda(config, threads=_threads(ns))
    write_sweep_lambda_csv(out / "sweep_lambda.csv", points, config)
    write_lambda_c_csv(out / "lambda_c.csv", lambda_c_rows(points, config.collapse_epsilon), config)
    print(f"wrote {out / 'sweep_lambda.csv'}")
    print(f"wrote {out / 'lambda_c.csv'}")
    return 0


def _cmd_sweep_q(ns) -> int:
    config = _effective_config(ns)
    out = _out_dir(ns)
    points = sweep_q(config, threads=_threads(ns))
    write_sweep_q_csv(out / "sweep_q.csv", points, config)
    print(f"wrote {out / 'sweep_q.csv'}")
    return 0


def _cmd_timeseries(ns) -> int:
    config = _effective_config(ns)
    out = _out_dir(ns)
    series = timeseries_experiment(config, threads=_threads(ns))
    write_timeseries_csv(out / "timeseries.csv", series, config)
    print(f"wrote {out / 'timeseries.csv'}")
    return 0


def _cmd_threshold(ns) -> int:
    config = _effective_config(ns)
    out = _out_dir(ns)
    source = out / "sweep_lambda.csv"
    columns, rows = read_csv(source)
    points = [
        SweepPoint(
            k_a=int(row["k_a"]),
            k_b=int(row["k_b"]),
            strategy=StrategyKind(row["strategy"]),
            q=float(row["q"]),
            sigma=0.0,
            lam=float(row["lambda"]),
            mean_g=float(row["mean_g"]),
            std_g=float(row["std_g"]),
            mean_total_infected=float(row["mean_total_infected"]),
            realizations=int(row["realizations"]),
        )
        for row in rows
    ]
    write_lambda_c_csv(out / "lambda_c.csv", lambda_c_rows(points, config.collapse_epsilon), config)
    print(f"wrote {out / 'lambda_c.csv'}")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "run": _cmd_run,
    "sweep-lambda": _cmd_sweep_lambda,
    "sweep-q": _cmd_sweep_q,
    "timeseries": _cmd_timeseries,
    "threshold": _cmd_threshold,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else int(exc.code)
    try:
        return _COMMANDS[ns.command](ns)
    except ConfigurationError as exc:
        print(f"cfvp: configuration error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cfvp: i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
