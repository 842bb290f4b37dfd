"""Monte Carlo harness: parameter sweeps over fresh system realizations,
collapse-threshold estimation, and the delimited outputs.

Reproducibility contract: every realization's seed is derived purely from
(master seed, grid-point parameters, realization index), so any single
grid point rerun in isolation reproduces its aggregate exactly, and the
degree of parallelism never changes a byte of output.
"""

from __future__ import annotations

import hashlib
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from ._csvio import config_comments, write_csv
from .engine import run_cfvp, run_single_layer_sir
from .epidemic import IsolationStrategy, StrategyKind
from .errors import ConfigurationError
from .coupled_system import build_system
from .graph import DegreeSpec

__all__ = [
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
]

DEFAULT_LAMBDA_GRID = tuple(round(0.02 * i, 10) for i in range(51))
DEFAULT_Q_GRID = tuple(round(0.1 * i, 10) for i in range(11))


def _probability_grid(value, field: str) -> tuple:
    try:
        grid = tuple(float(x) for x in value)
    except TypeError:
        raise ConfigurationError(field, f"expected a list of probabilities, got {value!r}") from None
    if not grid:
        raise ConfigurationError(field, "grid must not be empty")
    for x in grid:
        if not 0.0 <= x <= 1.0:
            raise ConfigurationError(field, f"grid value {x} outside [0, 1]")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigurationError(field, "grid must be strictly ascending")
    return grid


def _degree_list(value, n: int, field: str) -> tuple:
    if isinstance(value, bool):
        raise ConfigurationError(field, f"expected an average degree, got {value!r}")
    if isinstance(value, int):
        value = (value,)
    try:
        ks = tuple(value)
    except TypeError:
        raise ConfigurationError(field, f"expected an average degree or list of them, got {value!r}") from None
    if not ks:
        raise ConfigurationError(field, "degree list must not be empty")
    for k in ks:
        DegreeSpec.from_avg_degree(n, k, field)  # validates k against n
    return ks


@dataclass(frozen=True)
class SweepConfig:
    """Everything a sweep needs; mirrored one-to-one by the JSON config.

    ``k_a`` and ``k_b`` accept a single average degree or a list; sweeps
    cover the cartesian product of the listed values.
    """

    n: int = 2000
    k_a: tuple = (8,)
    k_b: tuple = (8,)
    lambda_grid: tuple = DEFAULT_LAMBDA_GRID
    q_grid: tuple = DEFAULT_Q_GRID
    sigma: float = 0.3
    strategy: StrategyKind = StrategyKind.NONE
    realizations: int = 100
    master_seed: int = 0
    collapse_epsilon: float = 0.005

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 2:
            raise ConfigurationError("n", f"system size must be an integer of at least 2, got {self.n!r}")
        object.__setattr__(self, "k_a", _degree_list(self.k_a, self.n, "k_a"))
        object.__setattr__(self, "k_b", _degree_list(self.k_b, self.n, "k_b"))
        object.__setattr__(self, "lambda_grid", _probability_grid(self.lambda_grid, "lambda_grid"))
        object.__setattr__(self, "q_grid", _probability_grid(self.q_grid, "q_grid"))
        sigma = float(self.sigma)
        if not sigma >= 0.0:
            raise ConfigurationError("sigma", f"standard deviation must be non-negative, got {sigma}")
        object.__setattr__(self, "sigma", sigma)
        if not isinstance(self.strategy, StrategyKind):
            try:
                object.__setattr__(self, "strategy", StrategyKind(self.strategy))
            except ValueError:
                tokens = ", ".join(k.value for k in StrategyKind)
                raise ConfigurationError(
                    "strategy", f"unknown strategy {self.strategy!r}, expected one of: {tokens}"
                ) from None
        if not isinstance(self.realizations, int) or isinstance(self.realizations, bool) or self.realizations < 1:
            raise ConfigurationError("realizations", f"need at least one realization, got {self.realizations!r}")
        if not isinstance(self.master_seed, int) or isinstance(self.master_seed, bool):
            raise ConfigurationError("master_seed", f"master seed must be an integer, got {self.master_seed!r}")
        eps = float(self.collapse_epsilon)
        if not 0.0 < eps < 1.0:
            raise ConfigurationError("collapse_epsilon", f"collapse threshold must be in (0, 1), got {eps}")
        object.__setattr__(self, "collapse_epsilon", eps)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        if not isinstance(data, dict):
            raise ConfigurationError("config", "expected a JSON object of configuration keys")
        known = {f.name for f in fields(cls)}
        for key in sorted(data):
            if key not in known:
                raise ConfigurationError(key, "unknown configuration key")
        return cls(**data)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k_a": list(self.k_a),
            "k_b": list(self.k_b),
            "lambda_grid": list(self.lambda_grid),
            "q_grid": list(self.q_grid),
            "sigma": self.sigma,
            "strategy": self.strategy.value,
            "realizations": self.realizations,
            "master_seed": self.master_seed,
            "collapse_epsilon": self.collapse_epsilon,
        }

    def effective_sigma(self) -> float:
        """Sigma as actually used: only the degree-based strategy reads it."""
        return self.sigma if self.strategy is StrategyKind.DEGREE_BASED else 0.0

    def fixed_q(self) -> float:
        """The single q used by sweeps that do not vary q."""
        if self.strategy is StrategyKind.NONE:
            return 0.0
        if len(self.q_grid) != 1:
            raise ConfigurationError(
                "q_grid", "this sweep needs one fixed q; supply a single-element q_grid"
            )
        return self.q_grid[0]

    def fixed_lambda(self) -> float:
        """The single lambda used by sweeps that do not vary lambda."""
        if len(self.lambda_grid) != 1:
            raise ConfigurationError(
                "lambda_grid", "this sweep needs one fixed lambda; supply a single-element lambda_grid"
            )
        return self.lambda_grid[0]


@dataclass(frozen=True)
class SweepPoint:
    """Aggregate of `realizations` runs at one parameter combination."""

    k_a: int
    k_b: int
    strategy: StrategyKind
    q: float
    sigma: float
    lam: float
    mean_g: float
    std_g: float
    mean_total_infected: float
    realizations: int


@dataclass(frozen=True)
class TimeseriesSeries:
    """Stage-aligned means over realizations for one mode and degree.

    ``totals`` keeps the per-realization cumulative infection count in
    realization order; the two modes of one experiment share seeds, so
    entry r of both series describes the same system and initial
    infection and the entries subtract as paired observations.
    """

    mode: str
    k: int
    lam: float
    mean_f_i_current: tuple
    mean_f_i_cumulative: tuple
    mean_total_infected: float
    std_total_infected: float
    realizations: int
    totals: tuple = ()

    @property
    def peak_stage(self) -> int:
        """1-based stage of the maximum mean current-infected fraction."""
        return 1 + int(np.argmax(self.mean_f_i_current))


def derive_run_seed(master_seed: int, mode: str, k_a: int, k_b: int, strategy, q: float,
                    sigma: float, lam: float, r: int) -> int:
    """Per-realization seed: low 64 bits of a SHA-256 over the '|'-joined
    canonical parts (master seed, mode, degrees, strategy token, q, sigma,
    lambda, realization index).  Floats are rendered with repr, so grid
    membership plays no role and single points reproduce in isolation.
    """
    token = strategy.value if isinstance(strategy, StrategyKind) else StrategyKind(strategy).value
    parts = "|".join([
        str(int(master_seed)), mode, str(int(k_a)), str(int(k_b)), token,
        repr(float(q)), repr(float(sigma)), repr(float(lam)), str(int(r)),
    ])
    digest = hashlib.sha256(parts.encode("ascii")).digest()
    return int.from_bytes(digest[:8], "little")


def _cfvp_worker(args):
    n, k_a, k_b, kind, q, sigma, lam, run_seed = args
    rng = np.random.default_rng(run_seed)
    system = build_system(
        DegreeSpec.from_avg_degree(n, k_a, "k_a"),
        DegreeSpec.from_avg_degree(n, k_b, "k_b"),
        rng,
    )
    result = run_cfvp(system, lam, IsolationStrategy(kind, q, sigma), rng, seed=run_seed)
    return result.g_final, result.total_infected


def _series_worker(args):
    """One paired realization: the full process and the single-layer
    baseline replay the same seed, so both arms generate identical layers
    and infect the same initial node (common random numbers).  With no
    isolation strategy the first spreading stage is draw-for-draw
    identical and the arms diverge only once cascades bite."""
    n, k, kind, q, sigma, lam, run_seed = args
    spec_a = DegreeSpec.from_avg_degree(n, k, "k_a")
    spec_b = DegreeSpec.from_avg_degree(n, k, "k_b")
    rng = np.random.default_rng(run_seed)
    system = build_system(spec_a, spec_b, rng)
    full = run_cfvp(system, lam, IsolationStrategy(kind, q, sigma), rng, seed=run_seed)
    rng = np.random.default_rng(run_seed)
    system = build_system(spec_a, spec_b, rng)
    single = run_single_layer_sir(system.layer_a, lam, rng, seed=run_seed)
    arms = []
    for result in (full, single):
        current = tuple(rec.f_i_current for rec in result.stages)
        cumulative = tuple(rec.f_i_cumulative for rec in result.stages)
        arms.append((current, cumulative, result.total_infected))
    return tuple(arms)


def _map_work(worker, items, threads: int):
    """Ordered map over independent work items; aggregate order (and thus
    every output byte) is independent of the worker count."""
    if threads <= 1 or len(items) <= 1:
        return [worker(item) for item in items]
    ctx = multiprocessing.get_context("fork")
    chunk = max(1, len(items) // (threads * 8))
    with ProcessPoolExecutor(max_workers=threads, mp_context=ctx) as ex:
        return list(ex.map(worker, items, chunksize=chunk))


def _mean_std(values) -> tuple:
    arr = np.asarray(values, float)
    std = float(np.std(arr, ddof=1)) if arr.size > 1 else 0.0
    return float(np.mean(arr)), std


def sweep_lambda(config: SweepConfig, threads: int = 1):
    """Mean/std of final G per lambda, for every (k_a, k_b) combination.

    With an isolation strategy enabled the (single) q comes from q_grid.
    Points are ordered k_a-major, then k_b, then ascending lambda.
    """
    q = config.fixed_q()
    sigma = config.effective_sigma()
    kind = config.strategy
    combos = [(ka, kb) for ka in config.k_a for kb in config.k_b]
    items = [
        (config.n, ka, kb, kind.value, q, sigma, lam,
         derive_run_seed(config.master_seed, "cfvp", ka, kb, kind, q, sigma, lam, r))
        for ka, kb in combos
        for lam in config.lambda_grid
        for r in range(config.realizations)
    ]
    results = _map_work(_cfvp_worker, items, threads)
    points = []
    R = config.realizations
    idx = 0
    for ka, kb in combos:
        for lam in config.lambda_grid:
            chunk = results[idx:idx + R]
            idx += R
            mean_g, std_g = _mean_std([g for g, _ in chunk])
            mean_total = float(np.mean([t for _, t in chunk]))
            points.append(SweepPoint(ka, kb, kind, q, sigma, lam, mean_g, std_g, mean_total, R))
    return points


def sweep_q(config: SweepConfig, threads: int = 1):
    """Mean/std of final G per q at the (single) fixed lambda; requires an
    isolation strategy."""
    if config.strategy is StrategyKind.NONE:
        raise ConfigurationError("strategy", "sweep over q requires an isolation strategy")
    lam = config.fixed_lambda()
    sigma = config.effective_sigma()
    kind = config.strategy
    combos = [(ka, kb) for ka in config.k_a for kb in config.k_b]
    items = [
        (config.n, ka, kb, kind.value, q, sigma, lam,
         derive_run_seed(config.master_seed, "cfvp", ka, kb, kind, q, sigma, lam, r))
        for ka, kb in combos
        for q in config.q_grid
        for r in range(config.realizations)
    ]
    results = _map_work(_cfvp_worker, items, threads)
    points = []
    R = config.realizations
    idx = 0
    for ka, kb in combos:
        for q in config.q_grid:
            chunk = results[idx:idx + R]
            idx += R
            mean_g, std_g = _mean_std([g for g, _ in chunk])
            mean_total = float(np.mean([t for _, t in chunk]))
            points.append(SweepPoint(ka, kb, kind, q, sigma, lam, mean_g, std_g, mean_total, R))
    return points


def timeseries_experiment(config: SweepConfig, threads: int = 1):
    """Stage-aligned mean infected fractions, full process versus the
    single-layer baseline, at the fixed lambda for each k_a (= k_b).

    The comparison is paired: realization r of both modes derives the
    same seed, so it spreads over the same layer graphs from the same
    initially infected node, and the baseline differs only by the absence
    of cascades and isolation.  Early die-outs then cancel instead of
    inflating the variance of the mode gap.

    Within a mode and degree, shorter runs are padded to the longest run:
    the current-infected fraction with zeros (the run is over) and the
    cumulative fraction with its final value.
    """
    if config.k_a != config.k_b:
        raise ConfigurationError("k_b", "timeseries requires matching k_a and k_b lists")
    lam = config.fixed_lambda()
    q = config.fixed_q()
    sigma = config.effective_sigma()
    kind = config.strategy
    R = config.realizations
    out = []
    for k in config.k_a:
        items = [
            (config.n, k, kind.value, q, sigma, lam,
             derive_run_seed(config.master_seed, "cfvp", k, k, kind, q, sigma, lam, r))
            for r in range(R)
        ]
        paired = _map_work(_series_worker, items, threads)
        for arm, mode in ((0, "cfvp"), (1, "single")):
            results = [pair[arm] for pair in paired]
            depth = max(len(cur) for cur, _, _ in results)
            current = np.zeros((R, depth))
            cumulative = np.zeros((R, depth))
            for row, (cur, cum, _) in enumerate(results):
                current[row, :len(cur)] = cur
                cumulative[row, :len(cum)] = cum
                cumulative[row, len(cum):] = cum[-1]
            totals = [t for _, _, t in results]
            mean_total, std_total = _mean_std(totals)
            out.append(TimeseriesSeries(
                mode=mode,
                k=k,
                lam=lam,
                mean_f_i_current=tuple(float(x) for x in current.mean(axis=0)),
                mean_f_i_cumulative=tuple(float(x) for x in cumulative.mean(axis=0)),
                mean_total_infected=mean_total,
                std_total_infected=std_total,
                realizations=R,
                totals=tuple(int(t) for t in totals),
            ))
    return out


def estimate_lambda_c(points, epsilon: float):
    """Smallest grid lambda from which mean_g stays below epsilon through
    the end of the grid; None when the curve never settles below it.

    ``points`` must be one curve in strictly ascending lambda order.
    """
    lams = [p.lam for p in points]
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise RuntimeError("estimate_lambda_c requires points sorted by strictly ascending lambda")
    lam_c = None
    for p in reversed(points):
        if p.mean_g < epsilon:
            lam_c = p.lam
        else:
            break
    return lam_c


def lambda_c_rows(points, epsilon: float):
    """One (k_a, k_b, lambda_c, epsilon, grid_step) row per curve found in
    the points, in order of first appearance."""
    curves = {}
    for p in points:
        curves.setdefault((p.k_a, p.k_b), []).append(p)
    rows = []
    for (ka, kb), curve in curves.items():
        lam_c = estimate_lambda_c(curve, epsilon)
        lams = [p.lam for p in curve]
        step = round(min(b - a for a, b in zip(lams, lams[1:])), 10) if len(lams) > 1 else 0.0
        rows.append((ka, kb, lam_c, epsilon, step))
    return rows


def isotonic_fit(values, increasing: bool = True) -> np.ndarray:
    """Least-squares monotone fit by pool-adjacent-violators."""
    y = np.asarray(values, float)
    if not increasing:
        return isotonic_fit(y[::-1], True)[::-1]
    sums = []
    counts = []
    for v in y:
        sums.append(float(v))
        counts.append(1)
        while len(sums) > 1 and sums[-2] * counts[-1] > sums[-1] * counts[-2]:
            s, c = sums.pop(), counts.pop()
            sums[-1] += s
            counts[-1] += c
    return np.repeat([s / c for s, c in zip(sums, counts)], counts)


# -- delimited outputs ---------------------------------------------------

def _comments(config: SweepConfig):
    return config_comments(config.to_dict(), config.master_seed)


def write_sweep_lambda_csv(path, points, config: SweepConfig) -> None:
    columns = ("k_a", "k_b", "strategy", "q", "lambda", "mean_g", "std_g",
               "mean_total_infected", "realizations")
    rows = [
        (p.k_a, p.k_b, p.strategy.value, p.q, p.lam, p.mean_g, p.std_g,
         p.mean_total_infected, p.realizations)
        for p in points
    ]
    write_csv(path, _comments(config), columns, rows)


def write_sweep_q_csv(path, points, config: SweepConfig) -> None:
    columns = ("k_a", "k_b", "strategy", "sigma", "lambda", "q", "mean_g", "std_g",
               "realizations")
    rows = [
        (p.k_a, p.k_b, p.strategy.value, p.sigma, p.lam, p.q, p.mean_g, p.std_g,
         p.realizations)
        for p in points
    ]
    write_csv(path, _comments(config), columns, rows)


def write_timeseries_csv(path, series, config: SweepConfig) -> None:
    columns = ("mode", "k", "lambda", "stage", "mean_f_i_current", "mean_f_i_cumulative")
    rows = [
        (s.mode, s.k, s.lam, stage + 1, cur, cum)
        for s in series
        for stage, (cur, cum) in enumerate(zip(s.mean_f_i_current, s.mean_f_i_cumulative))
    ]
    write_csv(path, _comments(config), columns, rows)


def write_lambda_c_csv(path, rows, config: SweepConfig) -> None:
    columns = ("k_a", "k_b", "lambda_c", "epsilon", "grid_step")
    rendered = [
        (ka, kb, "not_reached" if lam_c is None else lam_c, eps, step)
        for ka, kb, lam_c, eps, step in rows
    ]
    write_csv(path, _comments(config), columns, rendered)
