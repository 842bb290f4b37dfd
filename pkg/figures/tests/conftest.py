"""Shared fixtures: small but real CSV inputs produced by the experiment
package's own writers, one directory per figure family, plus the verdict
recorder for the rendering acceptance checks."""

import matplotlib
import pytest

matplotlib.use("Agg", force=True)

from cfvp import (  # noqa: E402  (backend first)
    SweepConfig,
    lambda_c_rows,
    sweep_lambda,
    sweep_q,
    timeseries_experiment,
    write_lambda_c_csv,
    write_sweep_lambda_csv,
    write_sweep_q_csv,
    write_timeseries_csv,
)

ACCEPTANCE_RESULTS = []


def record_criterion(name: str, ok: bool, detail: str = "") -> None:
    verdict = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    ACCEPTANCE_RESULTS.append(f"[ACCEPTANCE] {name}: {verdict}{suffix}")
    print(ACCEPTANCE_RESULTS[-1])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("figure acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)


@pytest.fixture
def record():
    """The verdict recorder, handed out as a fixture so tests never have
    to import a conftest module by name."""
    return record_criterion


COARSE_LAMBDA = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]


def _concat_csv(paths, target):
    """One schema-valid CSV from several: comments and header of the first,
    then every file's data rows."""
    blocks = [p.read_text().splitlines() for p in paths]
    keep = blocks[0]
    for block in blocks[1:]:
        rows = [line for line in block if not line.startswith("#")]
        keep.extend(rows[1:])
    target.write_text("\n".join(keep) + "\n")


@pytest.fixture(scope="session")
def fig2_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig2")
    cfg = SweepConfig(n=150, k_a=[4, 6, 8, 10], k_b=[4, 6, 8, 10],
                      lambda_grid=[0.5], realizations=6, master_seed=31)
    write_timeseries_csv(out / "timeseries.csv", timeseries_experiment(cfg), cfg)
    return out


@pytest.fixture(scope="session")
def fig3_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig3")
    cfg = SweepConfig(n=150, k_a=[4, 8], k_b=8, lambda_grid=COARSE_LAMBDA,
                      realizations=6, master_seed=32)
    points = sweep_lambda(cfg)
    write_sweep_lambda_csv(out / "sweep_lambda.csv", points, cfg)
    write_lambda_c_csv(out / "lambda_c.csv", lambda_c_rows(points, cfg.collapse_epsilon), cfg)
    return out


@pytest.fixture(scope="session")
def fig4_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig4")
    cfg = SweepConfig(n=150, k_a=8, k_b=[4, 8, 16], lambda_grid=COARSE_LAMBDA,
                      realizations=6, master_seed=33)
    points = sweep_lambda(cfg)
    write_sweep_lambda_csv(out / "sweep_lambda.csv", points, cfg)
    write_lambda_c_csv(out / "lambda_c.csv", lambda_c_rows(points, cfg.collapse_epsilon), cfg)
    return out


@pytest.fixture(scope="session")
def fig5_dir(tmp_path_factory):
    # sweep-q emits one strategy per run; fig5 wants both in one file
    out = tmp_path_factory.mktemp("fig5")
    parts = []
    for strategy in ("deterministic", "degree"):
        cfg = SweepConfig(n=150, k_a=[4, 8], k_b=8, lambda_grid=[0.5],
                          q_grid=[0.0, 0.5, 1.0], strategy=strategy,
                          realizations=6, master_seed=34)
        part = out / f"part_{strategy}.csv"
        write_sweep_q_csv(part, sweep_q(cfg), cfg)
        parts.append(part)
    _concat_csv(parts, out / "sweep_q.csv")
    return out


@pytest.fixture(scope="session")
def fig6_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig6")
    parts = []
    for strategy in ("deterministic", "degree"):
        cfg = SweepConfig(n=150, k_a=8, k_b=[4, 16], lambda_grid=[0.5],
                          q_grid=[0.0, 0.5, 1.0], strategy=strategy,
                          realizations=6, master_seed=35)
        part = out / f"part_{strategy}.csv"
        write_sweep_q_csv(part, sweep_q(cfg), cfg)
        parts.append(part)
    _concat_csv(parts, out / "sweep_q.csv")
    return out


@pytest.fixture(scope="session")
def figure_dirs(fig2_dir, fig3_dir, fig4_dir, fig5_dir, fig6_dir):
    return {"fig2": fig2_dir, "fig3": fig3_dir, "fig4": fig4_dir,
            "fig5": fig5_dir, "fig6": fig6_dir}
