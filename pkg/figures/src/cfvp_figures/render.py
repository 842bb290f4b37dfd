"""Figure construction from the documented CSV schemas.

Five figure ids:

  fig2  mean infected fraction per stage, full process (solid) against the
        single-layer baseline (dashed), one color/marker per degree
  fig3  final G versus lambda per k_a at fixed k_b, collapse-threshold inset
  fig4  final G versus lambda per k_b at fixed k_a, collapse-threshold inset
  fig5  final G versus q per k_a at fixed k_b, one panel per strategy
  fig6  final G versus q per k_b at fixed k_a, one panel per strategy

Series points are sorted on the x value and series are drawn in sorted key
order, so reordering CSV rows yields an identical image.  Figures are
built without pyplot; saving works headless.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib
from matplotlib.figure import Figure

from .data import (
    NOT_REACHED,
    EmptySeriesError,
    FigureDataError,
    read_rows,
    single_value,
)

__all__ = ["FIGURE_IDS", "INPUT_FILES", "FigureSpec", "build_figure", "render"]

INPUT_FILES = {
    "fig2": ("timeseries.csv",),
    "fig3": ("sweep_lambda.csv", "lambda_c.csv"),
    "fig4": ("sweep_lambda.csv", "lambda_c.csv"),
    "fig5": ("sweep_q.csv",),
    "fig6": ("sweep_q.csv",),
}
FIGURE_IDS = tuple(sorted(INPUT_FILES))

# degree -> marker, shared by every figure: 4 squares, 6 triangles,
# 8 circles, 10 diamonds, 16 stars
MARKERS = {4: "s", 6: "^", 8: "o", 10: "D", 16: "*"}
FIG2_COLORS = {4: "black", 6: "tab:blue", 8: "tab:green", 10: "tab:red"}
STRATEGY_ORDER = ("deterministic", "degree")


def _marker(k: int) -> str:
    return MARKERS.get(k, "x")


@dataclass(frozen=True)
class FigureSpec:
    """One rendering job: a figure id, its input CSVs, the output path."""

    figure_id: str
    inputs: tuple
    output: Path

    def __post_init__(self) -> None:
        if self.figure_id not in INPUT_FILES:
            raise FigureDataError(
                f"unknown figure id {self.figure_id!r}: expected one of {', '.join(FIGURE_IDS)}"
            )
        object.__setattr__(self, "inputs", tuple(Path(p) for p in self.inputs))
        object.__setattr__(self, "output", Path(self.output))

    @classmethod
    def for_directory(cls, figure_id: str, directory, output=None) -> "FigureSpec":
        """Spec with the conventional file names resolved under one directory."""
        if figure_id not in INPUT_FILES:
            raise FigureDataError(
                f"unknown figure id {figure_id!r}: expected one of {', '.join(FIGURE_IDS)}"
            )
        base = Path(directory)
        inputs = tuple(base / name for name in INPUT_FILES[figure_id])
        if output is None:
            output = f"{figure_id}.png"
        return cls(figure_id, inputs, output)


def _fig2(inputs: tuple) -> Figure:
    rows = read_rows(inputs[0], ("mode", "k", "lambda", "stage", "mean_f_i_current"))
    lam = single_value(rows, "lambda", inputs[0])
    series = {}
    for row in rows:
        key = (int(row["k"]), row["mode"])
        series.setdefault(key, []).append((int(row["stage"]), float(row["mean_f_i_current"])))
    fig = Figure(figsize=(6.4, 4.8))
    ax = fig.add_subplot()
    for k, mode in sorted(series):
        points = sorted(series[(k, mode)])
        ax.plot(
            [s for s, _ in points],
            [f for _, f in points],
            linestyle="-" if mode == "cfvp" else "--",
            marker=_marker(k),
            markersize=4,
            color=FIG2_COLORS.get(k, "tab:gray"),
            label=f"k={k}, {mode}",
        )
    ax.set_xlabel("time stage")
    ax.set_ylabel("mean infected fraction")
    ax.set_title(f"infection per stage at lambda={lam}")
    ax.legend(fontsize=8)
    return fig


def _series_by_degree(rows: list, series_col: str, x_col: str) -> dict:
    series = {}
    for row in rows:
        series.setdefault(int(row[series_col]), []).append(
            (float(row[x_col]), float(row["mean_g"]))
        )
    return series


def _fig_lambda(inputs: tuple, series_col: str, fixed_col: str) -> Figure:
    sweep = read_rows(inputs[0], ("k_a", "k_b", "lambda", "mean_g"))
    thresholds = read_rows(inputs[1], ("k_a", "k_b", "lambda_c"))
    fixed = single_value(sweep, fixed_col, inputs[0])
    fig = Figure(figsize=(6.4, 4.8))
    ax = fig.add_subplot()
    for k, points in sorted(_series_by_degree(sweep, series_col, "lambda").items()):
        points.sort()
        ax.plot(
            [x for x, _ in points],
            [g for _, g in points],
            marker=_marker(k),
            markersize=4,
            label=f"{series_col}={k}",
        )
    ax.set_xlim(0.0, 1.0)
    ax.set_xlabel("lambda")
    ax.set_ylabel("final G")
    ax.set_title(f"robustness vs transmissibility ({fixed_col}={fixed})")
    ax.legend(fontsize=8, loc="lower left")

    reached = sorted(
        (int(row[series_col]), float(row["lambda_c"]))
        for row in thresholds
        if row["lambda_c"] != NOT_REACHED
    )
    if not reached:
        raise EmptySeriesError(f"{inputs[1].name}: no reached collapse thresholds to inset")
    inset = fig.add_axes((0.62, 0.55, 0.26, 0.3))
    inset.plot([k for k, _ in reached], [c for _, c in reached], marker="o", color="black")
    inset.set_xlabel(series_col, fontsize=8)
    inset.set_ylabel("lambda_c", fontsize=8)
    inset.tick_params(labelsize=7)
    return fig


def _fig_q(inputs: tuple, series_col: str, fixed_col: str) -> Figure:
    rows = read_rows(inputs[0], ("k_a", "k_b", "strategy", "sigma", "q", "mean_g"))
    fixed = single_value(rows, fixed_col, inputs[0])
    present = {row["strategy"] for row in rows}
    strategies = [s for s in STRATEGY_ORDER if s in present]
    if not strategies:
        raise FigureDataError(
            f"{inputs[0].name}: no isolation-strategy rows (strategies found: {sorted(present)})"
        )
    fig = Figure(figsize=(4.0 * len(strategies), 4.2))
    for index, strategy in enumerate(strategies):
        ax = fig.add_subplot(1, len(strategies), index + 1)
        chosen = [row for row in rows if row["strategy"] == strategy]
        for k, points in sorted(_series_by_degree(chosen, series_col, "q").items()):
            points.sort()
            ax.plot(
                [x for x, _ in points],
                [g for _, g in points],
                marker=_marker(k),
                markersize=4,
                label=f"{series_col}={k}",
            )
        ax.set_xlim(0.0, 1.0)
        ax.set_xlabel("q")
        ax.set_ylabel("final G")
        title = strategy
        if strategy == "degree":
            sigmas = sorted({row["sigma"] for row in chosen})
            if len(sigmas) == 1:
                title = f"degree (sigma={sigmas[0]})"
        ax.set_title(f"({'ab'[index]}) {title} ({fixed_col}={fixed})", fontsize=10)
        ax.legend(fontsize=8, loc="lower right")
    return fig


_BUILDERS = {
    "fig2": lambda inputs: _fig2(inputs),
    "fig3": lambda inputs: _fig_lambda(inputs, "k_a", "k_b"),
    "fig4": lambda inputs: _fig_lambda(inputs, "k_b", "k_a"),
    "fig5": lambda inputs: _fig_q(inputs, "k_a", "k_b"),
    "fig6": lambda inputs: _fig_q(inputs, "k_b", "k_a"),
}

# lossless raster, or vector with volatile metadata stripped so identical
# inputs give identical bytes
_SAVE_OPTIONS = {
    ".png": {"dpi": 200},
    ".svg": {"metadata": {"Date": None}},
    ".pdf": {"metadata": {"CreationDate": None}},
}


def build_figure(spec: FigureSpec) -> Figure:
    """The assembled Figure, before any file is written."""
    return _BUILDERS[spec.figure_id](spec.inputs)


def render(spec: FigureSpec) -> Path:
    """Build the figure and write it to spec.output; returns the path."""
    suffix = spec.output.suffix.lower()
    options = _SAVE_OPTIONS.get(suffix)
    if options is None:
        raise FigureDataError(
            f"unsupported output format {suffix or spec.output.name!r}: use .png, .svg, or .pdf"
        )
    fig = build_figure(spec)
    # a fixed hash salt keeps SVG element ids, and so the bytes, stable
    with matplotlib.rc_context({"svg.hashsalt": "figures"}):
        fig.savefig(spec.output, **options)
    return spec.output
