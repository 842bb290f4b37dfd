"""Chart rendering for the robustness-experiment CSV outputs.

Consumes only the documented CSV schemas (timeseries.csv,
sweep_lambda.csv, lambda_c.csv, sweep_q.csv) and writes one image per
figure id; see render.FIGURE_IDS.
"""

from .data import EmptySeriesError, FigureDataError, MissingColumnError
from .render import FIGURE_IDS, INPUT_FILES, FigureSpec, build_figure, render

__all__ = [
    "EmptySeriesError",
    "FigureDataError",
    "MissingColumnError",
    "FIGURE_IDS",
    "INPUT_FILES",
    "FigureSpec",
    "build_figure",
    "render",
]

__version__ = "0.1.0"
