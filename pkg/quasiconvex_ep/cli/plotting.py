"""
Convergence plot of err_xy and err_step against k on a log scale.

Reads a trace CSV (or a benchmark mean-error curve, which has the same
k/err_xy/err_step columns), writes an SVG chart and the plotted data as CSV.
Non-positive and missing errors cannot sit on a log axis and are left out.
"""

import logging
from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from quasiconvex_ep.config.settings import CSV_FLOAT_FORMAT  # noqa: E402
from quasiconvex_ep.core.errors import ConfigError  # noqa: E402

logger = logging.getLogger(__name__)

PLOT_COLUMNS = ["k", "err_xy", "err_step"]

SERIES_STYLE = {
    "err_xy": {"label": "||x_k - y_k||", "color": "#1f77b4"},
    "err_step": {"label": "||x_k+1 - x_k||", "color": "#d62728"},
}


def load_plot_data(trace_path: Union[str, Path]) -> pd.DataFrame:
    """
    Raises:
        ConfigError: unreadable or empty trace, or missing columns
    """
    trace_path = Path(trace_path)
    try:
        frame = pd.read_csv(trace_path)
    except (OSError, pd.errors.EmptyDataError, pd.errors.ParserError) as exc:
        raise ConfigError(f"cannot read trace {trace_path}: {exc}") from exc
    missing = [c for c in PLOT_COLUMNS if c not in frame.columns]
    if missing:
        raise ConfigError(f"trace {trace_path} lacks columns {missing}")
    if frame.empty:
        raise ConfigError(f"trace {trace_path} has no rows")

    data = frame[PLOT_COLUMNS].copy()
    for column in ("err_xy", "err_step"):
        values = data[column].to_numpy(dtype=float)
        data[column] = np.where(values > 0, values, np.nan)
    return data


def plot_trace(
    trace_path: Union[str, Path],
    output_path: Union[str, Path],
    data_path: Optional[Union[str, Path]] = None,
) -> Path:
    """Render the two error series and save the chart as SVG."""
    data = load_plot_data(trace_path)
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)

    fig, ax = plt.subplots(figsize=(7, 4.5), facecolor="white")
    for column, style in SERIES_STYLE.items():
        series = data[["k", column]].dropna()
        if series.empty:
            continue
        ax.plot(series["k"], series[column], marker="o", markersize=2.5, linewidth=1.2, **style)

    ax.set_yscale("log")
    ax.set_xlabel("k")
    ax.set_ylabel("error")
    ax.grid(True, which="both", alpha=0.3)
    if ax.get_legend_handles_labels()[0]:
        ax.legend()
    plt.tight_layout()
    fig.savefig(output_path, format="svg")
    plt.close(fig)
    logger.info(f"Plot written to {output_path}")

    data_path = Path(data_path) if data_path else output_path.with_suffix(".csv")
    data.to_csv(data_path, index=False, float_format=CSV_FLOAT_FORMAT)
    return output_path
