"""
Trace CSV and summary JSON writers.

Trace columns, in order: k, x_0 .. x_{n-1}, err_xy, err_step, sigma, rho, m,
prox_flag. When the reported final point differs from the last recorded
iterate, a terminal row (k = iterations, x = final, NaN quantities, m = 0)
is appended so the last row always matches the summary.
"""

import json
import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from quasiconvex_ep.config.settings import CSV_FLOAT_FORMAT, TRACE_LEADING_COLUMNS, TRACE_TRAILING_COLUMNS
from quasiconvex_ep.problems import ProblemInstance
from quasiconvex_ep.solver import SolveResult

logger = logging.getLogger(__name__)


def trace_columns(dim: int) -> list:
    return [*TRACE_LEADING_COLUMNS, *(f"x_{i}" for i in range(dim)), *TRACE_TRAILING_COLUMNS]


def trace_frame(result: SolveResult, dim: int) -> pd.DataFrame:
    rows = []
    for record in result.trace:
        rows.append([
            record.k,
            *record.x,
            record.err_xy,
            record.err_step,
            record.sigma_k,
            record.rho_k,
            record.m,
            int(record.prox_flag),
        ])

    last_x = result.trace[-1].x if result.trace else None
    if last_x is None or not np.array_equal(result.final, last_x):
        rows.append([result.iterations, *result.final, np.nan, np.nan, np.nan, np.nan, 0, 0])

    frame = pd.DataFrame(rows, columns=trace_columns(dim))
    return frame.astype({"k": int, "m": int, "prox_flag": int})


def write_trace(result: SolveResult, dim: int, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    trace_frame(result, dim).to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    logger.info(f"Trace written to {path}")
    return path


def summary_dict(result: SolveResult, instance: ProblemInstance) -> dict:
    return {
        "problem": instance.name,
        "status": result.status.value,
        "iterations": result.iterations,
        "final": [float(v) for v in result.final],
        "wall_time": result.wall_time,
        "final_error": None if np.isnan(result.final_error) else result.final_error,
        "projected_start": result.projected_start,
        "message": result.message,
    }


def write_summary(result: SolveResult, instance: ProblemInstance, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # json writes floats with repr, which round-trips exactly
    path.write_text(json.dumps(summary_dict(result, instance), indent=2))
    logger.info(f"Summary written to {path}")
    return path
