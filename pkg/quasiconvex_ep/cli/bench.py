"""
Quasiconvex Equilibrium Solver - Random Benchmark

This module solves batches of random fractional-max instances per size n and
aggregates CPU time and final error min(||x - y||, ||x - x_next||):

- one row per instance (in instance order, whatever the completion order)
- one aggregate row per size
- optionally, per size, the mean error curve over the first iterations in
  the k/err_xy/err_step shape the plot command reads
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from quasiconvex_ep.config.settings import BENCH_WORKERS, CSV_FLOAT_FORMAT
from quasiconvex_ep.core.errors import InvalidArgument, QuasiEPError
from quasiconvex_ep.problems import random_fractional
from quasiconvex_ep.solver import SolveStatus, solve

logger = logging.getLogger(__name__)

BREAKDOWN_STATUSES = {SolveStatus.LINESEARCH_EXHAUSTED, SolveStatus.ZERO_SUBGRADIENT}

AGGREGATE_COLUMNS = ["n", "count", "failures", "mean_cpu_time", "mean_error", "median_error"]


def instance_seed(seed: int, n: int, index: int) -> int:
    """Independent per-instance seed derived from (seed, n, index)."""
    return int(np.random.SeedSequence([seed, n, index]).generate_state(1)[0])


def run_instance(n: int, index: int, seed: int, curve_length: int = 0) -> dict:
    """
    Solve one random instance; failures are captured in the row, never raised.

    Module-level so process pools can pickle it.
    """
    row = {"n": n, "index": index, "seed": seed}
    try:
        instance = random_fractional(n, seed)
        started = time.process_time()
        result = solve(instance.f, instance.feasible_set, instance.x0, instance.config)
        cpu_time = time.process_time() - started
    except (QuasiEPError, ValueError) as exc:
        logger.warning(f"n={n} instance {index} failed: {exc}")
        row.update(status="Error", iterations=0, cpu_time=np.nan, error=np.nan, failed=True)
        row.update(curve_xy=[], curve_step=[])
        return row

    row.update(
        status=result.status.value,
        iterations=result.iterations,
        cpu_time=cpu_time,
        error=result.final_error,
        failed=result.status in BREAKDOWN_STATUSES,
    )
    head = result.trace[:curve_length]
    row.update(curve_xy=[r.err_xy for r in head], curve_step=[r.err_step for r in head])
    return row


def mean_curve(rows: List[dict], curve_length: int) -> pd.DataFrame:
    """Mean err_xy and err_step per k over the instances that reached k."""
    xy = np.full((len(rows), curve_length), np.nan)
    step = np.full((len(rows), curve_length), np.nan)
    for i, row in enumerate(rows):
        xy[i, : len(row["curve_xy"])] = row["curve_xy"]
        step[i, : len(row["curve_step"])] = row["curve_step"]
    reached = ~np.all(np.isnan(xy), axis=0)
    ks = np.arange(curve_length)[reached]
    with np.errstate(all="ignore"):
        return pd.DataFrame({
            "k": ks,
            "err_xy": np.nanmean(xy[:, reached], axis=0),
            "err_step": np.nanmean(step[:, reached], axis=0),
        })


class BenchmarkRunner:
    """
    Random-instance sweep over several sizes.

    Usage:
        runner = BenchmarkRunner(sizes=[5, 10], count=100, seed=0)
        aggregate = runner.run()
        runner.export(aggregate, aggregate_path, instances_path)
    """

    def __init__(
        self,
        sizes: Sequence[int],
        count: int,
        seed: int = 0,
        workers: int = BENCH_WORKERS,
        curve_length: int = 0,
        progress: bool = True,
    ):
        if not sizes or any(n < 1 for n in sizes):
            raise InvalidArgument(f"sizes must be positive integers, got {list(sizes)}")
        if count < 1:
            raise InvalidArgument(f"count must be at least 1, got {count}")
        if workers < 1:
            raise InvalidArgument(f"workers must be at least 1, got {workers}")
        self.sizes = list(sizes)
        self.count = count
        self.seed = seed
        self.workers = workers
        self.curve_length = max(curve_length, 0)
        self.progress = progress

        self.rows: List[dict] = []
        self.curves: Dict[int, pd.DataFrame] = {}

    def _jobs(self) -> List[tuple]:
        return [
            (n, i, instance_seed(self.seed, n, i), self.curve_length)
            for n in self.sizes
            for i in range(self.count)
        ]

    def _execute(self, jobs: List[tuple]) -> List[dict]:
        bar = tqdm(total=len(jobs), desc="bench", disable=not self.progress)
        if self.workers == 1:
            rows = []
            for job in jobs:
                rows.append(run_instance(*job))
                bar.update(1)
        else:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                futures = [pool.submit(run_instance, *job) for job in jobs]
                rows = []
                # collected in submission order
                for future in futures:
                    rows.append(future.result())
                    bar.update(1)
        bar.close()
        return rows

    def aggregate(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.rows)
        records = []
        for n in self.sizes:
            part = frame[frame["n"] == n]
            records.append({
                "n": n,
                "count": len(part),
                "failures": int(part["failed"].sum()),
                "mean_cpu_time": float(part["cpu_time"].mean()),
                "mean_error": float(part["error"].mean()),
                "median_error": float(part["error"].median()),
            })
        return pd.DataFrame(records, columns=AGGREGATE_COLUMNS)

    def run(self) -> pd.DataFrame:
        """Solve every instance and return the aggregate table."""
        # Step 1: Solve
        self.rows = self._execute(self._jobs())

        # Step 2: Curves
        if self.curve_length:
            for n in self.sizes:
                self.curves[n] = mean_curve([r for r in self.rows if r["n"] == n], self.curve_length)

        # Step 3: Aggregate
        aggregate = self.aggregate()
        for record in aggregate.itertuples():
            logger.info(
                f"n={record.n}: {record.count} instances, {record.failures} failures, "
                f"mean cpu {record.mean_cpu_time:.4g}s, mean error {record.mean_error:.4g}"
            )
        return aggregate

    def instances_frame(self) -> pd.DataFrame:
        columns = ["n", "index", "seed", "status", "iterations", "cpu_time", "error", "failed"]
        return pd.DataFrame(self.rows)[columns]

    def export(
        self,
        aggregate: pd.DataFrame,
        aggregate_path: Path,
        instances_path: Optional[Path] = None,
        curve_dir: Optional[Path] = None,
    ) -> List[Path]:
        written = []
        aggregate_path = Path(aggregate_path)
        aggregate_path.parent.mkdir(parents=True, exist_ok=True)
        aggregate.to_csv(aggregate_path, index=False, float_format=CSV_FLOAT_FORMAT)
        written.append(aggregate_path)

        if instances_path is not None:
            instances_path = Path(instances_path)
            instances_path.parent.mkdir(parents=True, exist_ok=True)
            self.instances_frame().to_csv(instances_path, index=False, float_format=CSV_FLOAT_FORMAT)
            written.append(instances_path)

        if curve_dir is not None and self.curves:
            curve_dir = Path(curve_dir)
            curve_dir.mkdir(parents=True, exist_ok=True)
            for n, curve in self.curves.items():
                path = curve_dir / f"curve_n{n}.csv"
                curve.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
                written.append(path)

        logger.info(f"Benchmark results exported to: {', '.join(str(p) for p in written)}")
        return written
