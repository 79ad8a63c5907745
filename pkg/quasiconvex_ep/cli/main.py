"""
Quasiconvex Equilibrium Solver - Command Line

Subcommands:
    run     solve one configured problem; write trace CSV and summary JSON
    bench   random-instance sweep; write aggregate, per-instance and curve CSVs
    verify  grid residuals, quasiconvexity probe, star-subgradient check and
            stationarity at a point
    plot    SVG convergence chart from a trace or curve CSV

Exit codes: 0 success, 1 config/IO error, 2 numerical breakdown, 3 oracle unavailable.
"""

import argparse
import json
import logging
import logging.config
import sys
from pathlib import Path
from typing import List, Optional

from quasiconvex_ep.config.settings import (
    BENCH_SIZES,
    BENCH_WORKERS,
    DEFAULT_MAX_ITERS,
    DEFAULT_SEED,
    EXIT_CONFIG_ERROR,
    EXIT_NUMERICAL_BREAKDOWN,
    EXIT_OK,
    EXIT_ORACLE_UNAVAILABLE,
    LOGGING_CONFIG,
    OUTPUT_DIR,
    ORACLE_MAX_DIM,
    PROBE_SAMPLES,
)
from quasiconvex_ep.core.errors import ConfigError, DomainError, GridTooLarge, QuasiEPError, ZeroSubgradient
from quasiconvex_ep.solver import solve
from quasiconvex_ep.verification import (
    dual_residual,
    gap,
    quasi_residual,
    quasiconvexity_probe,
    solution_epsilon,
    star_subgradient_check,
    stationarity_report,
)

from .bench import BREAKDOWN_STATUSES, BenchmarkRunner
from .plotting import plot_trace
from .reporting import write_summary, write_trace
from .schema import build_run, load_run_config

logger = logging.getLogger(__name__)


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_run(args: argparse.Namespace) -> int:
    config_file = load_run_config(args.config)
    instance = build_run(config_file)

    trace_path = Path(args.trace or config_file.output.trace or OUTPUT_DIR / f"{instance.name}_trace.csv")
    summary_path = Path(args.summary or config_file.output.summary or OUTPUT_DIR / f"{instance.name}_summary.json")

    logger.info(f"Solving {instance.name} (n={instance.dim})")
    result = solve(instance.f, instance.feasible_set, instance.x0, instance.config)

    write_trace(result, instance.dim, trace_path)
    write_summary(result, instance, summary_path)
    print(f"{instance.name}: {result.status.value} after {result.iterations} iterations; final {result.final.tolist()}")

    if result.status in BREAKDOWN_STATUSES:
        logger.error(result.message)
        return EXIT_NUMERICAL_BREAKDOWN
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    runner = BenchmarkRunner(
        sizes=args.n,
        count=args.count,
        seed=args.seed,
        workers=args.workers,
        curve_length=args.curve_length if args.curve_dir else 0,
        progress=not args.no_progress,
    )
    aggregate = runner.run()
    runner.export(aggregate, Path(args.output), args.instances and Path(args.instances), args.curve_dir and Path(args.curve_dir))
    print(aggregate.to_string(index=False))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    instance = build_run(load_run_config(args.config))
    point = args.point if args.point is not None else instance.x0.tolist()
    f, feasible_set = instance.f, instance.feasible_set
    if instance.dim > ORACLE_MAX_DIM:
        raise GridTooLarge(f"{instance.name} has dimension {instance.dim}; grid oracles support n <= {ORACLE_MAX_DIM}")

    epsilon = args.epsilon if args.epsilon is not None else solution_epsilon(f, feasible_set, seed=args.seed)
    gap_report = gap(f, feasible_set, point, args.resolution)
    quasi_report = quasi_residual(f, feasible_set, point, args.rho, args.resolution)
    dual_report = dual_residual(f, feasible_set, point, args.resolution)
    probe = quasiconvexity_probe(f, feasible_set, point, samples=args.probe_samples, seed=args.seed)
    stationarity = stationarity_report(f, feasible_set, point, args.resolution)
    try:
        star = star_subgradient_check(f, feasible_set, point, point, seed=args.seed).to_dict()
    except (ZeroSubgradient, DomainError) as exc:
        logger.warning(f"Star-subgradient check skipped: {exc}")
        star = None

    report = {
        "problem": instance.name,
        "point": [float(v) for v in point],
        "rho": args.rho,
        "epsilon": epsilon,
        "gap": gap_report.to_dict(),
        "quasi_residual": quasi_report.to_dict(),
        "dual_residual": dual_report.to_dict(),
        "probe": probe.to_dict(),
        "stationarity": stationarity.to_dict(),
        "star_subgradient": star,
        "is_solution": gap_report.value >= -epsilon,
        "is_quasi_solution": quasi_report.value >= -epsilon,
        "is_dual_solution": dual_report.value <= epsilon,
    }
    text = json.dumps(report, indent=2)
    if args.output:
        output = Path(args.output)
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(text)
        logger.info(f"Verification report written to {output}")
    print(text)
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    plot_trace(args.trace, args.output, args.data)
    return EXIT_OK


# =============================================================================
# PARSER
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasiconvex-ep",
        description="Linesearch extragradient solver for quasiconvex equilibrium problems",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="solve a configured problem")
    run.add_argument("config", help="run-config JSON file")
    run.add_argument("--trace", help="trace CSV path (overrides the config)")
    run.add_argument("--summary", help="summary JSON path (overrides the config)")
    run.set_defaults(handler=cmd_run)

    bench = sub.add_parser("bench", help="random fractional-max benchmark")
    bench.add_argument("--n", type=int, nargs="+", default=BENCH_SIZES, help="problem sizes")
    bench.add_argument("--count", type=int, default=100, help="instances per size")
    bench.add_argument("--seed", type=int, default=DEFAULT_SEED)
    bench.add_argument("--workers", type=int, default=BENCH_WORKERS, help="worker processes")
    bench.add_argument("--output", default=str(OUTPUT_DIR / "bench.csv"), help="aggregate CSV path")
    bench.add_argument("--instances", help="per-instance CSV path")
    bench.add_argument("--curve-dir", help="directory for mean error curves, one CSV per size")
    bench.add_argument("--curve-length", type=int, default=DEFAULT_MAX_ITERS, help="iterations per curve")
    bench.add_argument("--no-progress", action="store_true", help="hide the progress bar")
    bench.set_defaults(handler=cmd_bench)

    verify = sub.add_parser("verify", help="brute-force residuals at a point")
    verify.add_argument("config", help="run-config JSON file")
    verify.add_argument("--point", type=float, nargs="+", help="point to check (default x0)")
    verify.add_argument("--rho", type=float, default=1.0, help="rho of the quasi-solution residual")
    verify.add_argument("--resolution", type=float, default=1e-3, help="lattice spacing")
    verify.add_argument("--epsilon", type=float, help="solution tolerance (default relative to max |f|)")
    verify.add_argument("--probe-samples", type=int, default=PROBE_SAMPLES)
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify.add_argument("--output", help="report JSON path")
    verify.set_defaults(handler=cmd_verify)

    plot = sub.add_parser("plot", help="SVG convergence chart")
    plot.add_argument("trace", help="trace or curve CSV")
    plot.add_argument("output", help="SVG path")
    plot.add_argument("--data", help="plot-data CSV path (default next to the SVG)")
    plot.set_defaults(handler=cmd_plot)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors are configuration errors; --help exits cleanly
        return EXIT_CONFIG_ERROR if exc.code else EXIT_OK

    logging.config.dictConfig(LOGGING_CONFIG)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        return args.handler(args)
    except GridTooLarge as exc:
        logger.error(f"Oracle unavailable: {exc}")
        return EXIT_ORACLE_UNAVAILABLE
    except DomainError as exc:
        logger.error(f"Numerical breakdown: {exc}")
        return EXIT_NUMERICAL_BREAKDOWN
    except (ConfigError, QuasiEPError, OSError) as exc:
        logger.error(str(exc))
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
