"""
Quasiconvex Equilibrium Solver - Linesearch Extragradient Driver

This module runs the outer iteration. Each step:

1. y_k = prox point of f(x_k, .) with regularization rho_k
2. stop if y_k = x_k (exactly, or within tol_xy)
3. z_k = x_k + theta^m (y_k - x_k) by backtracking
4. g_k = unit star-subgradient of f(z_k, .) at x_k
5. x_{k+1} = P_C(x_k - sigma_k g_k); stop if it did not move (exactly, or within tol_step)
"""

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np
from numpy.typing import ArrayLike

from quasiconvex_ep.bifunctions.base import Bifunction
from quasiconvex_ep.config.settings import (
    DEFAULT_ALPHA,
    DEFAULT_M_MAX,
    DEFAULT_MAX_ITERS,
    DEFAULT_RHO,
    DEFAULT_SEED,
    DEFAULT_SIGMA_SCALE,
    DEFAULT_THETA,
    DEFAULT_TOL,
    FEASIBILITY_TOL,
)
from quasiconvex_ep.core.errors import InvalidArgument, LinesearchExhausted, ProxFailure, ZeroSubgradient
from quasiconvex_ep.core.sets import FeasibleSet, Point, as_point, contains

from .linesearch import LinesearchParams, linesearch
from .prox import ProxMethod, ProxProblem, solve_prox
from .schedules import ConstantRho, HarmonicSigma, RhoSchedule, SigmaSchedule, rho_at, sigma_at

logger = logging.getLogger(__name__)


class SolveStatus(Enum):
    """Why the iteration stopped."""
    FIXED_POINT = "FixedPoint"
    STEP_FIXED = "StepFixed"
    TOL_XY = "TolXY"
    TOL_STEP = "TolStep"
    MAX_ITERS = "MaxIters"
    LINESEARCH_EXHAUSTED = "LinesearchExhausted"
    ZERO_SUBGRADIENT = "ZeroSubgradient"


STATIONARY_CAVEAT = (
    "without pseudo- or strong quasiconvexity a fixed point of the prox map "
    "may be a stationary point rather than a solution"
)

STATUS_MESSAGES = {
    SolveStatus.FIXED_POINT: f"prox point equals the iterate; {STATIONARY_CAVEAT}",
    SolveStatus.STEP_FIXED: "projection step did not move the iterate; the linesearch point solves the problem",
    SolveStatus.TOL_XY: f"||x - y|| below tolerance; {STATIONARY_CAVEAT}",
    SolveStatus.TOL_STEP: "||x_next - x|| below tolerance",
    SolveStatus.MAX_ITERS: "iteration cap reached",
    SolveStatus.LINESEARCH_EXHAUSTED: "no backtracking exponent passed the descent test",
    SolveStatus.ZERO_SUBGRADIENT: "star-subgradient vanished at the linesearch point",
}


@dataclass(frozen=True)
class SolverConfig:
    alpha: float = DEFAULT_ALPHA
    theta: float = DEFAULT_THETA
    rho_schedule: RhoSchedule = field(default_factory=lambda: ConstantRho(DEFAULT_RHO))
    sigma_schedule: SigmaSchedule = field(default_factory=lambda: HarmonicSigma(DEFAULT_SIGMA_SCALE))
    tol_xy: float = DEFAULT_TOL
    tol_step: float = DEFAULT_TOL
    max_iters: int = DEFAULT_MAX_ITERS
    prox_method: Optional[ProxMethod] = None
    m_max: int = DEFAULT_M_MAX
    record_trace: bool = True
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        # validates alpha, theta and m_max
        self.linesearch_params
        if not (self.tol_xy > 0 and self.tol_step > 0):
            raise InvalidArgument(f"tolerances must be positive, got {self.tol_xy} and {self.tol_step}")
        if self.max_iters < 1:
            raise InvalidArgument(f"max_iters must be at least 1, got {self.max_iters}")

    @property
    def linesearch_params(self) -> LinesearchParams:
        return LinesearchParams(self.alpha, self.theta, self.m_max)


@dataclass(frozen=True, eq=False)
class IterationRecord:
    """Quantities of one iteration; z, g and x_next are None when it stopped early."""

    k: int
    x: Point
    y: Point
    z: Optional[Point]
    m: int
    g: Optional[Point]
    x_next: Optional[Point]
    rho_k: float
    sigma_k: float
    err_xy: float
    err_step: float
    prox_flag: bool


@dataclass(frozen=True, eq=False)
class StepOutcome:
    record: IterationRecord
    x_next: Optional[Point]
    status: Optional[SolveStatus]
    final: Optional[Point]

    @property
    def terminal(self) -> bool:
        return self.status is not None


@dataclass(eq=False)
class SolveResult:
    status: SolveStatus
    final: Point
    iterations: int
    trace: List[IterationRecord]
    wall_time: float
    projected_start: bool = False
    message: str = ""
    last_record: Optional[IterationRecord] = None

    @property
    def final_error(self) -> float:
        """Smaller of the last recorded ||x - y|| and ||x_next - x||."""
        if self.last_record is None:
            return float("nan")
        errors = np.array([self.last_record.err_xy, self.last_record.err_step])
        if np.all(np.isnan(errors)):
            return float("nan")
        return float(np.nanmin(errors))


def step(f: Bifunction, feasible_set: FeasibleSet, x_k: ArrayLike, k: int, config: SolverConfig) -> StepOutcome:
    """
    One iteration from a feasible x_k.

    A prox failure is not fatal: the best candidate is used and the record
    is flagged. Linesearch exhaustion and a vanishing subgradient end the run
    with final point x_k.
    """
    x_k = as_point(x_k, f.dim)
    rho = rho_at(config.rho_schedule, k)
    sigma = sigma_at(config.sigma_schedule, k)

    problem = ProxProblem(f, x_k, rho, feasible_set)
    prox_flag = False
    try:
        y = solve_prox(problem, config.prox_method, np.random.default_rng([config.seed, k]))
    except ProxFailure as exc:
        logger.warning(f"k={k}: {exc}")
        prox_flag = True
        y = x_k if exc.best is None else exc.best

    err_xy = float(np.linalg.norm(y - x_k))

    def stopped(status: SolveStatus, final: Point, **fields) -> StepOutcome:
        values = dict(z=None, m=0, g=None, x_next=None, err_step=float("nan"))
        values.update(fields)
        record = IterationRecord(
            k=k, x=x_k, y=y, rho_k=rho, sigma_k=sigma, err_xy=err_xy, prox_flag=prox_flag, **values
        )
        return StepOutcome(record, values["x_next"], status, final)

    if np.array_equal(y, x_k):
        return stopped(SolveStatus.FIXED_POINT, x_k)
    if err_xy < config.tol_xy:
        return stopped(SolveStatus.TOL_XY, x_k)

    try:
        z, m = linesearch(f, x_k, y, rho, config.linesearch_params)
    except LinesearchExhausted as exc:
        logger.warning(f"k={k}: {exc}")
        return stopped(SolveStatus.LINESEARCH_EXHAUSTED, x_k)

    try:
        g = f.star_subgradient(z, x_k)
    except ZeroSubgradient as exc:
        logger.warning(f"k={k}: {exc}")
        return stopped(SolveStatus.ZERO_SUBGRADIENT, x_k, z=z, m=m)

    x_next = feasible_set.project(x_k - sigma * g)
    err_step = float(np.linalg.norm(x_next - x_k))
    fields = dict(z=z, m=m, g=g, x_next=x_next, err_step=err_step)

    if np.array_equal(x_next, x_k):
        return stopped(SolveStatus.STEP_FIXED, z, **fields)
    if err_step < config.tol_step:
        return stopped(SolveStatus.TOL_STEP, x_next, **fields)

    record = IterationRecord(
        k=k, x=x_k, y=y, rho_k=rho, sigma_k=sigma, err_xy=err_xy, prox_flag=prox_flag, **fields
    )
    return StepOutcome(record, x_next, None, x_next)


def solve(f: Bifunction, feasible_set: FeasibleSet, x0: ArrayLike, config: Optional[SolverConfig] = None) -> SolveResult:
    """
    Iterate from x0 until a stopping status or max_iters.

    An infeasible x0 is projected onto the set first and the result is
    flagged with projected_start. `iterations` counts step calls.

    Args:
        f: Bifunction
        feasible_set: Closed convex set C
        x0: Starting point
        config: Solver parameters (defaults when omitted)

    Returns:
        SolveResult with status, final point, iteration count and trace
    """
    config = config or SolverConfig()
    x = as_point(x0, f.dim)
    projected_start = False
    if not contains(feasible_set, x, FEASIBILITY_TOL):
        logger.warning(f"Starting point {x} is infeasible; projecting onto the set")
        x = feasible_set.project(x)
        projected_start = True

    trace: List[IterationRecord] = []
    started = time.perf_counter()
    last: Optional[IterationRecord] = None

    for k in range(config.max_iters):
        outcome = step(f, feasible_set, x, k, config)
        last = outcome.record
        logger.debug(f"k={k} err_xy={last.err_xy:.3e} err_step={last.err_step:.3e} m={last.m}")
        if config.record_trace:
            trace.append(outcome.record)
        if outcome.terminal:
            elapsed = time.perf_counter() - started
            logger.info(f"Stopped with {outcome.status.value} after {k + 1} iterations")
            return SolveResult(
                status=outcome.status,
                final=outcome.final,
                iterations=k + 1,
                trace=trace,
                wall_time=elapsed,
                projected_start=projected_start,
                message=STATUS_MESSAGES[outcome.status],
                last_record=last,
            )
        x = outcome.x_next

    elapsed = time.perf_counter() - started
    logger.info(f"Reached the cap of {config.max_iters} iterations")
    return SolveResult(
        status=SolveStatus.MAX_ITERS,
        final=x,
        iterations=config.max_iters,
        trace=trace,
        wall_time=elapsed,
        projected_start=projected_start,
        message=STATUS_MESSAGES[SolveStatus.MAX_ITERS],
        last_record=last,
    )
