"""
Quasiconvex Equilibrium Solver - Prox Subproblem

This module solves the regularized subproblem

    minimize  f(x, y) + ||y - x||^2 / (2 rho)   over y in C

which is generally nonconvex when f(x, .) is only quasiconvex. Three
methods are offered:

- Golden1D: multistart golden-section search on 1-D intervals
- ProjGrad: multistart projected gradient with backtracking; for a max of
  smooth branches over a box, each start is solved in epigraph form instead
- GridPolish: lattice scan plus local polish (n <= 2, oracle grade); the
  lattice is coarsened until it fits under GRID_POLISH_MAX_POINTS

Every accepted answer is certified against the anchor: the objective must
not exceed PROX_CERTIFICATE_TOL (the anchor itself scores 0).
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Literal, Optional, Tuple, TypeAlias, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import minimize
from scipy.spatial.distance import pdist

from quasiconvex_ep.bifunctions.base import Bifunction
from quasiconvex_ep.config.settings import (
    BACKTRACK_BETA,
    BACKTRACK_C,
    DEFAULT_SEED,
    FEASIBILITY_TOL,
    GOLDEN_MULTISTART,
    GOLDEN_TOL,
    GRID_POLISH_CANDIDATES,
    GRID_POLISH_MAX_POINTS,
    GRID_POLISH_RESOLUTION,
    GRID_POLISH_TOL,
    PROJGRAD_MAX_ITERS,
    PROJGRAD_MULTISTART,
    PROJGRAD_TOL,
    PROX_CERTIFICATE_TOL,
)
from quasiconvex_ep.core.errors import DomainError, InvalidArgument, ProxFailure
from quasiconvex_ep.core.sets import Box, FeasibleSet, Point, as_point, contains, fit_resolution, grid, sample_points

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2

# Halvings allowed per backtracking search
MAX_BACKTRACKS = 60


# =============================================================================
# PROBLEM AND METHODS
# =============================================================================

@dataclass(frozen=True, eq=False)
class ProxProblem:
    """Regularized subproblem anchored at a feasible point."""

    f: Bifunction
    anchor: Point
    rho: float
    feasible_set: FeasibleSet

    def __post_init__(self):
        anchor = as_point(self.anchor, self.f.dim)
        if self.feasible_set.dim != self.f.dim:
            raise InvalidArgument(
                f"set dimension {self.feasible_set.dim} does not match bifunction dimension {self.f.dim}"
            )
        if not (np.isfinite(self.rho) and self.rho > 0):
            raise InvalidArgument(f"rho must be positive, got {self.rho}")
        if not contains(self.feasible_set, anchor, FEASIBILITY_TOL):
            raise InvalidArgument(f"prox anchor {anchor} is not feasible")
        object.__setattr__(self, "anchor", anchor)

    @property
    def dim(self) -> int:
        return self.f.dim

    def objective(self, y: ArrayLike) -> float:
        y = as_point(y, self.dim)
        diff = y - self.anchor
        return self.f.eval(self.anchor, y) + float(diff @ diff) / (2.0 * self.rho)

    def objective_batch(self, ys: NDArray[np.float64]) -> NDArray[np.float64]:
        ys = np.atleast_2d(ys)
        quad = np.sum((ys - self.anchor) ** 2, axis=1) / (2.0 * self.rho)
        return self.f.eval_batch(self.anchor, ys) + quad

    def gradient(self, y: ArrayLike) -> Point:
        y = as_point(y, self.dim)
        return self.f.grad2(self.anchor, y) + (y - self.anchor) / self.rho


def prox_objective(problem: ProxProblem, y: ArrayLike) -> float:
    """f(x, y) + ||y - x||^2 / (2 rho) at the problem's anchor x."""
    return problem.objective(y)


@dataclass(frozen=True)
class Golden1D:
    multistart: int = GOLDEN_MULTISTART
    tol: float = GOLDEN_TOL

    def __post_init__(self):
        if self.multistart < 1 or not self.tol > 0:
            raise InvalidArgument("Golden1D needs multistart >= 1 and tol > 0")


@dataclass(frozen=True)
class ProjGrad:
    step_rule: Literal["backtracking", "fixed"] = "backtracking"
    beta: float = BACKTRACK_BETA
    c: float = BACKTRACK_C
    lipschitz: Optional[float] = None
    max_iters: int = PROJGRAD_MAX_ITERS
    tol: float = PROJGRAD_TOL
    multistart: int = PROJGRAD_MULTISTART
    epigraph_polish: bool = True

    def __post_init__(self):
        if self.step_rule not in ("backtracking", "fixed"):
            raise InvalidArgument(f"unknown step rule {self.step_rule!r}")
        if self.step_rule == "fixed" and not (self.lipschitz and self.lipschitz > 0):
            raise InvalidArgument("the fixed step rule needs a positive lipschitz constant")
        if not (0 < self.beta < 1 and 0 < self.c < 1):
            raise InvalidArgument("backtracking needs beta and c in (0, 1)")
        if self.max_iters < 1 or self.multistart < 1 or not self.tol > 0:
            raise InvalidArgument("ProjGrad needs max_iters >= 1, multistart >= 1 and tol > 0")


@dataclass(frozen=True)
class GridPolish:
    resolution: float = GRID_POLISH_RESOLUTION
    polish_tol: float = GRID_POLISH_TOL
    candidates: int = GRID_POLISH_CANDIDATES

    def __post_init__(self):
        if not (self.resolution > 0 and self.polish_tol > 0) or self.candidates < 1:
            raise InvalidArgument("GridPolish needs positive resolution, polish_tol and candidates")


ProxMethod: TypeAlias = Union[Golden1D, ProjGrad, GridPolish]


def default_method(dim: int) -> ProxMethod:
    return Golden1D() if dim == 1 else ProjGrad()


# =============================================================================
# GOLDEN SECTION (1-D)
# =============================================================================

def _golden_section(fun, a: float, b: float, tol: float) -> Tuple[float, float]:
    """Shrink [a, b] to a subinterval of width <= tol around a local minimizer."""
    h = b - a
    if h <= tol:
        return a, b
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = fun(c)
    yd = fun(d)
    for _ in range(n - 1):
        if yc < yd:
            b, d, yd = d, c, yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = fun(c)
        else:
            a, c, yc = c, d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = fun(d)
    return (a, d) if yc < yd else (c, b)


def _safe_objective(problem: ProxProblem, y: Point) -> float:
    try:
        return problem.objective(y)
    except DomainError:
        return math.inf


def _golden_candidates(problem: ProxProblem, lo: float, hi: float, method: Golden1D) -> List[Point]:
    edges = np.linspace(lo, hi, method.multistart + 1)
    refined = []
    for a, b in zip(edges[:-1], edges[1:]):
        left, right = _golden_section(
            lambda t: _safe_objective(problem, np.array([t])), float(a), float(b), method.tol
        )
        refined.append(0.5 * (left + right))
    # anchor first so exact ties keep y = x
    values = [problem.anchor[0], *edges, *refined]
    return [np.array([v]) for v in values]


def _solve_golden(problem: ProxProblem, method: Golden1D) -> List[Point]:
    if problem.dim != 1:
        raise InvalidArgument(f"Golden1D needs a 1-D problem, got dimension {problem.dim}")
    box = problem.feasible_set.bounding_box()
    candidates = _golden_candidates(problem, float(box.lo[0]), float(box.hi[0]), method)
    return [problem.feasible_set.project(p) for p in candidates]


# =============================================================================
# PROJECTED GRADIENT
# =============================================================================

def _starts(problem: ProxProblem, count: int, rng: np.random.Generator) -> List[Point]:
    """Anchor, a random box corner, the box center, then random points."""
    box = problem.feasible_set.bounding_box()
    corner = np.where(rng.random(box.dim) < 0.5, box.lo, box.hi)
    pool = [problem.anchor, corner, (box.lo + box.hi) / 2.0]
    extra = max(count - len(pool), 0)
    if extra:
        pool.extend(sample_points(problem.feasible_set, extra, rng))
    return [problem.feasible_set.project(p) for p in pool[:count]]


def _projected_gradient(problem: ProxProblem, start: Point, method: ProjGrad, tol: float) -> Point:
    project = problem.feasible_set.project
    y = start
    value = problem.objective(y)
    step = 1.0 / method.lipschitz if method.step_rule == "fixed" else 1.0

    for _ in range(method.max_iters):
        grad = problem.gradient(y)
        if method.step_rule == "fixed":
            candidate = project(y - step * grad)
            candidate_value = _safe_objective(problem, candidate)
        else:
            step = min(step / method.beta, 1.0)
            for _ in range(MAX_BACKTRACKS):
                candidate = project(y - step * grad)
                move = candidate - y
                candidate_value = _safe_objective(problem, candidate)
                if candidate_value <= value - (method.c / step) * float(move @ move):
                    break
                step *= method.beta
            else:
                break

        residual = float(np.linalg.norm(candidate - y)) / step
        if candidate_value <= value:
            y, value = candidate, candidate_value
        if residual <= tol:
            break
    return y


def _branch_constraints(problem: ProxProblem):
    f = problem.f
    anchor = problem.anchor
    rho = problem.rho
    n = problem.dim

    def fun(v):
        y, t = v[:n], v[n]
        quad = float((y - anchor) @ (y - anchor)) / (2.0 * rho)
        return t - f.branch_values(anchor, y) - quad

    def jac(v):
        y = v[:n]
        grads = f.branch_gradients(anchor, y) + (y - anchor) / rho
        return np.hstack([-grads, np.ones((grads.shape[0], 1))])

    return {"type": "ineq", "fun": fun, "jac": jac}


def _epigraph_applicable(problem: ProxProblem) -> bool:
    return problem.f.has_branches and isinstance(problem.feasible_set, Box)


def _epigraph_solve(problem: ProxProblem, y: Point, tol: float) -> Optional[Point]:
    """
    Local solve of min t s.t. branch_i + quad <= t from y.

    Returns None when SLSQP does not converge or a branch leaves its domain.
    """
    box = problem.feasible_set
    n = problem.dim
    bounds = [(lo, hi) for lo, hi in zip(box.lo, box.hi)] + [(None, None)]
    try:
        result = minimize(
            lambda v: v[n],
            np.append(y, problem.objective(y)),
            jac=lambda v: np.append(np.zeros(n), 1.0),
            method="SLSQP",
            bounds=bounds,
            constraints=[_branch_constraints(problem)],
            options={"ftol": tol, "maxiter": 200},
        )
    except (DomainError, ValueError) as exc:
        logger.debug(f"Epigraph solve skipped: {exc}")
        return None
    if not result.success:
        logger.debug(f"Epigraph solve did not converge: {result.message}")
        return None
    return box.project(result.x[:n])


def _epigraph_polish(problem: ProxProblem, y: Point, tol: float) -> Point:
    """Refine y in epigraph form; keep y unless the objective drops."""
    if not _epigraph_applicable(problem):
        return y
    polished = _epigraph_solve(problem, y, tol)
    if polished is not None and _safe_objective(problem, polished) < problem.objective(y):
        return polished
    return y


def _descend(problem: ProxProblem, start: Point, method: ProjGrad, index: int) -> Point:
    try:
        return _projected_gradient(problem, start, method, method.tol)
    except DomainError as exc:
        logger.debug(f"Start {index} abandoned: {exc}")
        return start


def _solve_projgrad(problem: ProxProblem, method: ProjGrad, rng: np.random.Generator) -> List[Point]:
    starts = _starts(problem, method.multistart, rng)
    results = []
    if method.epigraph_polish and _epigraph_applicable(problem):
        # epigraph form of the max per start; projected gradient only where SLSQP fails
        for index, start in enumerate(starts):
            solved = _epigraph_solve(problem, start, method.tol)
            if solved is None:
                solved = _descend(problem, start, method, index)
            results.append(solved)
        return [problem.anchor, *starts, *results]

    for index, start in enumerate(starts):
        results.append(_descend(problem, start, method, index))
    return [problem.anchor, *results]


# =============================================================================
# GRID + POLISH (oracle grade)
# =============================================================================

def _solve_grid_polish(problem: ProxProblem, method: GridPolish) -> List[Point]:
    if problem.dim > 2:
        raise InvalidArgument(f"GridPolish supports n <= 2, got dimension {problem.dim}")
    resolution = fit_resolution(problem.feasible_set, method.resolution, GRID_POLISH_MAX_POINTS)
    points = grid(problem.feasible_set, resolution, GRID_POLISH_MAX_POINTS)
    values = problem.objective_batch(points)
    order = np.argsort(values, kind="stable")[: method.candidates]

    candidates = [problem.anchor]
    for index in order:
        seed = points[index]
        candidates.append(seed)
        if problem.dim == 1:
            lo = max(seed[0] - resolution, problem.feasible_set.bounding_box().lo[0])
            hi = min(seed[0] + resolution, problem.feasible_set.bounding_box().hi[0])
            left, right = _golden_section(
                lambda t: _safe_objective(problem, np.array([t])), lo, hi, method.polish_tol
            )
            candidates.append(problem.feasible_set.project(np.array([0.5 * (left + right)])))
        else:
            local = ProjGrad(tol=method.polish_tol, multistart=1, epigraph_polish=False)
            try:
                polished = _projected_gradient(problem, seed, local, method.polish_tol)
            except DomainError:
                polished = seed
            candidates.append(_epigraph_polish(problem, polished, method.polish_tol))
    return candidates


# =============================================================================
# ENTRY POINTS
# =============================================================================

def solve_prox(
    problem: ProxProblem,
    method: Optional[ProxMethod] = None,
    rng: Optional[np.random.Generator] = None,
) -> Point:
    """
    Approximate global minimizer of the prox objective over C.

    Candidates from every start are compared by objective; the lowest wins
    and ties go to the earliest candidate, the anchor being first.

    Args:
        problem: Anchored subproblem
        method: Golden1D, ProjGrad or GridPolish (default by dimension)
        rng: Source of random starts (default seeded with DEFAULT_SEED)

    Returns:
        Feasible point y with objective <= PROX_CERTIFICATE_TOL

    Raises:
        ProxFailure: no candidate passes the certificate; carries the best one
    """
    method = method or default_method(problem.dim)
    rng = rng if rng is not None else np.random.default_rng(DEFAULT_SEED)

    if isinstance(method, Golden1D):
        candidates = _solve_golden(problem, method)
    elif isinstance(method, ProjGrad):
        candidates = _solve_projgrad(problem, method, rng)
    elif isinstance(method, GridPolish):
        candidates = _solve_grid_polish(problem, method)
    else:
        raise InvalidArgument(f"unknown prox method {method!r}")

    values = np.array([_safe_objective(problem, p) for p in candidates])
    best = int(np.argmin(values))
    y, value = candidates[best], float(values[best])
    if not value <= PROX_CERTIFICATE_TOL:
        raise ProxFailure(f"prox objective {value:.3e} exceeds the certificate tolerance", best=y, objective=value)
    return y


def strong_convexity_rho_bound(
    f: Bifunction,
    x: ArrayLike,
    feasible_set: FeasibleSet,
    sample_count: int = 200,
    seed: int = DEFAULT_SEED,
) -> float:
    """
    Heuristic upper estimate of the rho keeping the prox objective strongly convex.

    Estimates the Lipschitz constant of grad2(x, .) as the largest secant ratio
    ||grad2(x, u) - grad2(x, v)|| / ||u - v|| over sampled pairs (bounding box
    extremes included) and returns its reciprocal. Sampling underestimates the
    constant, so the bound is optimistic.

    Raises:
        InvalidArgument: fewer than two samples, or no two distinct samples
    """
    if sample_count < 2:
        raise InvalidArgument(f"sample_count must be at least 2, got {sample_count}")
    x = as_point(x, f.dim)
    rng = np.random.default_rng(seed)
    box = feasible_set.bounding_box()
    samples = np.vstack([
        feasible_set.project(box.lo),
        feasible_set.project(box.hi),
        sample_points(feasible_set, sample_count, rng),
    ])

    points, grads = [], []
    for u in samples:
        try:
            grads.append(f.grad2(x, u))
            points.append(u)
        except DomainError:
            continue

    if len(points) < 2:
        raise InvalidArgument("fewer than two samples admit a gradient")
    du = pdist(np.array(points))
    dg = pdist(np.array(grads))
    mask = du > 0
    if not np.any(mask):
        raise InvalidArgument("all sampled points coincide")
    lipschitz = float(np.max(dg[mask] / du[mask]))
    logger.debug(f"Sampled gradient Lipschitz estimate {lipschitz:.6g} from {len(points)} points")
    return math.inf if lipschitz == 0 else 1.0 / lipschitz
