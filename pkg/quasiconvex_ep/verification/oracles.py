"""
Quasiconvex Equilibrium Solver - Brute-Force Residual Oracles

This module scans a lattice over the feasible set (n <= ORACLE_MAX_DIM) and
reports residuals with their witnesses:

- gap:            min_y f(x, y)                           (>= -eps for a solution)
- quasi_residual: min_y f(x, y) + ||y - x||^2 / (2 rho)   (>= -eps for a rho-quasi-solution)
- dual_residual:  max_y f(y, z)                           (<= eps for a dual solution)

Ties resolve to the lexicographically smallest lattice point.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from quasiconvex_ep.bifunctions.base import Bifunction
from quasiconvex_ep.config.settings import (
    DEFAULT_SEED,
    EPSILON_PROBE_SAMPLES,
    FD_STEP_SCALE,
    ORACLE_MAX_DIM,
)
from quasiconvex_ep.core.errors import DomainError, GridTooLarge, InvalidArgument
from quasiconvex_ep.core.sets import FeasibleSet, Point, as_point, grid, sample_points

logger = logging.getLogger(__name__)

# Relative scale of the default solution tolerance
EPSILON_RELATIVE = 1e-6


@dataclass(frozen=True, eq=False)
class ResidualReport:
    kind: str
    point: Point
    value: float
    witness: Point
    resolution: float
    points_scanned: int

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "point": self.point.tolist(),
            "value": self.value,
            "witness": self.witness.tolist(),
            "resolution": self.resolution,
            "points_scanned": self.points_scanned,
        }


def _lattice(feasible_set: FeasibleSet, resolution: float) -> NDArray[np.float64]:
    if feasible_set.dim > ORACLE_MAX_DIM:
        raise GridTooLarge(
            f"grid oracles support n <= {ORACLE_MAX_DIM}, got dimension {feasible_set.dim}"
        )
    points = grid(feasible_set, resolution)
    if len(points) == 0:
        raise InvalidArgument(f"no lattice point at resolution {resolution} lies in the set")
    return points


def _report(kind: str, point: Point, points: NDArray, values: NDArray, resolution: float, maximize: bool) -> ResidualReport:
    # argmin/argmax return the first hit, i.e. the lexicographically smallest witness
    index = int(np.argmax(values) if maximize else np.argmin(values))
    report = ResidualReport(
        kind=kind,
        point=point,
        value=float(values[index]),
        witness=np.array(points[index]),
        resolution=resolution,
        points_scanned=len(points),
    )
    logger.debug(f"{kind} at {point}: {report.value:.6g} (witness {report.witness}, {len(points)} points)")
    return report


def gap(f: Bifunction, feasible_set: FeasibleSet, x: ArrayLike, resolution: float) -> ResidualReport:
    """
    Equilibrium gap min_y f(x, y) over the lattice.

    Raises:
        GridTooLarge: dimension above ORACLE_MAX_DIM or lattice above the point cap
    """
    x = as_point(x, f.dim)
    points = _lattice(feasible_set, resolution)
    return _report("gap", x, points, f.eval_batch(x, points), resolution, maximize=False)


def quasi_residual(f: Bifunction, feasible_set: FeasibleSet, x: ArrayLike, rho: float, resolution: float) -> ResidualReport:
    """Regularized gap min_y f(x, y) + ||y - x||^2 / (2 rho) over the lattice."""
    if not rho > 0:
        raise InvalidArgument(f"rho must be positive, got {rho}")
    x = as_point(x, f.dim)
    points = _lattice(feasible_set, resolution)
    values = f.eval_batch(x, points) + np.sum((points - x) ** 2, axis=1) / (2.0 * rho)
    return _report("quasi_residual", x, points, values, resolution, maximize=False)


def dual_residual(f: Bifunction, feasible_set: FeasibleSet, z: ArrayLike, resolution: float) -> ResidualReport:
    """Dual residual max_y f(y, z) over the lattice."""
    z = as_point(z, f.dim)
    points = _lattice(feasible_set, resolution)
    return _report("dual_residual", z, points, f.eval_batch(points, z), resolution, maximize=True)


# =============================================================================
# SUPPORTING DIAGNOSTICS
# =============================================================================

@dataclass(frozen=True, eq=False)
class DriftReport:
    kind: str
    coarse: float
    fine: float
    resolution: float

    @property
    def drift(self) -> float:
        return abs(self.coarse - self.fine)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "coarse": self.coarse,
            "fine": self.fine,
            "resolution": self.resolution,
            "drift": self.drift,
        }


def residual_drift(
    oracle: Callable[..., ResidualReport],
    f: Bifunction,
    feasible_set: FeasibleSet,
    point: ArrayLike,
    resolution: float,
    **kwargs,
) -> DriftReport:
    """Change of a residual when the lattice spacing is halved."""
    coarse = oracle(f, feasible_set, point, resolution=resolution, **kwargs)
    fine = oracle(f, feasible_set, point, resolution=resolution / 2.0, **kwargs)
    return DriftReport(kind=coarse.kind, coarse=coarse.value, fine=fine.value, resolution=resolution)


def solution_epsilon(
    f: Bifunction,
    feasible_set: FeasibleSet,
    samples: int = EPSILON_PROBE_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> float:
    """EPSILON_RELATIVE * (1 + max |f(u, v)|) over randomly sampled pairs."""
    rng = np.random.default_rng(seed)
    us = sample_points(feasible_set, samples, rng)
    vs = sample_points(feasible_set, samples, rng)
    scale = float(np.max(np.abs(f.eval_batch(us, vs))))
    return EPSILON_RELATIVE * (1.0 + scale)


@dataclass(frozen=True, eq=False)
class StationarityReport:
    point: Point
    value: float
    witness: Optional[Point]
    lower_level_points: int
    resolution: float

    def to_dict(self) -> dict:
        return {
            "point": self.point.tolist(),
            "value": self.value,
            "witness": None if self.witness is None else self.witness.tolist(),
            "lower_level_points": self.lower_level_points,
            "resolution": self.resolution,
        }


def stationarity_report(
    f: Bifunction,
    feasible_set: FeasibleSet,
    x: ArrayLike,
    resolution: float,
    step: Optional[float] = None,
) -> StationarityReport:
    """
    Largest |directional derivative| of f(x, .) at x toward its strict lower level set.

    A fixed point of the prox map that is not a solution has f(x, y) < 0 for
    some y, yet every such direction must be flat at x. An empty lower level
    set reports value 0 with no witness.
    """
    x = as_point(x, f.dim)
    points = _lattice(feasible_set, resolution)
    below = points[f.eval_batch(x, points) < 0.0]
    if len(below) == 0:
        return StationarityReport(x, 0.0, None, 0, resolution)

    h = step if step is not None else FD_STEP_SCALE * (1.0 + float(np.linalg.norm(x)))
    directions = below - x
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    # f(x, x) = 0, so the forward difference needs only the probe value
    try:
        slopes = np.abs(f.eval_batch(x, x + h * directions)) / h
    except DomainError:
        slopes = np.array([abs(f.eval(x, x + h * d)) / h if _evaluable(f, x, x + h * d) else 0.0 for d in directions])
    index = int(np.argmax(slopes))
    return StationarityReport(x, float(slopes[index]), np.array(below[index]), len(below), resolution)


def _evaluable(f: Bifunction, x: Point, y: Point) -> bool:
    try:
        f.eval(x, y)
        return True
    except DomainError:
        return False
