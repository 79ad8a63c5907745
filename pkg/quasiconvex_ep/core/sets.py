"""
Feasible sets, Euclidean projection and grid enumeration.

A feasible set is exposed through three capabilities: projection,
membership (distance to the projection) and a bounding box used to lay out
the lattices scanned by the brute-force oracles.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional, TypeAlias

import numpy as np
from numpy.typing import ArrayLike, NDArray

from quasiconvex_ep.config.settings import FEASIBILITY_TOL, GRID_POINT_CAP
from quasiconvex_ep.core.errors import GridTooLarge, InvalidArgument

logger = logging.getLogger(__name__)

Point: TypeAlias = NDArray[np.float64]


def as_point(coords: ArrayLike, dim: Optional[int] = None) -> Point:
    """
    Convert coordinates to a finite float vector.

    Args:
        coords: Scalar or sequence of reals
        dim: Expected dimension, if known

    Returns:
        1-D float64 array

    Raises:
        InvalidArgument: empty input, non-finite entries or dimension mismatch
    """
    arr = np.asarray(coords, dtype=float).reshape(-1)
    if arr.size == 0:
        raise InvalidArgument("a point needs at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgument(f"point has non-finite coordinates: {arr}")
    if dim is not None and arr.size != dim:
        raise InvalidArgument(f"dimension mismatch: expected {dim}, got {arr.size}")
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


class FeasibleSet(ABC):
    """Nonempty closed convex set in R^n."""

    @property
    @abstractmethod
    def dim(self) -> int:
        ...

    @abstractmethod
    def project(self, p: Point) -> Point:
        """Euclidean projection of a point with matching dimension."""

    @abstractmethod
    def bounding_box(self) -> "Box":
        ...

    @abstractmethod
    def witness(self) -> Point:
        """Some point known to be feasible."""

    def project_many(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.array([self.project(p) for p in points])

    def contains_many(self, points: NDArray[np.float64], tol: float = 0.0) -> NDArray[np.bool_]:
        distances = np.linalg.norm(points - self.project_many(points), axis=1)
        return distances <= tol

    def to_dict(self) -> dict:
        raise InvalidArgument(f"{type(self).__name__} cannot be serialized")


@dataclass(frozen=True, eq=False)
class Box(FeasibleSet):
    """Axis-aligned box {p : lo <= p <= hi}."""

    lo: Point
    hi: Point

    def __post_init__(self):
        lo = as_point(self.lo)
        hi = as_point(self.hi, lo.size)
        if np.any(lo > hi):
            raise InvalidArgument(f"box bounds must satisfy lo <= hi, got lo={lo}, hi={hi}")
        object.__setattr__(self, "lo", _frozen(lo))
        object.__setattr__(self, "hi", _frozen(hi))

    @property
    def dim(self) -> int:
        return self.lo.size

    def project(self, p: Point) -> Point:
        return np.clip(p, self.lo, self.hi)

    def project_many(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.clip(points, self.lo, self.hi)

    def bounding_box(self) -> "Box":
        return self

    def witness(self) -> Point:
        return (self.lo + self.hi) / 2.0

    def corners(self) -> NDArray[np.float64]:
        """All 2^n vertices, lexicographic in (lo, hi) per axis."""
        if self.dim > 20:
            raise InvalidArgument(f"refusing to enumerate 2^{self.dim} corners")
        axes = [np.array([lo, hi]) for lo, hi in zip(self.lo, self.hi)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.unique(np.stack([m.ravel() for m in mesh], axis=1), axis=0)

    def to_dict(self) -> dict:
        return {"kind": "box", "lo": self.lo.tolist(), "hi": self.hi.tolist()}


@dataclass(frozen=True, eq=False)
class Ball(FeasibleSet):
    """Closed Euclidean ball {p : ||p - center|| <= radius}."""

    center: Point
    radius: float

    def __post_init__(self):
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise InvalidArgument(f"ball radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", _frozen(as_point(self.center)))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self) -> int:
        return self.center.size

    def project(self, p: Point) -> Point:
        offset = p - self.center
        dist = float(np.linalg.norm(offset))
        if dist <= self.radius:
            return np.array(p, dtype=float)
        return self.center + offset * (self.radius / dist)

    def project_many(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        offsets = points - self.center
        dist = np.linalg.norm(offsets, axis=1)
        scale = np.where(dist > self.radius, self.radius / np.maximum(dist, 1e-300), 1.0)
        return self.center + offsets * scale[:, None]

    def bounding_box(self) -> Box:
        return Box(self.center - self.radius, self.center + self.radius)

    def witness(self) -> Point:
        return np.array(self.center)

    def to_dict(self) -> dict:
        return {"kind": "ball", "center": self.center.tolist(), "radius": self.radius}


@dataclass(frozen=True, eq=False)
class GenericProjection(FeasibleSet):
    """
    Set known only through a projection oracle.

    The bounding box drives grid enumeration; the witness must be a fixed
    point of the oracle, which is checked at construction.
    """

    oracle: Callable[[Point], ArrayLike]
    box: Box
    feasible_witness: Point

    def __post_init__(self):
        witness = as_point(self.feasible_witness, self.box.dim)
        object.__setattr__(self, "feasible_witness", _frozen(witness))
        image = self.project(witness)
        if np.linalg.norm(image - witness) > FEASIBILITY_TOL:
            raise InvalidArgument("the witness is not a fixed point of the projection oracle")

    @property
    def dim(self) -> int:
        return self.box.dim

    def project(self, p: Point) -> Point:
        return as_point(self.oracle(np.array(p, dtype=float)), self.dim)

    def bounding_box(self) -> Box:
        return self.box

    def witness(self) -> Point:
        return np.array(self.feasible_witness)


def set_from_dict(data: dict) -> FeasibleSet:
    """Rebuild a Box or Ball from its to_dict form."""
    kind = data.get("kind")
    if kind == "box":
        return Box(data["lo"], data["hi"])
    if kind == "ball":
        return Ball(data["center"], data["radius"])
    raise InvalidArgument(f"unknown feasible set kind: {kind!r}")


def project(feasible_set: FeasibleSet, p: ArrayLike) -> Point:
    """
    Euclidean projection onto a feasible set.

    Box and Ball projections are exact closed forms (componentwise clamp and
    radial scaling); GenericProjection delegates to its oracle.

    Raises:
        InvalidArgument: dimension mismatch
    """
    return feasible_set.project(as_point(p, feasible_set.dim))


def contains(feasible_set: FeasibleSet, p: ArrayLike, tol: float = 0.0) -> bool:
    """True iff the distance from p to the set, ||p - project(p)||, is at most tol."""
    if tol < 0:
        raise InvalidArgument(f"tolerance must be nonnegative, got {tol}")
    point = as_point(p, feasible_set.dim)
    return bool(np.linalg.norm(point - feasible_set.project(point)) <= tol)


def _axis_steps(span: float, resolution: float) -> int:
    return max(int(math.ceil(span / resolution - 1e-9)), 1) if span > 0 else 0


def lattice_size(feasible_set: FeasibleSet, resolution: float) -> int:
    """Number of bounding-box lattice points grid() would lay out, before filtering."""
    if not (np.isfinite(resolution) and resolution > 0):
        raise InvalidArgument(f"grid resolution must be positive, got {resolution}")
    box = feasible_set.bounding_box()
    return math.prod(_axis_steps(float(hi - lo), resolution) + 1 for lo, hi in zip(box.lo, box.hi))


def fit_resolution(feasible_set: FeasibleSet, resolution: float, cap: Optional[int] = None) -> float:
    """
    Smallest resolution of the form resolution * 2^j (j >= 0) whose lattice fits under cap.
    """
    cap = GRID_POINT_CAP if cap is None else cap
    if cap < 1:
        raise InvalidArgument(f"point cap must be positive, got {cap}")
    widest = float(np.max(feasible_set.bounding_box().hi - feasible_set.bounding_box().lo))
    fitted = resolution
    while lattice_size(feasible_set, fitted) > cap:
        if fitted >= widest:
            raise GridTooLarge(f"even the corner lattice of a {feasible_set.dim}-dimensional box exceeds {cap} points")
        fitted *= 2.0
    if fitted != resolution:
        logger.debug(f"Lattice resolution coarsened from {resolution} to {fitted} to stay under {cap} points")
    return fitted


def grid(feasible_set: FeasibleSet, resolution: float, cap: Optional[int] = None) -> NDArray[np.float64]:
    """
    Enumerate a lattice over the bounding box, filtered to the set.

    Each axis [lo, hi] is split into the fewest equal steps not longer than
    resolution, endpoints included, so box corners are always lattice points.
    Rows are in lexicographic order.

    Args:
        feasible_set: Set with a finite bounding box
        resolution: Maximum lattice spacing
        cap: Point-count limit (default GRID_POINT_CAP)

    Returns:
        Array of shape (N, n)

    Raises:
        InvalidArgument: nonpositive resolution
        GridTooLarge: the lattice would exceed cap points
    """
    if not (np.isfinite(resolution) and resolution > 0):
        raise InvalidArgument(f"grid resolution must be positive, got {resolution}")
    cap = GRID_POINT_CAP if cap is None else cap
    box = feasible_set.bounding_box()

    axes = []
    count = 1
    for lo, hi in zip(box.lo, box.hi):
        span = float(hi - lo)
        steps = _axis_steps(span, resolution)
        count *= steps + 1
        if count > cap:
            raise GridTooLarge(
                f"grid at resolution {resolution} over a {box.dim}-dimensional box "
                f"exceeds the cap of {cap} points"
            )
        axes.append(np.linspace(lo, hi, steps + 1))

    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=1)
    if not isinstance(feasible_set, Box):
        points = points[feasible_set.contains_many(points, 0.0)]
    logger.debug(f"Grid of {len(points)} points at resolution {resolution}")
    return points


def sample_points(feasible_set: FeasibleSet, count: int, rng: np.random.Generator) -> NDArray[np.float64]:
    """Uniform draws over the bounding box, projected into the set."""
    box = feasible_set.bounding_box()
    raw = rng.uniform(box.lo, box.hi, size=(count, box.dim))
    return feasible_set.project_many(raw)
