"""
Quasiconvex Equilibrium Solver - Bifunction Families

This module provides the concrete bifunctions used by the problem catalog:

- RootQuadBifunction: sqrt(y) - sqrt(x) + r*x*(y - x) on a nonnegative interval
- CubicBifunction: y^3 - x^3, whose rho-quasi-solutions need not solve the problem
- FractionalMaxBifunction: pointwise maximum of linear-fractional branches
"""

import logging
from dataclasses import dataclass
from typing import ClassVar, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from quasiconvex_ep.config.settings import ROOT_DOMAIN_SLACK
from quasiconvex_ep.core.errors import DomainError, InvalidArgument
from quasiconvex_ep.core.sets import Box, Point, as_point

from .base import Bifunction

logger = logging.getLogger(__name__)


# =============================================================================
# ROOT-QUADRATIC
# =============================================================================

@dataclass(frozen=True, eq=False)
class RootQuadBifunction(Bifunction):
    """
    f(x, y) = sqrt(y) - sqrt(x) + r * x * (y - x) for x, y >= 0.

    Values in [-ROOT_DOMAIN_SLACK, 0) are read as 0; anything further below
    zero is a DomainError. The gradient in y is unbounded at y = 0, so grad2
    rejects y <= 0.
    """

    r: float = 2.0
    name: str = "root-quadratic"

    def __post_init__(self):
        if not (np.isfinite(self.r) and self.r > 0):
            raise InvalidArgument(f"r must be positive, got {self.r}")

    @property
    def dim(self) -> int:
        return 1

    @staticmethod
    def _nonneg(values: NDArray[np.float64]) -> NDArray[np.float64]:
        if np.any(values < -ROOT_DOMAIN_SLACK):
            raise DomainError(f"square root of a negative argument: {np.min(values)}")
        return np.maximum(values, 0.0)

    def _value(self, x: Point, y: Point) -> float:
        xv = float(self._nonneg(x)[0])
        yv = float(self._nonneg(y)[0])
        return float(np.sqrt(yv) - np.sqrt(xv) + self.r * xv * (yv - xv))

    def _value_batch(self, xs: NDArray[np.float64], ys: NDArray[np.float64]) -> NDArray[np.float64]:
        xv = self._nonneg(xs[:, 0])
        yv = self._nonneg(ys[:, 0])
        return np.sqrt(yv) - np.sqrt(xv) + self.r * xv * (yv - xv)

    def _gradient(self, x: Point, y: Point) -> Optional[Point]:
        xv = float(self._nonneg(x)[0])
        yv = float(y[0])
        if yv <= 0.0:
            raise DomainError(f"d/dy sqrt(y) is unbounded at y={yv}")
        return np.array([0.5 / np.sqrt(yv) + self.r * xv])

    def to_dict(self) -> dict:
        return {"kind": "root_quadratic", "r": float(self.r)}


# =============================================================================
# CUBIC
# =============================================================================

@dataclass(frozen=True, eq=False)
class CubicBifunction(Bifunction):
    """f(x, y) = y^3 - x^3 in one dimension."""

    name: str = "cubic"

    @property
    def dim(self) -> int:
        return 1

    def _value(self, x: Point, y: Point) -> float:
        return float(y[0] ** 3 - x[0] ** 3)

    def _value_batch(self, xs: NDArray[np.float64], ys: NDArray[np.float64]) -> NDArray[np.float64]:
        return ys[:, 0] ** 3 - xs[:, 0] ** 3

    def _gradient(self, x: Point, y: Point) -> Optional[Point]:
        return np.array([3.0 * y[0] ** 2])

    def to_dict(self) -> dict:
        return {"kind": "cubic"}


# =============================================================================
# FRACTIONAL MAX
# =============================================================================

def _matrix(values: ArrayLike, label: str) -> NDArray[np.float64]:
    arr = np.array(values, dtype=float)
    if arr.ndim != 2 or not np.all(np.isfinite(arr)):
        raise InvalidArgument(f"{label} must be a finite 2-D matrix")
    arr.setflags(write=False)
    return arr


def _vector(values: ArrayLike, size: int, label: str) -> NDArray[np.float64]:
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.size != size or not np.all(np.isfinite(arr)):
        raise InvalidArgument(f"{label} must be a finite vector of length {size}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FractionalBranch:
    """
    One branch <A x + b, (E y + f)/(c.y + d) - (E x + f)/(c.x + d)>.

    A and E are m x n; b and f have length m; c has length n.
    """

    A: NDArray[np.float64]
    b: NDArray[np.float64]
    E: NDArray[np.float64]
    f: NDArray[np.float64]
    c: NDArray[np.float64]
    d: float

    def __post_init__(self):
        A = _matrix(self.A, "A")
        E = _matrix(self.E, "E")
        if A.shape != E.shape:
            raise InvalidArgument(f"A and E must share a shape, got {A.shape} and {E.shape}")
        m, n = A.shape
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "b", _vector(self.b, m, "b"))
        object.__setattr__(self, "f", _vector(self.f, m, "f"))
        object.__setattr__(self, "c", _vector(self.c, n, "c"))
        if not np.isfinite(self.d):
            raise InvalidArgument(f"d must be finite, got {self.d}")
        object.__setattr__(self, "d", float(self.d))

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    def _denominator(self, p: Point) -> float:
        s = float(self.c @ p + self.d)
        if s <= 0.0:
            raise DomainError(f"nonpositive denominator c.p + d = {s} at p={p}")
        return s

    def value(self, x: Point, y: Point) -> float:
        w = self.A @ x + self.b
        ratio_y = (self.E @ y + self.f) / self._denominator(y)
        ratio_x = (self.E @ x + self.f) / self._denominator(x)
        return float(w @ (ratio_y - ratio_x))

    def value_batch(self, xs: NDArray[np.float64], ys: NDArray[np.float64]) -> NDArray[np.float64]:
        sx = xs @ self.c + self.d
        sy = ys @ self.c + self.d
        if np.any(sx <= 0.0) or np.any(sy <= 0.0):
            raise DomainError("nonpositive denominator in batch evaluation")
        w = xs @ self.A.T + self.b
        ratio_y = (ys @ self.E.T + self.f) / sy[:, None]
        ratio_x = (xs @ self.E.T + self.f) / sx[:, None]
        return np.einsum("ij,ij->i", w, ratio_y - ratio_x)

    def gradient(self, x: Point, y: Point) -> Point:
        """Gradient in y: E^T w / s - (w.u) c / s^2 with u = E y + f, s = c.y + d."""
        w = self.A @ x + self.b
        s = self._denominator(y)
        u = self.E @ y + self.f
        return (self.E.T @ w) / s - (w @ u) * self.c / s**2

    def min_denominator(self, box: Box) -> float:
        """Minimum of c.p + d over a box, attained at a corner."""
        return float(self.d + np.sum(np.minimum(self.c * box.lo, self.c * box.hi)))

    def to_dict(self) -> dict:
        return {
            "A": self.A.tolist(),
            "b": self.b.tolist(),
            "E": self.E.tolist(),
            "f": self.f.tolist(),
            "c": self.c.tolist(),
            "d": self.d,
        }


@dataclass(frozen=True, eq=False)
class FractionalMaxBifunction(Bifunction):
    """
    f(x, y) = max_i f_i(x, y) over linear-fractional branches.

    grad2 returns the gradient of the active branch, the lowest index on ties.
    """

    branches: tuple
    name: str = "fractional-max"

    has_branches: ClassVar[bool] = True

    def __post_init__(self):
        branches = tuple(self.branches)
        if not branches:
            raise InvalidArgument("at least one branch is required")
        dims = {br.dim for br in branches}
        if len(dims) != 1:
            raise InvalidArgument(f"branches disagree on dimension: {sorted(dims)}")
        object.__setattr__(self, "branches", branches)

    @classmethod
    def from_arrays(cls, branch_data: Sequence[dict], name: str = "fractional-max") -> "FractionalMaxBifunction":
        return cls(tuple(FractionalBranch(**data) for data in branch_data), name=name)

    @property
    def dim(self) -> int:
        return self.branches[0].dim

    def branch_values(self, x: ArrayLike, y: ArrayLike) -> NDArray[np.float64]:
        x = as_point(x, self.dim)
        y = as_point(y, self.dim)
        return np.array([br.value(x, y) for br in self.branches])

    def branch_gradients(self, x: ArrayLike, y: ArrayLike) -> NDArray[np.float64]:
        x = as_point(x, self.dim)
        y = as_point(y, self.dim)
        return np.array([br.gradient(x, y) for br in self.branches])

    def active_branch(self, x: Point, y: Point) -> int:
        # argmax returns the first maximizer
        return int(np.argmax(self.branch_values(x, y)))

    def _value(self, x: Point, y: Point) -> float:
        return float(np.max(self.branch_values(x, y)))

    def _value_batch(self, xs: NDArray[np.float64], ys: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.max(np.stack([br.value_batch(xs, ys) for br in self.branches]), axis=0)

    def _gradient(self, x: Point, y: Point) -> Optional[Point]:
        return self.branches[self.active_branch(x, y)].gradient(x, y)

    def check_denominators(self, box: Box) -> None:
        """
        Require c_i.p + d_i > 0 on the whole box.

        Raises:
            DomainError: some branch denominator reaches zero at a box corner
        """
        for index, br in enumerate(self.branches):
            lowest = br.min_denominator(box)
            if lowest <= 0.0:
                raise DomainError(
                    f"branch {index} denominator reaches {lowest:.6g} on the box; it must stay positive"
                )

    def to_dict(self) -> dict:
        return {"kind": "fractional_max", "branches": [br.to_dict() for br in self.branches]}


# =============================================================================
# SERIALIZATION
# =============================================================================

def bifunction_from_dict(data: dict) -> Bifunction:
    """Rebuild a catalog bifunction from its to_dict form."""
    kind = data.get("kind")
    if kind == "root_quadratic":
        return RootQuadBifunction(r=float(data["r"]))
    if kind == "cubic":
        return CubicBifunction()
    if kind == "fractional_max":
        return FractionalMaxBifunction.from_arrays(data["branches"])
    raise InvalidArgument(f"unknown bifunction kind: {kind!r}")
