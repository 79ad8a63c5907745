"""
Bifunction oracle f(x, y) with second-argument gradient and star-subgradient.

Subclasses implement `_value` (and optionally `_gradient`, `_star_direction`
and the vectorized `_value_batch`); the public methods validate dimensions,
reject non-finite results as domain errors and supply the defaults:

- grad2 falls back to central finite differences with
  h = FD_STEP_SCALE * (1 + ||y||), one-sided where one probe leaves the domain
- star_subgradient is the normalized grad2(z, .) at x
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, ClassVar, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from quasiconvex_ep.config.settings import FD_STEP_SCALE, ZERO_SUBGRADIENT_THRESHOLD
from quasiconvex_ep.core.errors import DomainError, InvalidArgument, ZeroSubgradient
from quasiconvex_ep.core.sets import Point, as_point

logger = logging.getLogger(__name__)


class Bifunction(ABC):
    """f: C x C -> R with f(x, x) = 0, evaluated deterministically."""

    name: str = "bifunction"

    # True for max-of-smooth-branches families exposing branch_values/branch_gradients
    has_branches: ClassVar[bool] = False

    @property
    @abstractmethod
    def dim(self) -> int:
        ...

    @abstractmethod
    def _value(self, x: Point, y: Point) -> float:
        ...

    def _gradient(self, x: Point, y: Point) -> Optional[Point]:
        return None

    def _star_direction(self, z: Point, x: Point) -> Optional[Point]:
        return None

    def _value_batch(self, xs: NDArray[np.float64], ys: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.array([self._value(x, y) for x, y in zip(xs, ys)], dtype=float)

    @property
    def has_closed_form_gradient(self) -> bool:
        return type(self)._gradient is not Bifunction._gradient

    def eval(self, x: ArrayLike, y: ArrayLike) -> float:
        """
        Value f(x, y).

        Raises:
            InvalidArgument: dimension mismatch
            DomainError: argument outside the domain of definition
        """
        x = as_point(x, self.dim)
        y = as_point(y, self.dim)
        value = float(self._value(x, y))
        if not np.isfinite(value):
            raise DomainError(f"{self.name}: non-finite value at x={x}, y={y}")
        return value

    def eval_batch(self, xs: ArrayLike, ys: ArrayLike) -> NDArray[np.float64]:
        """
        Row-wise values f(xs[i], ys[i]); a single point broadcasts against a batch.
        """
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        ys = np.atleast_2d(np.asarray(ys, dtype=float))
        if xs.shape[-1] != self.dim or ys.shape[-1] != self.dim:
            raise InvalidArgument(
                f"dimension mismatch: expected {self.dim}, got {xs.shape[-1]} and {ys.shape[-1]}"
            )
        xs, ys = np.broadcast_arrays(xs, ys)
        values = np.asarray(self._value_batch(xs, ys), dtype=float)
        if not np.all(np.isfinite(values)):
            raise DomainError(f"{self.name}: non-finite values in batch evaluation")
        return values

    def grad2(self, x: ArrayLike, y: ArrayLike) -> Point:
        """Gradient of f(x, .) at y; closed form when available, else finite differences."""
        x = as_point(x, self.dim)
        y = as_point(y, self.dim)
        closed = self._gradient(x, y)
        if closed is None:
            return self.finite_difference_grad2(x, y)
        grad = np.asarray(closed, dtype=float).reshape(-1)
        if not np.all(np.isfinite(grad)):
            raise DomainError(f"{self.name}: non-finite gradient at x={x}, y={y}")
        return grad

    def finite_difference_grad2(self, x: ArrayLike, y: ArrayLike) -> Point:
        """Central differences in y, one-sided next to the domain boundary."""
        x = as_point(x, self.dim)
        y = as_point(y, self.dim)
        h = FD_STEP_SCALE * (1.0 + float(np.linalg.norm(y)))
        grad = np.empty(self.dim)
        for j in range(self.dim):
            step = np.zeros(self.dim)
            step[j] = h
            forward = self._try_eval(x, y + step)
            backward = self._try_eval(x, y - step)
            if forward is not None and backward is not None:
                grad[j] = (forward - backward) / (2.0 * h)
            elif forward is not None:
                grad[j] = (forward - self.eval(x, y)) / h
            elif backward is not None:
                grad[j] = (self.eval(x, y) - backward) / h
            else:
                raise DomainError(f"{self.name}: no evaluable difference probe along axis {j} at y={y}")
        return grad

    def _try_eval(self, x: Point, y: Point) -> Optional[float]:
        try:
            return self.eval(x, y)
        except DomainError:
            return None

    def star_subgradient(self, z: ArrayLike, x: ArrayLike) -> Point:
        """
        Unit direction from the star-subdifferential of f(z, .) at x.

        Raises:
            ZeroSubgradient: the raw direction has norm at most ZERO_SUBGRADIENT_THRESHOLD
        """
        z = as_point(z, self.dim)
        x = as_point(x, self.dim)
        raw = self._star_direction(z, x)
        g = self.grad2(z, x) if raw is None else as_point(raw, self.dim)
        norm = float(np.linalg.norm(g))
        if norm <= ZERO_SUBGRADIENT_THRESHOLD:
            raise ZeroSubgradient(
                f"{self.name}: star-subgradient vanishes at z={z}, x={x} (norm {norm:.3e})"
            )
        return g / norm

    def to_dict(self) -> dict:
        raise InvalidArgument(f"{self.name} cannot be serialized")


@dataclass(frozen=True, eq=False)
class CallableBifunction(Bifunction):
    """Bifunction assembled from user-supplied oracles."""

    value_fn: Callable[[Point, Point], float]
    dimension: int
    name: str = "callable"
    grad2_fn: Optional[Callable[[Point, Point], ArrayLike]] = None
    star_fn: Optional[Callable[[Point, Point], ArrayLike]] = None

    def __post_init__(self):
        if self.dimension < 1:
            raise InvalidArgument(f"dimension must be positive, got {self.dimension}")

    @property
    def dim(self) -> int:
        return self.dimension

    @property
    def has_closed_form_gradient(self) -> bool:
        return self.grad2_fn is not None

    def _value(self, x: Point, y: Point) -> float:
        return float(self.value_fn(x, y))

    def _gradient(self, x: Point, y: Point) -> Optional[Point]:
        if self.grad2_fn is None:
            return None
        return as_point(self.grad2_fn(x, y), self.dim)

    def _star_direction(self, z: Point, x: Point) -> Optional[Point]:
        if self.star_fn is None:
            return None
        return np.asarray(self.star_fn(z, x), dtype=float)
