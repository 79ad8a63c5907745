"""
Backtracking along the segment from x toward the prox point y.

Find the smallest m in [1, m_max] such that z = x + theta^m (y - x) satisfies

    f(z, x) - f(z, y) >= alpha / (2 rho) * ||y - x||^2
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.typing import ArrayLike

from quasiconvex_ep.bifunctions.base import Bifunction
from quasiconvex_ep.config.settings import DEFAULT_M_MAX
from quasiconvex_ep.core.errors import InvalidArgument, LinesearchExhausted
from quasiconvex_ep.core.sets import Point, as_point

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinesearchParams:
    alpha: float
    theta: float
    m_max: int = DEFAULT_M_MAX

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InvalidArgument(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0.0 < self.theta < 1.0:
            raise InvalidArgument(f"theta must lie in (0, 1), got {self.theta}")
        if self.m_max < 1:
            raise InvalidArgument(f"m_max must be at least 1, got {self.m_max}")


def descent_margin(f: Bifunction, x: Point, y: Point, z: Point, rho: float, alpha: float) -> float:
    """f(z, x) - f(z, y) - alpha/(2 rho) ||y - x||^2; nonnegative when the test passes."""
    rhs = alpha / (2.0 * rho) * float(np.sum((y - x) ** 2))
    return f.eval(z, x) - f.eval(z, y) - rhs


def linesearch(
    f: Bifunction,
    x: ArrayLike,
    y: ArrayLike,
    rho: float,
    params: LinesearchParams,
) -> Tuple[Point, int]:
    """
    Args:
        f: Bifunction
        x: Current iterate
        y: Prox point, distinct from x
        rho: Regularization parameter of the prox step
        params: alpha, theta and the exponent cap

    Returns:
        (z, m) with m the first exponent passing the descent test

    Raises:
        InvalidArgument: x == y or rho <= 0
        LinesearchExhausted: no exponent up to m_max passes
    """
    x = as_point(x, f.dim)
    y = as_point(y, f.dim)
    if not rho > 0:
        raise InvalidArgument(f"rho must be positive, got {rho}")
    if np.array_equal(x, y):
        raise InvalidArgument("linesearch needs y != x")

    direction = y - x
    rhs = params.alpha / (2.0 * rho) * float(direction @ direction)
    for m in range(1, params.m_max + 1):
        z = x + params.theta**m * direction
        if f.eval(z, x) - f.eval(z, y) >= rhs:
            logger.debug(f"Linesearch accepted m={m}")
            return z, m

    raise LinesearchExhausted(
        f"no m <= {params.m_max} satisfies the descent test (theta={params.theta}, ||y-x||^2={2 * rho * rhs / params.alpha:.3e})"
    )
