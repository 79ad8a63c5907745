"""
Quasiconvex Equilibrium Solver - Problem Catalog

This module builds the benchmark instances, each with its recommended
solver configuration:

- root-quadratic:        sqrt(y) - sqrt(x) + r x (y - x) on [0, delta]
- fractional-2d / -10d:  max of two linear-fractional branches on [0, 5]^n
- random fractional:     all coefficients drawn from U[0, 5]
- cubic-counterexample:  y^3 - x^3 on [-1, 0], a rho-quasi-solution that is not a solution
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np

from quasiconvex_ep.bifunctions import (
    Bifunction,
    CubicBifunction,
    FractionalBranch,
    FractionalMaxBifunction,
    RootQuadBifunction,
)
from quasiconvex_ep.config.settings import DEFAULT_ALPHA, DEFAULT_MAX_ITERS, FEASIBILITY_TOL
from quasiconvex_ep.core.errors import InvalidArgument
from quasiconvex_ep.core.sets import Box, FeasibleSet, Point, as_point, contains
from quasiconvex_ep.solver import ConstantRho, Golden1D, HarmonicSigma, SolverConfig

logger = logging.getLogger(__name__)

# Coefficient range of the random family
RANDOM_LOW = 0.0
RANDOM_HIGH = 5.0

# Denominator offsets below this are redrawn from U(RANDOM_D_FLOOR, RANDOM_HIGH)
RANDOM_D_FLOOR = 0.1

TEN_DIM_E2 = np.array([
    [4, 4, 2, 4, 2, 2, 3, 2, 1, 2],
    [1, 3, 0, 3, 0, 1, 1, 0, 2, 2],
    [2, 3, 0, 2, 2, 2, 1, 1, 2, 2],
    [3, 2, 3, 0, 1, 1, 2, 4, 1, 1],
    [1, 4, 3, 0, 2, 1, 4, 3, 0, 3],
    [0, 4, 1, 4, 2, 3, 4, 3, 4, 2],
    [3, 0, 4, 4, 0, 4, 1, 1, 1, 2],
    [1, 2, 2, 3, 1, 0, 3, 0, 0, 0],
    [2, 0, 0, 3, 0, 3, 3, 4, 4, 2],
    [0, 2, 4, 4, 0, 4, 3, 0, 3, 1],
], dtype=float)


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """A bifunction on a feasible set with a start point and a recommended config."""

    f: Bifunction
    feasible_set: FeasibleSet
    x0: Point
    name: str
    config: SolverConfig = field(default_factory=SolverConfig)
    provenance: dict = field(default_factory=lambda: {"source": "catalog"})
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        x0 = as_point(self.x0, self.f.dim)
        if self.feasible_set.dim != self.f.dim:
            raise InvalidArgument(f"{self.name}: set and bifunction dimensions differ")
        if not contains(self.feasible_set, x0, FEASIBILITY_TOL):
            raise InvalidArgument(f"{self.name}: x0={x0} is not feasible")
        object.__setattr__(self, "x0", x0)

    @property
    def dim(self) -> int:
        return self.f.dim


def _fractional_instance(
    branches,
    n: int,
    name: str,
    config: SolverConfig,
    provenance: dict,
    params: dict,
) -> ProblemInstance:
    f = FractionalMaxBifunction(tuple(branches), name=name)
    box = Box(np.full(n, 0.0), np.full(n, 5.0))
    f.check_denominators(box)
    return ProblemInstance(f, box, np.full(n, 5.0), name, config, provenance, params)


# =============================================================================
# CATALOG
# =============================================================================

def root_quadratic_problem(
    r: float = 2.0,
    delta: float = 10.0,
    x0: Optional[float] = None,
    sigma_scale: float = 1.0,
) -> ProblemInstance:
    """
    Root-quadratic problem on [0, delta]; its solution set is {0}.

    Args:
        r: Coupling coefficient, > 0
        delta: Right end of the interval, > 0
        x0: Start point (default delta / 2)
        sigma_scale: c in sigma_k = c / (k + 1)
    """
    if not delta > 0:
        raise InvalidArgument(f"delta must be positive, got {delta}")
    f = RootQuadBifunction(r=r)
    start = delta / 2.0 if x0 is None else x0
    config = SolverConfig(
        alpha=DEFAULT_ALPHA,
        theta=0.5,
        rho_schedule=ConstantRho(1.0),
        sigma_schedule=HarmonicSigma(sigma_scale),
        tol_xy=1e-3,
        tol_step=1e-3,
        prox_method=Golden1D(),
    )
    params = {"r": r, "delta": delta, "sigma_scale": sigma_scale}
    return ProblemInstance(f, Box([0.0], [delta]), start, "root-quadratic", config, params=params)


def _fractional_config(sigma_scale: float) -> SolverConfig:
    return SolverConfig(
        alpha=DEFAULT_ALPHA,
        theta=0.8,
        rho_schedule=ConstantRho(1.0),
        sigma_schedule=HarmonicSigma(sigma_scale),
        tol_xy=1e-5,
        tol_step=1e-5,
    )


def fractional_max_small(sigma_scale: float = 1.0) -> ProblemInstance:
    """Two-dimensional fractional max problem with x0 = (5, 5)."""
    n = 2
    first = FractionalBranch(np.eye(n), np.zeros(n), np.eye(n), np.ones(n), np.zeros(n), 1.0)
    second = FractionalBranch(np.eye(n), np.zeros(n), [[1.0, 2.0], [3.0, 4.0]], np.ones(n), np.ones(n), 2.0)
    return _fractional_instance(
        [first, second], n, "fractional-2d", _fractional_config(sigma_scale),
        {"source": "catalog"}, {"sigma_scale": sigma_scale},
    )


def fractional_max_ten(sigma_scale: float = 1.0) -> ProblemInstance:
    """Ten-dimensional fractional max problem on [0, 5]^10 with x0 = 5 * ones."""
    n = 10
    first = FractionalBranch(np.eye(n), np.zeros(n), np.eye(n), np.ones(n), np.zeros(n), 1.0)
    second = FractionalBranch(np.eye(n), np.zeros(n), TEN_DIM_E2, np.ones(n), np.ones(n), 2.0)
    return _fractional_instance(
        [first, second], n, "fractional-10d", _fractional_config(sigma_scale),
        {"source": "catalog"}, {"sigma_scale": sigma_scale},
    )


def random_fractional(n: int, seed: int) -> ProblemInstance:
    """
    Random fractional max problem with every coefficient drawn from U[0, 5].

    Draw order: A1, A2, E1, E2, b1, b2, c1, c2, f1, f2, d1, d2. A d below
    RANDOM_D_FLOOR is redrawn from U(RANDOM_D_FLOOR, 5].
    """
    if n < 1:
        raise InvalidArgument(f"n must be at least 1, got {n}")
    rng = np.random.default_rng(seed)

    def draw(shape=None):
        return rng.uniform(RANDOM_LOW, RANDOM_HIGH, size=shape)

    A = [draw((n, n)) for _ in range(2)]
    E = [draw((n, n)) for _ in range(2)]
    b = [draw(n) for _ in range(2)]
    c = [draw(n) for _ in range(2)]
    f = [draw(n) for _ in range(2)]
    d = [float(draw()) for _ in range(2)]
    d = [value if value >= RANDOM_D_FLOOR else float(rng.uniform(RANDOM_D_FLOOR, RANDOM_HIGH)) for value in d]

    branches = [FractionalBranch(A[i], b[i], E[i], f[i], c[i], d[i]) for i in range(2)]
    config = SolverConfig(
        alpha=DEFAULT_ALPHA,
        theta=0.8,
        rho_schedule=ConstantRho(1.0),
        sigma_schedule=HarmonicSigma(float(n)),
        tol_xy=1e-8,
        tol_step=1e-8,
        max_iters=DEFAULT_MAX_ITERS,
        seed=seed,
    )
    return _fractional_instance(
        branches, n, f"random-fractional-{n}", config,
        {"source": "random", "n": n, "seed": seed}, {"n": n, "seed": seed},
    )


def cubic_counterexample() -> ProblemInstance:
    """y^3 - x^3 on [-1, 0]: x = 0 is a rho-quasi-solution for rho < 1/2 but not a solution."""
    config = SolverConfig(rho_schedule=ConstantRho(0.4), prox_method=Golden1D())
    return ProblemInstance(CubicBifunction(), Box([-1.0], [0.0]), [-0.5], "cubic-counterexample", config)


CATALOG: Dict[str, Callable[..., ProblemInstance]] = {
    "root-quadratic": root_quadratic_problem,
    "fractional-2d": fractional_max_small,
    "fractional-10d": fractional_max_ten,
    "cubic-counterexample": cubic_counterexample,
}


def build_catalog_problem(name: str, **params) -> ProblemInstance:
    """Build a catalog instance by name with keyword overrides."""
    try:
        factory = CATALOG[name]
    except KeyError:
        raise InvalidArgument(f"unknown catalog problem {name!r}; choose from {sorted(CATALOG)}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise InvalidArgument(f"bad parameters for {name!r}: {exc}") from exc
