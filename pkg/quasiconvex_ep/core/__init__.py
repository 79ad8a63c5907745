"""
Core numerical types: points, feasible sets, projection, grids and errors.
"""

from .errors import (
    QuasiEPError,
    InvalidArgument,
    DomainError,
    GridTooLarge,
    ZeroSubgradient,
    LinesearchExhausted,
    InvalidSchedule,
    ConfigError,
    ProxFailure,
)
from .sets import (
    Point,
    FeasibleSet,
    Box,
    Ball,
    GenericProjection,
    as_point,
    project,
    contains,
    grid,
    lattice_size,
    fit_resolution,
    sample_points,
    set_from_dict,
)

__all__ = [
    # Errors
    "QuasiEPError",
    "InvalidArgument",
    "DomainError",
    "GridTooLarge",
    "ZeroSubgradient",
    "LinesearchExhausted",
    "InvalidSchedule",
    "ConfigError",
    "ProxFailure",
    # Sets
    "Point",
    "FeasibleSet",
    "Box",
    "Ball",
    "GenericProjection",
    "as_point",
    "project",
    "contains",
    "grid",
    "lattice_size",
    "fit_resolution",
    "sample_points",
    "set_from_dict",
]
