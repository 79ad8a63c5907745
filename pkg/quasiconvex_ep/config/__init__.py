"""
Quasiconvex Equilibrium Solver - Configuration Package

This package contains all configuration settings: numerical tolerances,
solver defaults, output formats and the logging configuration.
"""

from .settings import (
    # Paths
    BASE_DIR,
    OUTPUT_DIR,

    # Application
    DEBUG,
    LOG_LEVEL,
    get_setting,

    # Numerical tolerances
    GRID_POINT_CAP,
    ORACLE_MAX_DIM,
    ZERO_SUBGRADIENT_THRESHOLD,
    FD_STEP_SCALE,
    ROOT_DOMAIN_SLACK,
    FEASIBILITY_TOL,
    PROX_CERTIFICATE_TOL,

    # Solver defaults
    DEFAULT_ALPHA,
    DEFAULT_THETA,
    DEFAULT_RHO,
    DEFAULT_SIGMA_SCALE,
    DEFAULT_TOL,
    DEFAULT_MAX_ITERS,
    DEFAULT_M_MAX,
    DEFAULT_SEED,

    # Output
    CSV_FLOAT_FORMAT,
    TRACE_LEADING_COLUMNS,
    TRACE_TRAILING_COLUMNS,

    # Logging
    LOGGING_CONFIG,
)

__all__ = [
    # Paths
    "BASE_DIR",
    "OUTPUT_DIR",

    # Application
    "DEBUG",
    "LOG_LEVEL",
    "get_setting",

    # Numerical tolerances
    "GRID_POINT_CAP",
    "ORACLE_MAX_DIM",
    "ZERO_SUBGRADIENT_THRESHOLD",
    "FD_STEP_SCALE",
    "ROOT_DOMAIN_SLACK",
    "FEASIBILITY_TOL",
    "PROX_CERTIFICATE_TOL",

    # Solver defaults
    "DEFAULT_ALPHA",
    "DEFAULT_THETA",
    "DEFAULT_RHO",
    "DEFAULT_SIGMA_SCALE",
    "DEFAULT_TOL",
    "DEFAULT_MAX_ITERS",
    "DEFAULT_M_MAX",
    "DEFAULT_SEED",

    # Output
    "CSV_FLOAT_FORMAT",
    "TRACE_LEADING_COLUMNS",
    "TRACE_TRAILING_COLUMNS",

    # Logging
    "LOGGING_CONFIG",
]
