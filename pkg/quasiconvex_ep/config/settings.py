"""
Quasiconvex Equilibrium Solver - Configuration Settings

This module contains all configuration constants and settings for the solver,
the verification oracles and the command-line front end.
Values marked as overridable can be set through environment variables or a
local .env file.
"""

import os
from pathlib import Path

# Load environment variables from .env file (optional for local runs)
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass  # dotenv not needed when the environment is set explicitly


def get_setting(key: str, default: str = "") -> str:
    """
    Get a setting value from environment variables.

    Priority:
    1. os.environ / .env file
    2. default value

    Args:
        key: The setting key to look up
        default: Default value if not found

    Returns:
        The setting value or default
    """
    return os.getenv(key, default)


def _int_setting(key: str, default: int) -> int:
    raw = get_setting(key, str(default))
    try:
        return int(raw)
    except ValueError:
        return default


# ===========================================
# PATH CONFIGURATION
# ===========================================
BASE_DIR = Path(__file__).resolve().parent.parent
OUTPUT_DIR = Path(get_setting("QEP_OUTPUT_DIR", str(BASE_DIR.parent / "output")))

# ===========================================
# APPLICATION SETTINGS
# ===========================================
DEBUG = get_setting("QEP_DEBUG", "False").lower() == "true"
LOG_LEVEL = get_setting("QEP_LOG_LEVEL", "INFO")

# ===========================================
# NUMERICAL TOLERANCES
# ===========================================
# Largest lattice the brute-force oracles will enumerate
GRID_POINT_CAP = _int_setting("QEP_GRID_POINT_CAP", 10_000_000)

# Grid oracles are only meaningful in low dimension
ORACLE_MAX_DIM = 3

# Unit-normalization refuses directions shorter than this
ZERO_SUBGRADIENT_THRESHOLD = 1e-12

# Central differences use h = FD_STEP_SCALE * (1 + ||y||)
FD_STEP_SCALE = 1e-6

# sqrt(y) accepts y down to -ROOT_DOMAIN_SLACK and reads it as 0
ROOT_DOMAIN_SLACK = 1e-12

FEASIBILITY_TOL = 1e-9

# f(x,y) + ||y-x||^2 / (2 rho) <= PROX_CERTIFICATE_TOL for accepted prox points
PROX_CERTIFICATE_TOL = 1e-10

# ===========================================
# SOLVER DEFAULTS
# ===========================================
DEFAULT_ALPHA = 0.5
DEFAULT_THETA = 0.5
DEFAULT_RHO = 1.0
DEFAULT_SIGMA_SCALE = 1.0
DEFAULT_TOL = 1e-3
DEFAULT_MAX_ITERS = 1000
DEFAULT_M_MAX = 60
DEFAULT_SEED = 0

# ===========================================
# PROX DEFAULTS
# ===========================================
GOLDEN_MULTISTART = 16
GOLDEN_TOL = 1e-10

PROJGRAD_MULTISTART = 4
PROJGRAD_MAX_ITERS = 500
PROJGRAD_TOL = 1e-8
BACKTRACK_BETA = 0.5
BACKTRACK_C = 1e-4

GRID_POLISH_RESOLUTION = 1e-4
GRID_POLISH_TOL = 1e-10
GRID_POLISH_CANDIDATES = 5
# GridPolish coarsens its lattice until it fits; it is scanned once per prox solve
GRID_POLISH_MAX_POINTS = _int_setting("QEP_GRID_POLISH_MAX_POINTS", 1_000_000)

# ===========================================
# VERIFICATION
# ===========================================
DUAL_CERTIFICATE_TOL = 1e-9
FEJER_TOL = 1e-10
PROBE_SAMPLES = 2000
PROBE_GAMMA_FLOOR = 1e-3
EPSILON_PROBE_SAMPLES = 64
# Star-subgradient membership: level gap and inner-product slack
STAR_CHECK_SAMPLES = 500
STAR_CHECK_TOL = 1e-9

# ===========================================
# BENCHMARK
# ===========================================
BENCH_WORKERS = _int_setting("QEP_BENCH_WORKERS", 1)
BENCH_SIZES = [5, 10, 20, 50]

# ===========================================
# OUTPUT FORMAT
# ===========================================
# 17 significant digits round-trip every float64 exactly
CSV_FLOAT_FORMAT = "%.17g"

# Frozen trace CSV columns; x_0..x_{n-1} are inserted after "k"
TRACE_LEADING_COLUMNS = ["k"]
TRACE_TRAILING_COLUMNS = ["err_xy", "err_step", "sigma", "rho", "m", "prox_flag"]

# Exit codes of the command-line front end
EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_NUMERICAL_BREAKDOWN = 2
EXIT_ORACLE_UNAVAILABLE = 3

# ===========================================
# LOGGING CONFIGURATION
# ===========================================
LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "standard": {
            "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "standard",
            "level": LOG_LEVEL,
            "stream": "ext://sys.stderr",
        },
    },
    "loggers": {
        "": {
            "handlers": ["console"],
            "level": "DEBUG" if DEBUG else LOG_LEVEL,
            "propagate": True,
        },
    },
}
