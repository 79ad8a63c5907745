"""
Prox subproblem, linesearch, schedules and the extragradient driver.
"""

from .schedules import (
    RhoSchedule,
    SigmaSchedule,
    ConstantRho,
    GeometricRho,
    GeneralRho,
    HarmonicSigma,
    PowerSigma,
    GeneralSigma,
    rho_at,
    sigma_at,
    rho_schedule_from_dict,
    sigma_schedule_from_dict,
)
from .linesearch import LinesearchParams, linesearch, descent_margin
from .prox import (
    ProxProblem,
    ProxMethod,
    Golden1D,
    ProjGrad,
    GridPolish,
    default_method,
    prox_objective,
    solve_prox,
    strong_convexity_rho_bound,
)
from .extragradient import (
    SolverConfig,
    SolveStatus,
    IterationRecord,
    StepOutcome,
    SolveResult,
    step,
    solve,
)

__all__ = [
    # Schedules
    "RhoSchedule",
    "SigmaSchedule",
    "ConstantRho",
    "GeometricRho",
    "GeneralRho",
    "HarmonicSigma",
    "PowerSigma",
    "GeneralSigma",
    "rho_at",
    "sigma_at",
    "rho_schedule_from_dict",
    "sigma_schedule_from_dict",

    # Linesearch
    "LinesearchParams",
    "linesearch",
    "descent_margin",

    # Prox
    "ProxProblem",
    "ProxMethod",
    "Golden1D",
    "ProjGrad",
    "GridPolish",
    "default_method",
    "prox_objective",
    "solve_prox",
    "strong_convexity_rho_bound",

    # Driver
    "SolverConfig",
    "SolveStatus",
    "IterationRecord",
    "StepOutcome",
    "SolveResult",
    "step",
    "solve",
]
