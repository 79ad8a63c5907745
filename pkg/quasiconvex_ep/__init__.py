"""
Quasiconvex Equilibrium Solver

Linesearch extragradient method for equilibrium problems whose bifunction
is quasiconvex in its second argument, with brute-force verification
oracles, a benchmark problem catalog and a command-line front end.
"""

from .core import Box, Ball, GenericProjection, QuasiEPError
from .bifunctions import Bifunction, CallableBifunction
from .solver import SolverConfig, SolveResult, SolveStatus, solve, step
from .problems import CATALOG, ProblemInstance

__version__ = "0.1.0"

__all__ = [
    "Box",
    "Ball",
    "GenericProjection",
    "QuasiEPError",
    "Bifunction",
    "CallableBifunction",
    "SolverConfig",
    "SolveResult",
    "SolveStatus",
    "solve",
    "step",
    "CATALOG",
    "ProblemInstance",
]
