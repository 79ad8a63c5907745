"""
Quasiconvex Equilibrium Solver - Error Types

All exceptions raised by the package derive from QuasiEPError so callers
can catch package failures with a single clause.
"""

from typing import Optional

import numpy as np


class QuasiEPError(Exception):
    """Base exception for the quasiconvex equilibrium solver."""
    pass


class InvalidArgument(QuasiEPError, ValueError):
    """Argument outside its documented range, or a dimension mismatch."""
    pass


class DomainError(QuasiEPError, ValueError):
    """A bifunction was evaluated outside its domain of definition."""
    pass


class GridTooLarge(QuasiEPError):
    """Grid enumeration would exceed the configured point cap."""
    pass


class ZeroSubgradient(QuasiEPError):
    """The star-subgradient oracle returned a (numerically) zero vector."""
    pass


class LinesearchExhausted(QuasiEPError):
    """No backtracking exponent up to m_max satisfied the descent condition."""
    pass


class InvalidSchedule(QuasiEPError, ValueError):
    """A rho or sigma schedule broke its contract (increase or nonpositive value)."""
    pass


class ConfigError(QuasiEPError):
    """A run configuration file could not be read or validated."""
    pass


class ProxFailure(QuasiEPError):
    """
    The prox subproblem solver could not certify its answer.

    The best point found is still available on the exception so the
    driver can continue with a flagged iteration.
    """

    def __init__(self, message: str, best: Optional[np.ndarray] = None, objective: float = float("nan")):
        super().__init__(message)
        self.best = best
        self.objective = objective
