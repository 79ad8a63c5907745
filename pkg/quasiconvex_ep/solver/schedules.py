"""
Regularization (rho_k) and step-size (sigma_k) schedules.

rho_k must be positive and nonincreasing; sigma_k must be positive. The
harmonic and power families satisfy sum sigma_k = inf and sum sigma_k^2 < inf
by construction. Contracts are enforced lazily by rho_at and sigma_at so
user-supplied oracles are checked as they are consumed.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from quasiconvex_ep.core.errors import InvalidArgument, InvalidSchedule

logger = logging.getLogger(__name__)


class RhoSchedule(ABC):
    @abstractmethod
    def value(self, k: int) -> float:
        ...

    def to_dict(self) -> dict:
        raise InvalidArgument(f"{type(self).__name__} cannot be serialized")


class SigmaSchedule(ABC):
    @abstractmethod
    def value(self, k: int) -> float:
        ...

    def to_dict(self) -> dict:
        raise InvalidArgument(f"{type(self).__name__} cannot be serialized")


def _positive(value: float, label: str) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise InvalidArgument(f"{label} must be positive, got {value}")
    return value


# =============================================================================
# RHO
# =============================================================================

@dataclass(frozen=True)
class ConstantRho(RhoSchedule):
    rho_bar: float

    def __post_init__(self):
        object.__setattr__(self, "rho_bar", _positive(self.rho_bar, "rho_bar"))

    def value(self, k: int) -> float:
        return self.rho_bar

    def to_dict(self) -> dict:
        return {"kind": "constant", "rho_bar": self.rho_bar}


@dataclass(frozen=True)
class GeometricRho(RhoSchedule):
    """rho_k = rho_bar + (rho0 - rho_bar) * factor^k."""

    rho0: float
    rho_bar: float
    factor: float = 0.5

    def __post_init__(self):
        _positive(self.rho_bar, "rho_bar")
        if self.rho0 < self.rho_bar:
            raise InvalidArgument(f"rho0 ({self.rho0}) must be at least rho_bar ({self.rho_bar})")
        if not 0.0 < self.factor < 1.0:
            raise InvalidArgument(f"factor must lie in (0, 1), got {self.factor}")

    def value(self, k: int) -> float:
        return self.rho_bar + (self.rho0 - self.rho_bar) * self.factor**k

    def to_dict(self) -> dict:
        return {"kind": "geometric", "rho0": self.rho0, "rho_bar": self.rho_bar, "factor": self.factor}


@dataclass(frozen=True)
class GeneralRho(RhoSchedule):
    """User sequence (last value held past its end) or oracle k -> rho_k."""

    values: Union[Sequence[float], Callable[[int], float]]

    def __post_init__(self):
        if not callable(self.values):
            if len(self.values) == 0:
                raise InvalidArgument("a rho sequence needs at least one value")
            object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def value(self, k: int) -> float:
        if callable(self.values):
            return float(self.values(k))
        return self.values[min(k, len(self.values) - 1)]

    def to_dict(self) -> dict:
        if callable(self.values):
            return super().to_dict()
        return {"kind": "sequence", "values": list(self.values)}


# =============================================================================
# SIGMA
# =============================================================================

@dataclass(frozen=True)
class HarmonicSigma(SigmaSchedule):
    """sigma_k = c / (k + 1)."""

    c: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "c", _positive(self.c, "c"))

    def value(self, k: int) -> float:
        return self.c / (k + 1)

    def to_dict(self) -> dict:
        return {"kind": "harmonic", "c": self.c}


@dataclass(frozen=True)
class PowerSigma(SigmaSchedule):
    """sigma_k = c / (k + 1)^power with power in (1/2, 1]."""

    c: float = 1.0
    power: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "c", _positive(self.c, "c"))
        if not 0.5 < self.power <= 1.0:
            raise InvalidArgument(f"power must lie in (1/2, 1], got {self.power}")

    def value(self, k: int) -> float:
        return self.c / (k + 1) ** self.power

    def to_dict(self) -> dict:
        return {"kind": "power", "c": self.c, "power": self.power}


@dataclass(frozen=True)
class GeneralSigma(SigmaSchedule):
    oracle: Callable[[int], float]

    def value(self, k: int) -> float:
        return float(self.oracle(k))


# =============================================================================
# CONTRACT-CHECKED ACCESS
# =============================================================================

def _check_index(k: int) -> None:
    if k < 0:
        raise InvalidArgument(f"iteration index must be nonnegative, got {k}")


def rho_at(schedule: RhoSchedule, k: int) -> float:
    """
    rho_k, checked positive and no larger than rho_{k-1}.

    Raises:
        InvalidSchedule: nonpositive value or an increase from k-1 to k
    """
    _check_index(k)
    current = schedule.value(k)
    if not (math.isfinite(current) and current > 0):
        raise InvalidSchedule(f"rho_{k} = {current} is not positive")
    if k > 0:
        previous = schedule.value(k - 1)
        if current > previous:
            raise InvalidSchedule(f"rho schedule increases at k={k}: {previous} -> {current}")
    return current


def sigma_at(schedule: SigmaSchedule, k: int) -> float:
    """sigma_k, checked positive."""
    _check_index(k)
    current = schedule.value(k)
    if not (math.isfinite(current) and current > 0):
        raise InvalidSchedule(f"sigma_{k} = {current} is not positive")
    return current


def rho_schedule_from_dict(data: dict) -> RhoSchedule:
    kind = data.get("kind")
    if kind == "constant":
        return ConstantRho(data["rho_bar"])
    if kind == "geometric":
        return GeometricRho(data["rho0"], data["rho_bar"], data.get("factor", 0.5))
    if kind == "sequence":
        return GeneralRho(data["values"])
    raise InvalidArgument(f"unknown rho schedule kind: {kind!r}")


def sigma_schedule_from_dict(data: dict) -> SigmaSchedule:
    kind = data.get("kind")
    if kind == "harmonic":
        return HarmonicSigma(data.get("c", 1.0))
    if kind == "power":
        return PowerSigma(data.get("c", 1.0), data.get("power", 1.0))
    raise InvalidArgument(f"unknown sigma schedule kind: {kind!r}")
