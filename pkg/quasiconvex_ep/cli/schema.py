"""
Quasiconvex Equilibrium Solver - Run Configuration Schema

This module validates the JSON run-config file consumed by `run` and
`verify`. Unknown fields are rejected at every level.

Example:
    {
      "problem": {"kind": "catalog", "name": "root-quadratic", "params": {"r": 2, "delta": 10}},
      "solver": {"sigma": {"kind": "harmonic", "c": 2}, "tol_xy": 1e-3},
      "output": {"trace": "out/trace.csv", "summary": "out/summary.json"}
    }
"""

import dataclasses
import json
import logging
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, ValidationError

from quasiconvex_ep.core.errors import ConfigError, QuasiEPError
from quasiconvex_ep.problems import (
    ProblemInstance,
    build_catalog_problem,
    instance_from_dict,
    prox_method_from_dict,
    random_fractional,
)
from quasiconvex_ep.solver import (
    ConstantRho,
    GeneralRho,
    GeometricRho,
    HarmonicSigma,
    PowerSigma,
    ProxMethod,
    RhoSchedule,
    SigmaSchedule,
    SolverConfig,
)

logger = logging.getLogger(__name__)

UnitInterval = Annotated[float, Field(gt=0.0, lt=1.0)]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


# =============================================================================
# PROBLEM SELECTORS
# =============================================================================

class CatalogProblem(StrictModel):
    kind: Literal["catalog"]
    name: str
    params: Dict[str, float] = Field(default_factory=dict)

    def build(self) -> ProblemInstance:
        return build_catalog_problem(self.name, **self.params)


class RandomProblem(StrictModel):
    kind: Literal["random"]
    n: PositiveInt
    seed: int = 0

    def build(self) -> ProblemInstance:
        return random_fractional(self.n, self.seed)


class InlineProblem(StrictModel):
    """Instance in the serialized form: bifunction, set, x0 and optional solver/name."""

    kind: Literal["inline"]
    instance: Dict[str, Any]

    def build(self) -> ProblemInstance:
        return instance_from_dict(self.instance)


ProblemSpec = Annotated[Union[CatalogProblem, RandomProblem, InlineProblem], Field(discriminator="kind")]


# =============================================================================
# SOLVER OVERRIDES
# =============================================================================

class RhoSpec(StrictModel):
    kind: Literal["constant", "geometric", "sequence"] = "constant"
    rho_bar: Optional[PositiveFloat] = None
    rho0: Optional[PositiveFloat] = None
    factor: Optional[UnitInterval] = None
    values: Optional[List[PositiveFloat]] = None

    def build(self) -> RhoSchedule:
        if self.kind == "constant" and self.rho_bar is not None:
            return ConstantRho(self.rho_bar)
        if self.kind == "geometric" and self.rho_bar is not None and self.rho0 is not None:
            return GeometricRho(self.rho0, self.rho_bar, self.factor or 0.5)
        if self.kind == "sequence" and self.values:
            return GeneralRho(self.values)
        raise ConfigError(f"rho schedule {self.kind!r} is missing its parameters")


class SigmaSpec(StrictModel):
    kind: Literal["harmonic", "power"] = "harmonic"
    c: PositiveFloat = 1.0
    power: float = 1.0

    def build(self) -> SigmaSchedule:
        if self.kind == "power":
            return PowerSigma(self.c, self.power)
        return HarmonicSigma(self.c)


class ProxSpec(StrictModel):
    method: Literal["auto", "golden", "projgrad", "grid"] = "auto"
    multistart: Optional[PositiveInt] = None
    tol: Optional[PositiveFloat] = None
    step_rule: Optional[Literal["backtracking", "fixed"]] = None
    beta: Optional[UnitInterval] = None
    c: Optional[UnitInterval] = None
    lipschitz: Optional[PositiveFloat] = None
    max_iters: Optional[PositiveInt] = None
    epigraph_polish: Optional[bool] = None
    resolution: Optional[PositiveFloat] = None
    polish_tol: Optional[PositiveFloat] = None
    candidates: Optional[PositiveInt] = None

    def build(self) -> Optional[ProxMethod]:
        fields = self.model_dump(exclude_none=True)
        try:
            return prox_method_from_dict(fields)
        except TypeError as exc:
            raise ConfigError(f"prox method {self.method!r} does not accept these fields: {exc}") from exc


class SolverOverrides(StrictModel):
    alpha: Optional[UnitInterval] = None
    theta: Optional[UnitInterval] = None
    rho: Optional[Union[PositiveFloat, RhoSpec]] = None
    sigma: Optional[SigmaSpec] = None
    tol_xy: Optional[PositiveFloat] = None
    tol_step: Optional[PositiveFloat] = None
    max_iters: Optional[PositiveInt] = None
    m_max: Optional[PositiveInt] = None
    prox: Optional[ProxSpec] = None
    record_trace: Optional[bool] = None
    seed: Optional[int] = None

    def apply(self, config: SolverConfig) -> SolverConfig:
        """Replace only the fields present in the file."""
        changes: Dict[str, Any] = {}
        for name in ("alpha", "theta", "tol_xy", "tol_step", "max_iters", "m_max", "record_trace", "seed"):
            value = getattr(self, name)
            if value is not None:
                changes[name] = value
        if isinstance(self.rho, RhoSpec):
            changes["rho_schedule"] = self.rho.build()
        elif self.rho is not None:
            changes["rho_schedule"] = ConstantRho(self.rho)
        if self.sigma is not None:
            changes["sigma_schedule"] = self.sigma.build()
        if self.prox is not None:
            changes["prox_method"] = self.prox.build()
        return dataclasses.replace(config, **changes)


class OutputSpec(StrictModel):
    trace: Optional[str] = None
    summary: Optional[str] = None


class RunConfigFile(StrictModel):
    problem: ProblemSpec
    solver: SolverOverrides = Field(default_factory=SolverOverrides)
    output: OutputSpec = Field(default_factory=OutputSpec)

    def build(self) -> ProblemInstance:
        """Problem instance with its recommended config overridden by the file."""
        instance = self.problem.build()
        config = self.solver.apply(instance.config)
        return dataclasses.replace(instance, config=config)


def load_run_config(path: Union[str, Path]) -> RunConfigFile:
    """
    Read and validate a run-config file.

    Raises:
        ConfigError: unreadable file, invalid JSON or schema violation
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return RunConfigFile.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(f"invalid config {path}:\n{exc}") from exc


def build_run(config_file: RunConfigFile) -> ProblemInstance:
    """Build the instance, mapping construction failures to ConfigError."""
    try:
        return config_file.build()
    except ConfigError:
        raise
    except (QuasiEPError, ValueError) as exc:
        raise ConfigError(f"cannot build the problem: {exc}") from exc
