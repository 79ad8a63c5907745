"""
Plain-dict and JSON forms of problem instances and solver configurations.
"""

import json
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Optional, Union

from quasiconvex_ep.bifunctions import FractionalMaxBifunction, bifunction_from_dict
from quasiconvex_ep.core.errors import ConfigError, InvalidArgument
from quasiconvex_ep.core.sets import Box, set_from_dict
from quasiconvex_ep.solver import (
    GridPolish,
    Golden1D,
    ProjGrad,
    ProxMethod,
    SolverConfig,
    rho_schedule_from_dict,
    sigma_schedule_from_dict,
)

from .catalog import ProblemInstance

logger = logging.getLogger(__name__)

PROX_METHOD_NAMES = {Golden1D: "golden", ProjGrad: "projgrad", GridPolish: "grid"}
PROX_METHOD_TYPES = {name: cls for cls, name in PROX_METHOD_NAMES.items()}


def prox_method_to_dict(method: Optional[ProxMethod]) -> Optional[dict]:
    if method is None:
        return None
    return {"method": PROX_METHOD_NAMES[type(method)], **asdict(method)}


def prox_method_from_dict(data: Optional[dict]) -> Optional[ProxMethod]:
    if data is None:
        return None
    data = dict(data)
    name = data.pop("method", "auto")
    if name == "auto":
        return None
    if name not in PROX_METHOD_TYPES:
        raise InvalidArgument(f"unknown prox method {name!r}")
    return PROX_METHOD_TYPES[name](**data)


def config_to_dict(config: SolverConfig) -> dict:
    return {
        "alpha": config.alpha,
        "theta": config.theta,
        "rho": config.rho_schedule.to_dict(),
        "sigma": config.sigma_schedule.to_dict(),
        "tol_xy": config.tol_xy,
        "tol_step": config.tol_step,
        "max_iters": config.max_iters,
        "m_max": config.m_max,
        "prox": prox_method_to_dict(config.prox_method),
        "record_trace": config.record_trace,
        "seed": config.seed,
    }


def config_from_dict(data: dict) -> SolverConfig:
    return SolverConfig(
        alpha=data["alpha"],
        theta=data["theta"],
        rho_schedule=rho_schedule_from_dict(data["rho"]),
        sigma_schedule=sigma_schedule_from_dict(data["sigma"]),
        tol_xy=data["tol_xy"],
        tol_step=data["tol_step"],
        max_iters=data["max_iters"],
        m_max=data["m_max"],
        prox_method=prox_method_from_dict(data.get("prox")),
        record_trace=data.get("record_trace", True),
        seed=data.get("seed", 0),
    )


def instance_to_dict(instance: ProblemInstance) -> dict:
    return {
        "name": instance.name,
        "bifunction": instance.f.to_dict(),
        "set": instance.feasible_set.to_dict(),
        "x0": instance.x0.tolist(),
        "solver": config_to_dict(instance.config),
        "provenance": dict(instance.provenance),
        "params": dict(instance.params),
    }


def instance_from_dict(data: dict) -> ProblemInstance:
    """
    Rebuild an instance; fractional denominators are re-checked on box sets.

    Raises:
        InvalidArgument: unknown kinds or missing fields
    """
    try:
        f = bifunction_from_dict(data["bifunction"])
        feasible_set = set_from_dict(data["set"])
        config = config_from_dict(data["solver"]) if "solver" in data else SolverConfig()
        x0 = data["x0"]
        name = data.get("name", f.name)
    except KeyError as exc:
        raise InvalidArgument(f"instance is missing field {exc}") from exc
    if isinstance(f, FractionalMaxBifunction) and isinstance(feasible_set, Box):
        f.check_denominators(feasible_set)
    return ProblemInstance(
        f,
        feasible_set,
        x0,
        name,
        config,
        data.get("provenance", {"source": "inline"}),
        data.get("params", {}),
    )


def save_instance(instance: ProblemInstance, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(instance_to_dict(instance), indent=2))
    logger.info(f"Saved instance {instance.name} to {path}")
    return path


def load_instance(path: Union[str, Path]) -> ProblemInstance:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read instance file {path}: {exc}") from exc
    return instance_from_dict(data)
