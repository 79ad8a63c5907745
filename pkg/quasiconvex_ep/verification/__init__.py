"""
Brute-force residual oracles and sampled property checks.
"""

from .oracles import (
    ResidualReport,
    DriftReport,
    StationarityReport,
    gap,
    quasi_residual,
    dual_residual,
    residual_drift,
    solution_epsilon,
    stationarity_report,
)
from .probes import (
    FejerResult,
    ProbeClass,
    ProbeReport,
    StarSubgradientReport,
    fejer_check,
    quasiconvexity_probe,
    star_subgradient_check,
)

__all__ = [
    # Grid oracles
    "ResidualReport",
    "gap",
    "quasi_residual",
    "dual_residual",

    # Diagnostics
    "DriftReport",
    "StationarityReport",
    "residual_drift",
    "solution_epsilon",
    "stationarity_report",

    # Sampled checks
    "FejerResult",
    "ProbeClass",
    "ProbeReport",
    "fejer_check",
    "quasiconvexity_probe",
    "StarSubgradientReport",
    "star_subgradient_check",
]
