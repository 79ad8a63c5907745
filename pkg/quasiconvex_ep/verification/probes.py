"""
Sampling-based property checks: the Fejer-type descent inequality along a
trace, the quasiconvexity class of phi = f(x, .) and the separation
property of the selected star-subgradient.

Each gives evidence at sample resolution, never proof.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from quasiconvex_ep.bifunctions.base import Bifunction
from quasiconvex_ep.config.settings import (
    DEFAULT_SEED,
    DUAL_CERTIFICATE_TOL,
    FEJER_TOL,
    PROBE_GAMMA_FLOOR,
    PROBE_SAMPLES,
    STAR_CHECK_SAMPLES,
    STAR_CHECK_TOL,
)
from quasiconvex_ep.core.errors import InvalidArgument
from quasiconvex_ep.core.sets import FeasibleSet, as_point, sample_points
from quasiconvex_ep.solver.extragradient import IterationRecord

from .oracles import ResidualReport

logger = logging.getLogger(__name__)


# =============================================================================
# FEJER CHECK
# =============================================================================

@dataclass(frozen=True)
class FejerResult:
    ok: bool
    first_violation: Optional[int]
    max_excess: float


def fejer_check(
    trace: Sequence[IterationRecord],
    z_star: ArrayLike,
    certificate: ResidualReport,
    tol: float = FEJER_TOL,
) -> FejerResult:
    """
    Check ||x_{k+1} - z*||^2 <= ||x_k - z*||^2 + sigma_k^2 + tol along a trace.

    Records without a projection step are skipped.

    Args:
        trace: Iteration records of one run
        z_star: Candidate dual solution
        certificate: dual_residual report at z_star
        tol: Allowed slack

    Raises:
        InvalidArgument: the certificate does not certify z_star
    """
    z_star = as_point(z_star)
    if certificate.kind != "dual_residual" or not np.array_equal(certificate.point, z_star):
        raise InvalidArgument("the certificate is not a dual residual report for z_star")
    if certificate.value > DUAL_CERTIFICATE_TOL:
        raise InvalidArgument(
            f"z_star is not certified: dual residual {certificate.value:.3e} > {DUAL_CERTIFICATE_TOL:g}"
        )

    first_violation = None
    max_excess = -np.inf
    for record in trace:
        if record.x_next is None:
            continue
        excess = (
            float(np.sum((record.x_next - z_star) ** 2))
            - float(np.sum((record.x - z_star) ** 2))
            - record.sigma_k**2
        )
        max_excess = max(max_excess, excess)
        if excess > tol and first_violation is None:
            first_violation = record.k
            logger.warning(f"Fejer inequality fails at k={record.k} by {excess:.3e}")

    return FejerResult(first_violation is None, first_violation, float(max_excess))


# =============================================================================
# QUASICONVEXITY PROBE
# =============================================================================

class ProbeClass(Enum):
    VIOLATES_QUASICONVEX = "violates-quasiconvex"
    QUASICONVEX_ONLY = "quasiconvex-only"
    SEMISTRICT_CONSISTENT = "semistrict-consistent"
    STRONG_CONSISTENT = "strong-consistent"


@dataclass(frozen=True)
class ProbeReport:
    classification: ProbeClass
    gamma_hat: float
    samples: int
    seed: int
    quasiconvex_violations: int
    semistrict_violations: int

    def to_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "gamma_hat": self.gamma_hat,
            "samples": self.samples,
            "seed": self.seed,
            "quasiconvex_violations": self.quasiconvex_violations,
            "semistrict_violations": self.semistrict_violations,
        }


def quasiconvexity_probe(
    f: Bifunction,
    feasible_set: FeasibleSet,
    x: ArrayLike,
    samples: int = PROBE_SAMPLES,
    seed: int = DEFAULT_SEED,
    gamma_floor: float = PROBE_GAMMA_FLOOR,
    tol: float = 1e-12,
) -> ProbeReport:
    """
    Classify phi = f(x, .) from random triples (u, v, lambda).

    With mid = (1 - lambda) u + lambda v and top = max(phi(u), phi(v)):

    - quasiconvex:   phi(mid) <= top
    - semistrict:    phi(mid) <  top whenever phi(u) != phi(v)
    - strong(gamma): phi(mid) <= top - lambda (1 - lambda) gamma / 2 ||u - v||^2

    gamma_hat is the smallest gamma implied by the samples; it counts as
    strong evidence only above gamma_floor. Half of the u draws sit on
    bounding-box corners so boundary behavior is covered.
    """
    if samples < 1:
        raise InvalidArgument(f"samples must be at least 1, got {samples}")
    x = as_point(x, f.dim)
    rng = np.random.default_rng(seed)

    us = sample_points(feasible_set, samples, rng)
    vs = sample_points(feasible_set, samples, rng)
    box = feasible_set.bounding_box()
    anchored = samples // 2
    corners = np.where(rng.random((anchored, box.dim)) < 0.5, box.lo, box.hi)
    us[:anchored] = feasible_set.project_many(corners)
    lam = rng.uniform(0.0, 1.0, size=samples)
    mids = (1.0 - lam)[:, None] * us + lam[:, None] * vs

    phi_u = f.eval_batch(x, us)
    phi_v = f.eval_batch(x, vs)
    phi_mid = f.eval_batch(x, mids)
    top = np.maximum(phi_u, phi_v)
    slack = tol * (1.0 + np.abs(top))

    quasi_bad = phi_mid > top + slack
    semistrict_bad = (np.abs(phi_u - phi_v) > slack) & (phi_mid >= top)

    spread = lam * (1.0 - lam) * np.sum((us - vs) ** 2, axis=1)
    usable = spread > 1e-12
    gamma_hat = float(np.min(2.0 * (top[usable] - phi_mid[usable]) / spread[usable])) if np.any(usable) else 0.0

    if np.any(quasi_bad):
        classification = ProbeClass.VIOLATES_QUASICONVEX
    elif np.any(semistrict_bad):
        classification = ProbeClass.QUASICONVEX_ONLY
    elif gamma_hat >= gamma_floor:
        classification = ProbeClass.STRONG_CONSISTENT
    else:
        classification = ProbeClass.SEMISTRICT_CONSISTENT

    logger.info(f"Quasiconvexity probe at x={x}: {classification.value} (gamma_hat={gamma_hat:.4g})")
    return ProbeReport(
        classification=classification,
        gamma_hat=gamma_hat,
        samples=samples,
        seed=seed,
        quasiconvex_violations=int(np.sum(quasi_bad)),
        semistrict_violations=int(np.sum(semistrict_bad)),
    )


# =============================================================================
# STAR-SUBGRADIENT CHECK
# =============================================================================

@dataclass(frozen=True, eq=False)
class StarSubgradientReport:
    """
    Sampled membership of g = star_subgradient(z, x) in the star-subdifferential.

    Among sampled y with f(z, y) < f(z, x) - tol, a violation has
    <g, y - x> >= tol and a strict violation has <g, y - x> >= 0.
    """

    z: np.ndarray
    x: np.ndarray
    direction: np.ndarray
    samples: int
    seed: int
    lower_level: int
    violations: int
    strict_violations: int
    worst_inner: float
    witness: Optional[np.ndarray]

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "z": self.z.tolist(),
            "x": self.x.tolist(),
            "direction": self.direction.tolist(),
            "samples": self.samples,
            "seed": self.seed,
            "lower_level": self.lower_level,
            "violations": self.violations,
            "strict_violations": self.strict_violations,
            "worst_inner": self.worst_inner,
            "witness": None if self.witness is None else self.witness.tolist(),
        }


def star_subgradient_check(
    f: Bifunction,
    feasible_set: FeasibleSet,
    z: ArrayLike,
    x: ArrayLike,
    samples: int = STAR_CHECK_SAMPLES,
    seed: int = DEFAULT_SEED,
    tol: float = STAR_CHECK_TOL,
) -> StarSubgradientReport:
    """
    Count sampled points of the strict lower level set of f(z, .) at x that
    the selected unit direction fails to separate.

    Violations of either kind are logged at WARNING.

    Raises:
        InvalidArgument: samples < 1
        ZeroSubgradient: no direction can be selected at (z, x)
    """
    if samples < 1:
        raise InvalidArgument(f"samples must be at least 1, got {samples}")
    z = as_point(z, f.dim)
    x = as_point(x, f.dim)
    g = f.star_subgradient(z, x)

    ys = sample_points(feasible_set, samples, np.random.default_rng(seed))
    below = ys[f.eval_batch(z, ys) < f.eval(z, x) - tol]
    inner = (below - x) @ g

    violations = int(np.sum(inner >= tol))
    strict_violations = int(np.sum(inner >= 0.0))
    worst, witness = -np.inf, None
    if len(below):
        index = int(np.argmax(inner))
        worst, witness = float(inner[index]), np.array(below[index])

    if strict_violations:
        logger.warning(
            f"{f.name}: star direction at z={z}, x={x} fails to separate {strict_violations} of "
            f"{len(below)} lower-level samples ({violations} beyond {tol:g}; worst {worst:.3e})"
        )
    return StarSubgradientReport(
        z=z,
        x=x,
        direction=g,
        samples=samples,
        seed=seed,
        lower_level=len(below),
        violations=violations,
        strict_violations=strict_violations,
        worst_inner=worst,
        witness=witness,
    )
