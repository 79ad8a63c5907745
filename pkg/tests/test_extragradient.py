import dataclasses

import numpy as np
import pytest

from quasiconvex_ep.bifunctions import CallableBifunction, CubicBifunction
from quasiconvex_ep.core import Box, InvalidArgument, LinesearchExhausted, ProxFailure
from quasiconvex_ep.problems import root_quadratic_problem
from quasiconvex_ep.solver import (
    ConstantRho,
    Golden1D,
    GridPolish,
    HarmonicSigma,
    SolverConfig,
    SolveStatus,
    descent_margin,
    solve,
    step,
)


def run(instance, **changes):
    config = dataclasses.replace(instance.config, **changes)
    return solve(instance.f, instance.feasible_set, instance.x0, config)


class TestRootQuadratic:
    def test_first_step(self, root_problem):
        outcome = step(root_problem.f, root_problem.feasible_set, [5.0], 0, root_problem.config)
        record = outcome.record
        assert outcome.status is None
        np.testing.assert_array_equal(record.y, [0.0])
        assert record.m == 1
        np.testing.assert_allclose(record.z, [2.5])
        np.testing.assert_array_equal(record.g, [1.0])
        np.testing.assert_allclose(outcome.x_next, [4.0])
        assert record.err_xy == pytest.approx(5.0)
        assert record.err_step == pytest.approx(1.0)
        assert record.sigma_k == 1.0
        assert record.rho_k == 1.0

    def test_harmonic_steps(self, root_problem):
        result = solve(root_problem.f, root_problem.feasible_set, root_problem.x0, root_problem.config)
        assert result.status is SolveStatus.FIXED_POINT
        assert result.iterations == 84
        np.testing.assert_array_equal(result.final, [0.0])

    def test_doubled_harmonic_steps(self):
        instance = root_quadratic_problem(sigma_scale=2.0)
        result = solve(instance.f, instance.feasible_set, instance.x0, instance.config)
        assert result.status is SolveStatus.FIXED_POINT
        assert result.iterations == 8
        np.testing.assert_array_equal(result.final, [0.0])

    def test_iterates_follow_harmonic_sums(self, root_problem):
        result = run(root_problem, max_iters=3)
        assert result.status is SolveStatus.MAX_ITERS
        assert result.iterations == 3
        np.testing.assert_allclose(result.final, [5.0 - (1.0 + 1.0 / 2.0 + 1.0 / 3.0)])
        np.testing.assert_allclose([r.x[0] for r in result.trace], [5.0, 4.0, 3.5])

    def test_trace_invariants(self, root_problem):
        result = solve(root_problem.f, root_problem.feasible_set, root_problem.x0, root_problem.config)
        f, alpha, theta = root_problem.f, root_problem.config.alpha, root_problem.config.theta
        for record in result.trace:
            for point in (record.x, record.y, record.z, record.x_next):
                if point is not None:
                    assert 0.0 <= point[0] <= 10.0
            if record.g is None:
                continue
            np.testing.assert_allclose(np.linalg.norm(record.g), 1.0, rtol=1e-12)
            assert descent_margin(f, record.x, record.y, record.z, record.rho_k, alpha) >= -1e-12
            if record.m > 1:
                previous = record.x + theta ** (record.m - 1) * (record.y - record.x)
                assert descent_margin(f, record.x, record.y, previous, record.rho_k, alpha) < 0
            assert f.eval(record.z, record.x) > -1e-12

    def test_deterministic(self, root_problem):
        first = solve(root_problem.f, root_problem.feasible_set, root_problem.x0, root_problem.config)
        second = solve(root_problem.f, root_problem.feasible_set, root_problem.x0, root_problem.config)
        assert first.iterations == second.iterations
        for a, b in zip(first.trace, second.trace):
            np.testing.assert_array_equal(a.x, b.x)
            np.testing.assert_array_equal(a.y, b.y)

    def test_infeasible_start_is_projected(self, root_problem):
        result = solve(root_problem.f, root_problem.feasible_set, [12.0], root_problem.config)
        assert result.projected_start
        np.testing.assert_array_equal(result.trace[0].x, [10.0])

    def test_small_step_stops_on_tolerance(self):
        instance = root_quadratic_problem()
        result = run(instance, sigma_schedule=HarmonicSigma(1e-4))
        assert result.status is SolveStatus.TOL_STEP
        assert result.iterations == 1
        np.testing.assert_allclose(result.final, [5.0 - 1e-4])

    def test_prox_gap_below_tolerance(self):
        instance = root_quadratic_problem(x0=5e-4)
        result = run(instance)
        assert result.status is SolveStatus.TOL_XY
        np.testing.assert_array_equal(result.final, [5e-4])
        assert result.trace[0].z is None
        assert np.isnan(result.trace[0].err_step)

    def test_trace_can_be_disabled(self, root_problem):
        result = run(root_problem, record_trace=False, max_iters=2)
        assert result.trace == []
        assert result.final_error == pytest.approx(0.5)


def test_step_fixed_returns_linesearch_point():
    # the supplied star direction points out of the box at x = 1
    f = CallableBifunction(lambda x, y: float(y[0] - x[0]), 1, star_fn=lambda z, x: [-1.0])
    config = SolverConfig(rho_schedule=ConstantRho(1.0), prox_method=Golden1D())
    result = solve(f, Box([0.0], [1.0]), [1.0], config)
    assert result.status is SolveStatus.STEP_FIXED
    assert result.iterations == 1
    np.testing.assert_allclose(result.final, [0.5])


def test_grid_polish_runs_on_two_dimensional_catalog_problem(fractional_problem):
    result = run(fractional_problem, prox_method=GridPolish(), max_iters=2)
    assert result.status is SolveStatus.MAX_ITERS
    assert not any(record.prox_flag for record in result.trace)
    assert np.all((result.final >= 0.0) & (result.final <= 5.0))


def test_zero_subgradient_ends_run():
    config = SolverConfig(rho_schedule=ConstantRho(1.0), prox_method=Golden1D())
    result = solve(CubicBifunction(), Box([-1.0], [0.0]), [0.0], config)
    assert result.status is SolveStatus.ZERO_SUBGRADIENT
    np.testing.assert_array_equal(result.final, [0.0])
    np.testing.assert_allclose(result.trace[0].z, [-0.5])
    assert result.trace[0].g is None


def test_exhausted_linesearch_ends_run(monkeypatch, root_problem):
    def exhausted(*args, **kwargs):
        raise LinesearchExhausted("no exponent passed")

    monkeypatch.setattr("quasiconvex_ep.solver.extragradient.linesearch", exhausted)
    result = solve(root_problem.f, root_problem.feasible_set, root_problem.x0, root_problem.config)
    assert result.status is SolveStatus.LINESEARCH_EXHAUSTED
    assert result.iterations == 1
    np.testing.assert_array_equal(result.final, [5.0])


def test_prox_failure_is_flagged(monkeypatch, root_problem):
    def uncertified(problem, method=None, rng=None):
        raise ProxFailure("uncertified", best=np.array([0.0]), objective=1.0)

    monkeypatch.setattr("quasiconvex_ep.solver.extragradient.solve_prox", uncertified)
    result = run(root_problem, max_iters=1)
    assert result.status is SolveStatus.MAX_ITERS
    assert result.trace[0].prox_flag
    np.testing.assert_allclose(result.final, [4.0])


@pytest.mark.parametrize("changes", [{"tol_xy": 0.0}, {"max_iters": 0}, {"alpha": 1.0}, {"theta": 0.0}])
def test_invalid_config(changes):
    with pytest.raises(InvalidArgument):
        SolverConfig(**changes)
