import numpy as np
import pytest

from quasiconvex_ep.bifunctions import CallableBifunction
from quasiconvex_ep.core import Box, InvalidArgument, ProxFailure, grid
from quasiconvex_ep.solver import (
    Golden1D,
    GridPolish,
    ProjGrad,
    ProxProblem,
    prox_objective,
    solve_prox,
    strong_convexity_rho_bound,
)


class TestProxProblem:
    def test_anchor_scores_zero(self, root_f):
        problem = ProxProblem(root_f, [3.0], 1.0, Box([0.0], [10.0]))
        assert prox_objective(problem, [3.0]) == 0.0

    def test_infeasible_anchor(self, root_f):
        with pytest.raises(InvalidArgument):
            ProxProblem(root_f, [11.0], 1.0, Box([0.0], [10.0]))

    def test_nonpositive_rho(self, root_f):
        with pytest.raises(InvalidArgument):
            ProxProblem(root_f, [3.0], 0.0, Box([0.0], [10.0]))


class TestRootQuadratic:
    box = Box([0.0], [10.0])

    def test_fixed_point_at_zero(self, root_f):
        y = solve_prox(ProxProblem(root_f, [0.0], 1.0, self.box), Golden1D())
        np.testing.assert_array_equal(y, [0.0])

    def test_jumps_to_zero(self, root_f):
        problem = ProxProblem(root_f, [5.0], 1.0, self.box)
        y = solve_prox(problem, Golden1D())
        np.testing.assert_array_equal(y, [0.0])
        assert prox_objective(problem, y) <= 0.0

    def test_matches_grid_oracle(self, root_f):
        rng = np.random.default_rng(21)
        for anchor in rng.uniform(0.0, 10.0, 20):
            problem = ProxProblem(root_f, [anchor], 1.0, self.box)
            ours = prox_objective(problem, solve_prox(problem, Golden1D()))
            oracle = prox_objective(problem, solve_prox(problem, GridPolish(resolution=1e-4)))
            assert abs(ours - oracle) <= 1e-6

    def test_golden_needs_one_dimension(self, squared_distance):
        problem = ProxProblem(squared_distance, [0.5, 0.5], 1.0, Box([0.0, 0.0], [1.0, 1.0]))
        with pytest.raises(InvalidArgument):
            solve_prox(problem, Golden1D())


class TestFractional:
    def test_feasible_and_certified(self, fractional_problem):
        problem = ProxProblem(fractional_problem.f, [5.0, 5.0], 1.0, fractional_problem.feasible_set)
        y = solve_prox(problem, ProjGrad())
        assert np.all((y >= 0.0) & (y <= 5.0))
        assert prox_objective(problem, y) <= 1e-10

    def test_no_worse_than_lattice_minimum(self, fractional_problem):
        box = fractional_problem.feasible_set
        problem = ProxProblem(fractional_problem.f, [5.0, 5.0], 1.0, box)
        ours = prox_objective(problem, solve_prox(problem, ProjGrad()))
        lattice = float(np.min(problem.objective_batch(grid(box, 1e-2))))
        assert ours <= lattice + 1e-7
        assert ours < -0.2

    def test_deterministic_with_seeded_rng(self, fractional_problem):
        problem = ProxProblem(fractional_problem.f, [2.0, 4.0], 1.0, fractional_problem.feasible_set)
        first = solve_prox(problem, ProjGrad(), np.random.default_rng(7))
        second = solve_prox(problem, ProjGrad(), np.random.default_rng(7))
        np.testing.assert_array_equal(first, second)

    def test_grid_polish_fits_two_dimensional_box(self, fractional_problem):
        box = fractional_problem.feasible_set
        problem = ProxProblem(fractional_problem.f, [5.0, 5.0], 1.0, box)
        ours = prox_objective(problem, solve_prox(problem, GridPolish()))
        lattice = float(np.min(problem.objective_batch(grid(box, 1e-2))))
        assert ours <= lattice + 1e-7
        assert ours < -0.2

    def test_grid_polish_limited_to_two_dimensions(self):
        f = CallableBifunction(lambda x, y: 0.0, 3)
        problem = ProxProblem(f, np.zeros(3), 1.0, Box(np.zeros(3), np.ones(3)))
        with pytest.raises(InvalidArgument):
            solve_prox(problem, GridPolish())


def test_anchor_kept_when_it_is_the_minimizer(squared_distance):
    problem = ProxProblem(squared_distance, [0.3, 0.6], 1.0, Box([0.0, 0.0], [1.0, 1.0]))
    np.testing.assert_array_equal(solve_prox(problem, ProjGrad()), [0.3, 0.6])


def test_fixed_step_rule():
    f = CallableBifunction(
        lambda x, y: float(y @ y - x @ x), 2, grad2_fn=lambda x, y: 2.0 * y
    )
    problem = ProxProblem(f, [1.0, 1.0], 1.0, Box([-2.0, -2.0], [2.0, 2.0]))
    y = solve_prox(problem, ProjGrad(step_rule="fixed", lipschitz=3.0))
    # minimizer of ||y||^2 + ||y - x||^2 / 2 is x / 3
    np.testing.assert_allclose(y, [1.0 / 3.0, 1.0 / 3.0], atol=1e-6)


def test_failure_carries_best_candidate():
    # f(x, x) = 1 breaks the anchor certificate
    f = CallableBifunction(lambda x, y: 1.0 + float((y - x) @ (y - x)), 1)
    problem = ProxProblem(f, [0.5], 1.0, Box([0.0], [1.0]))
    with pytest.raises(ProxFailure) as info:
        solve_prox(problem, Golden1D())
    np.testing.assert_array_equal(info.value.best, [0.5])
    assert info.value.objective == pytest.approx(1.0)


class TestRhoBound:
    def test_quadratic(self, squared_distance):
        bound = strong_convexity_rho_bound(squared_distance, [0.0, 0.0], Box([-1.0, -1.0], [1.0, 1.0]))
        assert bound == pytest.approx(1.0, rel=1e-6)

    def test_root_quadratic_within_factor_two(self, root_f):
        # grad2 Lipschitz constant on [0.1, 10] is 1 / (4 * 0.1^1.5)
        exact = 4.0 * 0.1**1.5
        bound = strong_convexity_rho_bound(root_f, [1.0], Box([0.1], [10.0]), sample_count=1000)
        assert exact <= bound <= 2.0 * exact

    def test_flat_gradient_gives_infinity(self):
        f = CallableBifunction(lambda x, y: float(np.sum(y - x)), 1, grad2_fn=lambda x, y: [1.0])
        assert strong_convexity_rho_bound(f, [0.0], Box([0.0], [1.0])) == np.inf

    def test_needs_two_samples(self, root_f):
        with pytest.raises(InvalidArgument):
            strong_convexity_rho_bound(root_f, [1.0], Box([0.1], [10.0]), sample_count=1)
