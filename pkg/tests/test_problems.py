import json

import numpy as np
import pytest

from quasiconvex_ep.core import ConfigError, DomainError, InvalidArgument, contains
from quasiconvex_ep.problems import (
    CATALOG,
    TEN_DIM_E2,
    build_catalog_problem,
    config_from_dict,
    config_to_dict,
    fractional_max_ten,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    random_fractional,
    root_quadratic_problem,
    save_instance,
)
from quasiconvex_ep.solver import GridPolish, ProjGrad, SolverConfig


class TestCatalog:
    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_instances_are_consistent(self, name):
        instance = build_catalog_problem(name)
        assert contains(instance.feasible_set, instance.x0)
        assert instance.f.eval(instance.x0, instance.x0) == 0.0
        assert instance.feasible_set.dim == instance.dim

    def test_root_quadratic_defaults(self, root_problem):
        np.testing.assert_array_equal(root_problem.x0, [5.0])
        np.testing.assert_array_equal(root_problem.feasible_set.hi, [10.0])
        assert root_problem.config.tol_xy == 1e-3
        assert root_problem.config.theta == 0.5

    def test_root_quadratic_small_interval(self):
        instance = root_quadratic_problem(r=1.0, delta=1.0)
        np.testing.assert_array_equal(instance.x0, [0.5])

    @pytest.mark.parametrize("r, delta", [(0.0, 1.0), (1.0, 0.0), (-1.0, 5.0)])
    def test_root_quadratic_rejects_bad_parameters(self, r, delta):
        with pytest.raises(InvalidArgument):
            root_quadratic_problem(r=r, delta=delta)

    def test_fractional_small_denominators(self, fractional_problem):
        x0 = fractional_problem.x0
        first, second = fractional_problem.f.branches
        assert first.c @ x0 + first.d == 1.0
        assert second.c @ x0 + second.d == 12.0

    def test_fractional_ten(self):
        instance = fractional_max_ten()
        assert instance.dim == 10
        assert TEN_DIM_E2[0].sum() == 26
        np.testing.assert_array_equal(instance.f.branches[1].E, TEN_DIM_E2)
        np.testing.assert_array_equal(instance.x0, np.full(10, 5.0))

    def test_cubic_counterexample(self, cubic_problem):
        np.testing.assert_array_equal(cubic_problem.x0, [-0.5])
        assert cubic_problem.config.rho_schedule.value(0) == 0.4

    def test_unknown_name(self):
        with pytest.raises(InvalidArgument):
            build_catalog_problem("nope")

    def test_unknown_parameter(self):
        with pytest.raises(InvalidArgument):
            build_catalog_problem("root-quadratic", gamma=2.0)


class TestRandomFamily:
    def test_reproducible(self):
        first = instance_to_dict(random_fractional(5, 42))
        second = instance_to_dict(random_fractional(5, 42))
        assert first == second

    def test_seed_changes_coefficients(self):
        first = random_fractional(5, 1).f.branches[0].A
        second = random_fractional(5, 2).f.branches[0].A
        assert not np.array_equal(first, second)

    def test_denominators_stay_positive(self):
        for seed in range(20):
            instance = random_fractional(4, seed)
            for branch in instance.f.branches:
                assert branch.d >= 0.1
                assert branch.min_denominator(instance.feasible_set) >= 0.1

    def test_configuration(self):
        instance = random_fractional(10, 3)
        assert instance.config.sigma_schedule.value(0) == 10.0
        assert instance.config.tol_xy == 1e-8
        assert instance.config.max_iters == 1000
        assert instance.provenance == {"source": "random", "n": 10, "seed": 3}
        assert np.all(instance.f.branches[0].A >= 0.0) and np.all(instance.f.branches[0].A <= 5.0)

    def test_rejects_empty_dimension(self):
        with pytest.raises(InvalidArgument):
            random_fractional(0, 0)


class TestSerialization:
    def test_instance_round_trip_evaluates_identically(self, tmp_path):
        instance = random_fractional(3, 7)
        path = save_instance(instance, tmp_path / "instance.json")
        loaded = load_instance(path)
        rng = np.random.default_rng(0)
        for x, y in rng.uniform(0.0, 5.0, size=(10, 2, 3)):
            assert loaded.f.eval(x, y) == instance.f.eval(x, y)
        np.testing.assert_array_equal(loaded.x0, instance.x0)
        assert loaded.config.tol_xy == instance.config.tol_xy
        assert loaded.provenance == instance.provenance

    def test_config_keeps_prox_method(self):
        for method in (ProjGrad(multistart=6, epigraph_polish=False), GridPolish(resolution=1e-2)):
            config = config_from_dict(config_to_dict(SolverConfig(prox_method=method)))
            assert config.prox_method == method

    def test_bad_denominator_rejected(self, fractional_problem):
        data = instance_to_dict(fractional_problem)
        data["bifunction"]["branches"][1]["d"] = -20.0
        with pytest.raises(DomainError):
            instance_from_dict(data)

    def test_missing_field(self, root_problem):
        data = instance_to_dict(root_problem)
        del data["x0"]
        with pytest.raises(InvalidArgument):
            instance_from_dict(data)

    def test_unreadable_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_instance(path)

    def test_dict_is_json(self, cubic_problem):
        text = json.dumps(instance_to_dict(cubic_problem))
        assert json.loads(text)["bifunction"] == {"kind": "cubic"}
