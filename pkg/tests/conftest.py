import json

import pytest

from quasiconvex_ep.bifunctions import CallableBifunction, CubicBifunction, RootQuadBifunction
from quasiconvex_ep.core import Box
from quasiconvex_ep.problems import cubic_counterexample, fractional_max_small, root_quadratic_problem


@pytest.fixture
def root_problem():
    return root_quadratic_problem()


@pytest.fixture
def fractional_problem():
    return fractional_max_small()


@pytest.fixture
def cubic_problem():
    return cubic_counterexample()


@pytest.fixture
def root_f():
    return RootQuadBifunction(r=2.0)


@pytest.fixture
def cubic_f():
    return CubicBifunction()


@pytest.fixture
def unit_interval():
    return Box([-1.0], [1.0])


@pytest.fixture
def squared_distance():
    """f(x, y) = ||y - x||^2 / 2 with its closed-form gradient."""
    return CallableBifunction(
        lambda x, y: 0.5 * float((y - x) @ (y - x)),
        2,
        name="squared-distance",
        grad2_fn=lambda x, y: y - x,
    )


@pytest.fixture
def write_config(tmp_path):
    """Write a run-config dict to a JSON file and return its path."""

    def _write(data, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path

    return _write
