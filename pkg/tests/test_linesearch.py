import numpy as np
import pytest

from quasiconvex_ep.bifunctions import CallableBifunction
from quasiconvex_ep.core import InvalidArgument, LinesearchExhausted
from quasiconvex_ep.solver import LinesearchParams, descent_margin, linesearch


def inner_product_stub():
    """f(x, y) = <x, y - x>."""
    return CallableBifunction(lambda x, y: float(x @ (y - x)), 1, name="inner-product")


def shifted_stub(c):
    """f(x, y) = <x - c, y - x>: the descent margin grows as z moves toward x."""
    return CallableBifunction(lambda x, y: float((x - c) @ (y - x)), 1, name="shifted")


def test_first_exponent_accepted():
    z, m = linesearch(inner_product_stub(), [1.0], [0.0], 1.0, LinesearchParams(alpha=0.5, theta=0.5))
    assert m == 1
    np.testing.assert_allclose(z, [0.5])


def test_small_theta_keeps_z_near_x():
    # z = x + theta (y - x) = 0.9 and f(z, x) - f(z, y) = 0.9 >= 0.25
    z, m = linesearch(inner_product_stub(), [1.0], [0.0], 1.0, LinesearchParams(alpha=0.5, theta=0.1))
    assert m == 1
    np.testing.assert_allclose(z, [0.9])


def test_smallest_passing_exponent():
    f = shifted_stub(0.4)
    params = LinesearchParams(alpha=0.5, theta=0.5)
    x, y = np.array([1.0]), np.array([0.0])
    z, m = linesearch(f, x, y, 1.0, params)
    assert m == 2
    np.testing.assert_allclose(z, [0.75])
    assert descent_margin(f, x, y, z, 1.0, params.alpha) >= -1e-12
    previous = x + params.theta ** (m - 1) * (y - x)
    assert descent_margin(f, x, y, previous, 1.0, params.alpha) < 0


def test_exhausted():
    # f(z, x) - f(z, y) = -z < 0 for every z on the segment
    f = CallableBifunction(lambda x, y: float(x @ (x - y)), 1)
    with pytest.raises(LinesearchExhausted):
        linesearch(f, [1.0], [0.0], 1.0, LinesearchParams(alpha=0.5, theta=0.5, m_max=10))


def test_root_quadratic_segment_midpoint(root_f):
    z, m = linesearch(root_f, [5.0], [0.0], 1.0, LinesearchParams(alpha=0.5, theta=0.5))
    assert m == 1
    np.testing.assert_allclose(z, [2.5])


def test_rejects_equal_points():
    with pytest.raises(InvalidArgument):
        linesearch(inner_product_stub(), [1.0], [1.0], 1.0, LinesearchParams(0.5, 0.5))


def test_rejects_nonpositive_rho():
    with pytest.raises(InvalidArgument):
        linesearch(inner_product_stub(), [1.0], [0.0], 0.0, LinesearchParams(0.5, 0.5))


@pytest.mark.parametrize("alpha, theta, m_max", [(0.0, 0.5, 10), (0.5, 1.0, 10), (0.5, 0.5, 0)])
def test_parameter_ranges(alpha, theta, m_max):
    with pytest.raises(InvalidArgument):
        LinesearchParams(alpha, theta, m_max)
