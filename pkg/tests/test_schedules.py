import pytest

from quasiconvex_ep.core import InvalidArgument, InvalidSchedule
from quasiconvex_ep.solver import (
    ConstantRho,
    GeneralRho,
    GeneralSigma,
    GeometricRho,
    HarmonicSigma,
    PowerSigma,
    rho_at,
    rho_schedule_from_dict,
    sigma_at,
    sigma_schedule_from_dict,
)


@pytest.mark.parametrize(
    "c, k, expected",
    [(1.0, 0, 1.0), (2.0, 3, 0.5), (1.5, 1, 0.75)],
)
def test_harmonic_sigma(c, k, expected):
    assert sigma_at(HarmonicSigma(c), k) == pytest.approx(expected)


def test_power_sigma():
    schedule = PowerSigma(c=1.0, power=0.75)
    assert sigma_at(schedule, 15) == pytest.approx(16 ** -0.75)
    with pytest.raises(InvalidArgument):
        PowerSigma(c=1.0, power=0.5)


def test_general_sigma_must_stay_positive():
    schedule = GeneralSigma(lambda k: 1.0 - k)
    assert sigma_at(schedule, 0) == 1.0
    with pytest.raises(InvalidSchedule):
        sigma_at(schedule, 1)


def test_constant_rho():
    assert rho_at(ConstantRho(0.4), 7) == 0.4
    with pytest.raises(InvalidArgument):
        ConstantRho(0.0)


def test_geometric_rho_decreases_to_floor():
    schedule = GeometricRho(rho0=2.0, rho_bar=0.5, factor=0.5)
    values = [rho_at(schedule, k) for k in range(30)]
    assert values[0] == 2.0
    assert all(a >= b for a, b in zip(values, values[1:]))
    assert values[-1] == pytest.approx(0.5, abs=1e-8)


def test_sequence_rho_holds_last_value():
    schedule = GeneralRho([1.0, 0.9, 0.9])
    assert [rho_at(schedule, k) for k in range(5)] == [1.0, 0.9, 0.9, 0.9, 0.9]


def test_increasing_rho_rejected():
    schedule = GeneralRho([0.9, 1.0])
    assert rho_at(schedule, 0) == 0.9
    with pytest.raises(InvalidSchedule):
        rho_at(schedule, 1)


def test_nonpositive_rho_rejected():
    with pytest.raises(InvalidSchedule):
        rho_at(GeneralRho(lambda k: -1.0), 0)


def test_negative_index():
    with pytest.raises(InvalidArgument):
        sigma_at(HarmonicSigma(), -1)


def test_dict_forms():
    for schedule in (ConstantRho(0.5), GeometricRho(1.0, 0.2, 0.3), GeneralRho([1.0, 0.5])):
        rebuilt = rho_schedule_from_dict(schedule.to_dict())
        assert [rebuilt.value(k) for k in range(4)] == [schedule.value(k) for k in range(4)]
    for schedule in (HarmonicSigma(2.0), PowerSigma(1.5, 0.8)):
        rebuilt = sigma_schedule_from_dict(schedule.to_dict())
        assert rebuilt.value(9) == schedule.value(9)
    with pytest.raises(InvalidArgument):
        sigma_schedule_from_dict({"kind": "constant"})
