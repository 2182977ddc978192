"""Regularity and involution check tests."""

import numpy as np
import pytest

from torchaa.base.errors import CriticalPointError
from torchaa.expr import parse
from torchaa.symplectic import (
    IntegrableSystem,
    LevelValue,
    check_involution,
    check_regular,
    require_regular,
    sample_points,
)


def test_constant_gradient_is_regular(rng):
    system = IntegrableSystem.from_sources(["p1"])
    for z in rng.normal(size=(5, 2)):
        result = check_regular(system, z)
        assert result.regular
        assert result.rank == 1


def test_oscillator_origin_is_critical():
    system = IntegrableSystem.from_sources(["(q1^2 + p1^2)/2"])
    result = check_regular(system, [0.0, 0.0])
    assert not result
    assert result.rank == 0
    with pytest.raises(CriticalPointError) as info:
        require_regular(system, [0.0, 0.0])
    assert info.value.rank == 0


def test_cylinder_is_regular():
    system = IntegrableSystem.from_sources(["p1", "(q2^2 + p2^2)/2"])
    result = check_regular(system, [0.0, 1.0, 1.0, 0.0])
    assert result.regular
    assert result.singular_values.shape == (2,)


def test_rank_deficient_pair():
    system = IntegrableSystem.from_sources(["p1 + p2", "2*p1 + 2*p2"])
    result = check_regular(system, [0.0, 0.0, 1.0, 1.0])
    assert not result.regular
    assert result.rank == 1


def test_regular_tolerance_must_be_positive():
    system = IntegrableSystem.from_sources(["p1"])
    with pytest.raises(ValueError):
        check_regular(system, [0.0, 1.0], tol=0.0)


def test_momenta_commute(rng):
    system = IntegrableSystem.from_sources(["p1", "p2"])
    report = check_involution(system, rng.normal(size=(10, 4)))
    assert report.passed
    assert report.max_bracket == 0.0


def test_canonical_pair_never_commutes(rng):
    system = IntegrableSystem.from_sources(["q1", "p1"])
    report = check_involution(system, rng.normal(size=(10, 4)))
    assert not report.passed
    assert report.max_bracket == pytest.approx(1.0, abs=1e-12)
    assert report.pair == (0, 1)


def test_disjoint_pair_commutes(rng):
    system = IntegrableSystem.from_sources(["p1", "(q2^2 + p2^2)/2"])
    assert check_involution(system, rng.normal(size=(10, 4)), tol=1e-12).passed


def test_involution_needs_samples():
    system = IntegrableSystem.from_sources(["p1"])
    with pytest.raises(ValueError):
        check_involution(system, np.zeros((0, 2)))


def test_involution_report_to_dict(rng):
    system = IntegrableSystem.from_sources(["q1", "p1"])
    out = check_involution(system, rng.normal(size=(3, 4))).to_dict()
    assert out["passed"] is False
    assert out["n_samples"] == 3
    assert len(out["point"]) == 4


@pytest.mark.parametrize("seed", range(100))
def test_catalog_systems_are_involutive_and_regular(seed, integrable_entry):
    rng = np.random.default_rng(seed)
    system = integrable_entry.system
    points = sample_points(integrable_entry.seed, 0.05, 4, rng)
    assert check_involution(system, points, tol=1e-12).passed
    for z in points:
        assert check_regular(system, z).regular


def test_sample_points_are_reproducible():
    a = sample_points([0.0, 1.0], 0.5, 6, 7)
    b = sample_points([0.0, 1.0], 0.5, 6, 7)
    np.testing.assert_array_equal(a, b)
    assert a.shape == (6, 2)
    assert np.all(np.abs(a - [0.0, 1.0]) <= 0.5)


def test_system_requires_a_common_phase_space():
    with pytest.raises(ValueError):
        IntegrableSystem((parse("p1", 1), parse("p2", 2)))


def test_system_round_trip():
    system = IntegrableSystem.from_sources(["p1", "(p2^2 + q2^2)/2"], "cylinder")
    again = IntegrableSystem.from_dict(system.to_dict())
    assert again.sources == system.sources
    assert again.name == "cylinder"


def test_jacobian_and_batch_jacobian(rng):
    system = IntegrableSystem.from_sources(["p1^2/2 - cos(q1)", "q2*p2"])
    points = rng.normal(size=(4, 4))
    values, jac = system.batch_jacobian(points)
    for k, z in enumerate(points):
        v, J = system.jacobian(z)
        np.testing.assert_allclose(values[k].numpy(), v, rtol=1e-13)
        np.testing.assert_allclose(jac[k].numpy(), J, rtol=1e-13, atol=1e-15)


def test_level_value():
    system = IntegrableSystem.from_sources(["p1", "q2"])
    level = system.level([1.0, 2.0, 3.0, 4.0])
    assert isinstance(level, LevelValue)
    np.testing.assert_array_equal(np.asarray(level.J), [3.0, 2.0])
