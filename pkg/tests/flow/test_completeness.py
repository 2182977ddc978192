"""Completeness probe tests."""

import numpy as np
import pytest

from torchaa.base.config import IntegratorOptions
from torchaa.flow import completeness_probe
from torchaa.symplectic import IntegrableSystem


def test_bounded_orbits_do_not_escape():
    system = IntegrableSystem.from_sources(["(q1^2 + p1^2)/2"])
    result = completeness_probe(system, [1.0, 0.5], 100.0, IntegratorOptions(box=10.0))
    assert not result.escaped
    assert result.t_max == 100.0
    assert result.to_dict()["index"] is None


def test_translation_escapes_unit_box():
    system = IntegrableSystem.from_sources(["p1"])
    result = completeness_probe(system, [0.0, 0.0], 10.0, IntegratorOptions(box=1.0))
    assert result.escaped
    assert result.index == 0
    assert abs(result.t_escape) == pytest.approx(1.0, abs=1e-8)


def test_exponential_growth_escapes():
    # q' = q, so q(t) = exp(t) leaves the default box at t = log(50)
    system = IntegrableSystem.from_sources(["q1*p1"])
    result = completeness_probe(system, [1.0, 0.5], 10.0)
    assert result.escaped
    assert result.t_escape == pytest.approx(np.log(50.0), rel=1e-6)
    assert result.point[0] == pytest.approx(50.0, rel=1e-6)


def test_second_integral_escapes():
    system = IntegrableSystem.from_sources(["(q1^2 + p1^2)/2", "p2"])
    result = completeness_probe(system, [1.0, 0.0, 0.0, 2.0], 10.0, IntegratorOptions(box=4.0))
    assert result.index == 1
    assert abs(result.t_escape) == pytest.approx(4.0, abs=1e-8)


def test_horizon_must_be_positive():
    system = IntegrableSystem.from_sources(["p1"])
    with pytest.raises(ValueError):
        completeness_probe(system, [0.0, 0.0], 0.0)
