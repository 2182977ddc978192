"""Test numerical options and the exception hierarchy."""

import numpy as np
import pytest

from torchaa.base import errors
from torchaa.base.config import ChartOptions, EmitOptions, GaugeOptions, IntegratorOptions, LatticeOptions, VerifyOptions


def test_integrator_bounds():
    lower, upper = IntegratorOptions().bounds(3)
    np.testing.assert_array_equal(lower, [-50.0] * 3)
    np.testing.assert_array_equal(upper, [50.0] * 3)
    lower, upper = IntegratorOptions(box=((0.0, -1.0), (1.0, 2.0))).bounds(2)
    np.testing.assert_array_equal(lower, [0.0, -1.0])
    np.testing.assert_array_equal(upper, [1.0, 2.0])


@pytest.mark.parametrize(
    "cls, kwargs",
    [
        (IntegratorOptions, {"rtol": 0.0}),
        (IntegratorOptions, {"max_steps": 0}),
        (IntegratorOptions, {"method": "Euler"}),
        (IntegratorOptions, {"box": -1.0}),
        (IntegratorOptions, {"box": ((1.0,), (0.0,))}),
        (LatticeOptions, {"s_max": 0.05}),
        (LatticeOptions, {"tol": -1e-9}),
        (ChartOptions, {"grid_resolution": 1}),
        (ChartOptions, {"grid_resolution": (3, 1)}),
        (ChartOptions, {"refine_steps": -1}),
        (GaugeOptions, {"degree": -1}),
        (GaugeOptions, {"fiber_samples": 0}),
        (VerifyOptions, {"samples": 0}),
        (EmitOptions, {"levels": 1}),
        (EmitOptions, {"orbit_action": -1}),
    ],
)
def test_invalid_options(cls, kwargs):
    with pytest.raises(ValueError):
        cls(**kwargs)


def test_chart_resolution():
    assert ChartOptions(grid_resolution=5).resolution(2) == (5, 5)
    assert ChartOptions(grid_resolution=(4, 6)).resolution(2) == (4, 6)
    with pytest.raises(ValueError):
        ChartOptions(grid_resolution=(4, 6)).resolution(3)


def test_asdict_and_replace():
    options = ChartOptions(grid_resolution=(4, 6))
    assert options.asdict()["grid_resolution"] == [4, 6]
    assert options.replace(refine_steps=0).refine_steps == 0
    assert options.refine_steps == 2
    assert IntegratorOptions().asdict()["box"] == 50.0


def test_error_hierarchy():
    for name in errors.__all__:
        assert issubclass(getattr(errors, name), errors.ActionAngleError)
    assert issubclass(errors.UnknownIdentifierError, errors.ExpressionError)
    assert issubclass(errors.EscapeError, errors.IntegrationError)
    assert issubclass(errors.RankChangeError, errors.LatticeError)
    assert issubclass(errors.CriticalPointError, errors.SectionError)
    assert issubclass(errors.GaugeFitError, errors.ChartError)
    assert issubclass(errors.NonInvolutiveError, errors.HypothesisError)
    assert not issubclass(errors.ConfigError, ValueError)


def test_error_payloads():
    err = errors.EscapeError(1.5, [1.0, 2.0])
    assert err.t_escape == 1.5 and err.point == [1.0, 2.0]
    assert "1.5" in str(err)
    err = errors.StepLimitError(10, 0.25)
    assert (err.max_steps, err.t_reached) == (10, 0.25)
    err = errors.RankChangeError([0.5, 1.0], 1, "lost vector 0")
    assert err.rank == 1 and "lost vector 0" in str(err)
    err = errors.UnknownIdentifierError("unknown identifier 'r'", 4)
    assert err.offset == 4 and "byte offset 4" in str(err)
    assert errors.NonInvolutiveError(1.0).max_bracket == 1.0
    assert errors.NoReturnsFoundError("none", {"s_max": 1.0}).coverage == {"s_max": 1.0}
