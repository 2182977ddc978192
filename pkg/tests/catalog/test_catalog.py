"""Catalog of reference systems."""

import numpy as np
import pytest

from torchaa.base.errors import UnknownIdentifierError
from torchaa.catalog import catalog_get, catalog_list, catalog_names, lift_time_dependent
from torchaa.expr import parse
from torchaa.lattice import find_period_lattice
from torchaa.symplectic import check_involution


def test_names():
    assert catalog_names() == [
        "free",
        "sho",
        "sho2",
        "cylinder",
        "pendulum",
        "pendulum-rotation",
        "extended-time",
        "noninvolutive",
    ]
    assert [entry.name for entry in catalog_list()][:2] == ["free", "sho"]


def test_parametric_entries():
    assert catalog_get("sho(2)").system.sources == ["(p1^2 + 4*q1^2)/2"]
    assert catalog_get("sho(2)").name == "sho(2)"
    assert catalog_get("sho( 1 )").name == "sho"
    entry = catalog_get("sho(pi)")
    assert entry.parameters[0] == pytest.approx(np.pi)
    entry = catalog_get("sho2(1, 2)")
    np.testing.assert_allclose(entry.periods(entry.box.mean(axis=1)), np.diag([2 * np.pi, np.pi]))


@pytest.mark.parametrize("name", ["nope", "sho(0)", "sho(-1)", "sho(q1)", "sho(1", "Free"])
def test_invalid_names(name):
    with pytest.raises(ValueError):
        catalog_get(name)


def test_seeds_lie_in_boxes(integrable_entry):
    J = integrable_entry.system.values(integrable_entry.seed)
    assert np.all(J >= integrable_entry.box[:, 0]) and np.all(J <= integrable_entry.box[:, 1])
    assert integrable_entry.box.shape == (integrable_entry.system.n, 2)


def test_expected_rank(integrable_entry, fast_lattice):
    entry = integrable_entry
    lattice = find_period_lattice(entry.system, entry.seed, fast_lattice)
    assert lattice.rank == entry.rank
    expected = entry.periods(entry.system.values(entry.seed))
    np.testing.assert_allclose(
        np.sort(np.abs(lattice.basis), axis=1), np.sort(np.abs(expected), axis=1), atol=1e-6
    )


def test_noninvolutive_entry():
    entry = catalog_get("noninvolutive")
    assert entry.rank is None
    report = check_involution(entry.system, entry.seed[None, :])
    assert not report.passed
    assert report.max_bracket == pytest.approx(1.0)


def test_pendulum_action_oracle():
    entry = catalog_get("pendulum")
    # small oscillations: I ~ (E + 1) for E -> -1
    assert entry.actions(-1 + 1e-6) == pytest.approx(1e-6, rel=1e-3)
    assert entry.periods([0.6])[0, 0] > 2 * np.pi


def test_entry_to_dict():
    data = catalog_get("sho(2)").to_dict()
    assert data["rank"] == 1
    assert data["system"]["integrals"] == ["(p1^2 + 4*q1^2)/2"]
    assert data["actions_at_center"] == [pytest.approx(1.25 / 2)]
    assert data["periods_at_center"] == [[pytest.approx(np.pi)]]
    assert "actions_at_center" not in catalog_get("noninvolutive").to_dict()


# %% time-dependent lift
def test_lift_sources():
    system = lift_time_dependent("(p1^2 + q1^2)/2", ["(p1^2 + q1^2)/2"])
    assert system.n == 2
    assert system.sources == ["p1 + (p2^2 + q2^2)/2", "(p2^2 + q2^2)/2"]


def test_lift_uses_time_as_first_coordinate():
    system = lift_time_dependent("p1^2/2 - t*q1", ["p1 - t^2/2"])
    assert system.sources == ["p1 + (p2^2/2 - q1*q2)", "p2 - q1^2/2"]
    report = check_involution(system, np.array([[0.3, 0.5, -0.2, 1.0], [1.0, -1.0, 0.4, 0.2]]))
    assert report.passed


def test_lift_errors():
    with pytest.raises(ValueError):
        lift_time_dependent("p1", [])
    with pytest.raises(ValueError):
        lift_time_dependent(parse("p1 + p2", 2, time=True), ["p1"])
    with pytest.raises(UnknownIdentifierError):
        lift_time_dependent("p1 + p2", ["p1"])
