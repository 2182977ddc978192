"""Chart map tests: to_action_angle, from_action_angle and fiber checks."""

import numpy as np
import pytest

from torchaa.base.errors import ChartDomainError
from torchaa.chart import (
    GaugeCorrection,
    chart_samples,
    check_integrals_of_actions,
    from_action_angle,
    to_action_angle,
)
from torchaa.flow import flow


def _angle_gap(a, b):
    return np.abs((np.asarray(a) - np.asarray(b) + np.pi) % (2 * np.pi) - np.pi)


def test_free_particle(catalog_chart):
    chart = catalog_chart("free")
    I, x, phi = to_action_angle(chart, [3.0, 1.5])
    np.testing.assert_allclose(I, [1.5], atol=1e-12)
    np.testing.assert_allclose(x, [3.0], atol=1e-9)
    assert phi.size == 0
    np.testing.assert_allclose(from_action_angle(chart, [1.5], [3.0], []), [3.0, 1.5], atol=1e-12)


def test_section_is_fiber_origin(catalog_chart):
    chart = catalog_chart("cylinder")
    J = np.array([0.8, 1.2])
    I, x, phi = to_action_angle(chart, chart.section(J))
    np.testing.assert_allclose(I, chart.actions(J), atol=1e-12)
    np.testing.assert_allclose(x, [0.0], atol=1e-12)
    assert _angle_gap(phi, [0.0]).max() < 1e-12
    np.testing.assert_allclose(from_action_angle(chart, I, [0.0], [0.0]), chart.section(J), atol=1e-12)


def test_quarter_period(catalog_chart):
    chart = catalog_chart("sho(2)")
    J = 1.0
    z = flow(chart.system, 0, chart.section([J]), np.pi / 4)
    I, x, phi = to_action_angle(chart, z)
    assert I[0] == pytest.approx(0.5, abs=1e-9)
    assert x.size == 0
    assert phi[0] == pytest.approx(np.pi / 2, abs=1e-8)


def test_antipodal_point(catalog_chart):
    chart = catalog_chart("sho")
    z0 = from_action_angle(chart, [1.0], [], [0.0])
    z1 = from_action_angle(chart, [1.0], [], [np.pi])
    np.testing.assert_allclose(z1, -z0, atol=1e-9)
    np.testing.assert_allclose(z0, [np.sqrt(2.0), 0.0], atol=1e-10)


def test_angles_are_reduced(catalog_chart):
    chart = catalog_chart("sho")
    np.testing.assert_allclose(
        from_action_angle(chart, [1.0], [], [0.5 + 4 * np.pi]), from_action_angle(chart, [1.0], [], [0.5]), atol=1e-12
    )
    _, _, phi = to_action_angle(chart, from_action_angle(chart, [1.0], [], [-0.5]))
    assert 0.0 <= phi[0] < 2 * np.pi
    assert phi[0] == pytest.approx(2 * np.pi - 0.5, abs=1e-8)


def test_point_outside_box(catalog_chart):
    chart = catalog_chart("sho")
    with pytest.raises(ChartDomainError):
        to_action_angle(chart, [3.0, 0.0])
    with pytest.raises(ChartDomainError):
        from_action_angle(chart, [10.0], [], [0.0])


def test_wrong_coordinate_sizes(catalog_chart):
    chart = catalog_chart("cylinder")
    with pytest.raises(ValueError):
        from_action_angle(chart, [1.0, 1.0], [0.0, 0.0], [])
    with pytest.raises(ValueError):
        to_action_angle(chart, [0.0, 1.0])


def test_gauge_must_match(catalog_chart):
    chart = catalog_chart("cylinder")
    with pytest.raises(ValueError):
        chart.with_gauge(GaugeCorrection.zero(chart.box, 2))


CHARTS = [("sho(2)", False), ("cylinder", True), ("sho2", True), ("pendulum", False), ("extended-time", True)]


@pytest.mark.parametrize("seed", range(100))
def test_round_trip(catalog_chart, seed):
    name, fitted = CHARTS[seed % len(CHARTS)]
    chart = catalog_chart(name, fitted)
    n, k = chart.n, chart.n - chart.rank
    point = chart_samples(chart, 1, rng=seed)[0]
    z = from_action_angle(chart, point[:n], point[n : n + k], point[n + k :])
    I, x, phi = to_action_angle(chart, z)
    np.testing.assert_allclose(I, point[:n], atol=1e-8)
    np.testing.assert_allclose(x, point[n : n + k], atol=1e-6)
    assert np.all(_angle_gap(phi, point[n + k :]) < 1e-6)
    np.testing.assert_allclose(chart.system.values(z), chart.actions.inverse(point[:n]), atol=1e-7)


# %% integrals along fibers
def test_integrals_depend_on_actions_only(catalog_chart, rng):
    chart = catalog_chart("cylinder", True)
    I = chart.actions([1.1, 0.9])
    fiber = np.column_stack([rng.uniform(-1.0, 1.0, 20), rng.uniform(0.0, 2 * np.pi, 20)])
    samples = np.column_stack([np.tile(I, (20, 1)), fiber])
    report = check_integrals_of_actions(chart, samples)
    assert report.passed
    assert report.max_deviation <= 1e-7
    assert report.n_samples == 20


def test_oscillator_energy_along_angles(catalog_chart):
    chart = catalog_chart("sho(2)")
    for phi in np.linspace(0.0, 2 * np.pi, 9):
        z = from_action_angle(chart, [0.5], [], [phi])
        assert chart.system.values(z)[0] == pytest.approx(1.0, abs=1e-9)


def test_free_particle_along_lines(catalog_chart):
    chart = catalog_chart("free")
    samples = [[2.0, x] for x in np.linspace(-3.0, 3.0, 7)]
    report = check_integrals_of_actions(chart, samples)
    assert report.passed
    assert report.to_dict()["max_deviation"] <= 1e-12
