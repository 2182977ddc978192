"""Hypothesis analysis over a level box."""

import json

import numpy as np
import pytest

import torchaa
from torchaa.catalog import catalog_get
from torchaa.utils import to_jsonable


def _analyze(name, fast_chart_options, fast_lattice, **kwargs):
    entry = catalog_get(name)
    return torchaa.analyze_system(
        entry.system, entry.box, entry.seed, fast_chart_options, fast_lattice, rng=0, **kwargs
    )


@pytest.mark.parametrize("name, rank", [("free", 0), ("sho", 1), ("cylinder", 1), ("sho2", 2)])
def test_rank(name, rank, fast_chart_options, fast_lattice):
    report = _analyze(name, fast_chart_options, fast_lattice)
    assert report.passed
    assert report.rank == rank
    assert report.family.rank == rank
    assert report.stage is None and report.error is None


def test_periods_over_grid(fast_chart_options, fast_lattice):
    report = _analyze("pendulum", fast_chart_options, fast_lattice)
    entry = catalog_get("pendulum")
    periods = report.family.periods()
    nodes = report.section.nodes()
    for node in np.ndindex(*report.section.shape):
        np.testing.assert_allclose(periods[node][0], entry.periods(nodes[node])[0, 0], rtol=1e-6)


def test_completeness_note(fast_chart_options, fast_lattice):
    report = _analyze("free", fast_chart_options, fast_lattice)
    assert not report.completeness.escaped
    assert report.notes == []


def test_noninvolutive(fast_chart_options, fast_lattice):
    report = _analyze("noninvolutive", fast_chart_options, fast_lattice)
    assert not report.passed
    assert report.involution.max_bracket == pytest.approx(1.0)
    assert report.lattice is None and report.family is None
    assert report.notes == ["first integrals are not in involution"]


def test_critical_seed(fast_chart_options, fast_lattice):
    entry = catalog_get("sho")
    report = torchaa.analyze_system(entry.system, entry.box, [0.0, 0.0], fast_chart_options, fast_lattice)
    assert not report.passed
    assert not report.regularity.regular
    assert report.notes == ["seed is a critical point of F"]


def test_failed_stage_is_reported(fast_chart_options, fast_lattice):
    entry = catalog_get("pendulum")
    report = torchaa.analyze_system(entry.system, [[0.3, 1.5]], entry.seed, fast_chart_options, fast_lattice)
    assert not report.passed
    assert report.stage in ("section", "continuation")
    assert report.error


def test_report_is_serializable(fast_chart_options, fast_lattice):
    report = _analyze("cylinder", fast_chart_options, fast_lattice)
    data = json.loads(json.dumps(to_jsonable(report.to_dict())))
    assert data["passed"] is True
    assert data["continuation"]["rank"] == 1
    assert data["regularity"]["rank"] == 2
