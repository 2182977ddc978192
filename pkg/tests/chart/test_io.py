"""Chart serialization tests."""

import json

import numpy as np
import pytest

from torchaa.catalog import catalog_get
from torchaa.chart import build_chart, chart_from_json, chart_to_json, from_action_angle, load_chart, save_chart


def test_json_round_trip(catalog_chart):
    chart = catalog_chart("cylinder", True)
    text = chart_to_json(chart)
    restored = chart_from_json(text)
    assert chart_to_json(restored) == text
    for coords in ([1.0, 1.0], [0.3], [2.0]), ([0.7, 1.4], [-0.6], [5.0]):
        np.testing.assert_array_equal(from_action_angle(restored, *coords), from_action_angle(chart, *coords))


def test_document_header(catalog_chart):
    document = json.loads(chart_to_json(catalog_chart("sho")))
    assert document["format"] == "torchaa-chart"
    assert document["version"] == 1
    assert document["convention"]["vector_field"] == "(dF/dp, -dF/dq)"
    assert document["system"]["integrals"] == ["(p1^2 + q1^2)/2"]


def test_save_and_load(catalog_chart, tmp_path):
    chart = catalog_chart("sho(2)")
    path = save_chart(chart, tmp_path / "chart.json")
    assert path.read_text().endswith("\n")
    restored = load_chart(path)
    assert restored.rank == 1
    np.testing.assert_array_equal(restored.family.bases, chart.family.bases)
    np.testing.assert_array_equal(restored.actions.values, chart.actions.values)


def test_foreign_document():
    with pytest.raises(ValueError):
        chart_from_json(json.dumps({"format": "something-else"}))


def test_newer_version(catalog_chart):
    document = json.loads(chart_to_json(catalog_chart("free")))
    document["version"] = 99
    with pytest.raises(ValueError):
        chart_from_json(json.dumps(document))


def test_level_dependent_complement_is_not_serializable(fast_chart_options, fast_lattice):
    entry = catalog_get("cylinder")
    chart = build_chart(
        entry.system, entry.box, entry.seed, fast_chart_options, fast_lattice, complement=lambda J: [[1.0], [0.0]]
    )
    with pytest.raises(ValueError):
        chart_to_json(chart)
