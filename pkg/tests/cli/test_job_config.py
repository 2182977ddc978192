"""Job configuration parsing."""

import json

import numpy as np
import pytest

from torchaa.base.errors import ConfigError
from torchaa.cli import JobConfig, load_config


def test_catalog_defaults():
    config = JobConfig.from_dict({"system": "pendulum"})
    np.testing.assert_array_equal(config.box, [[0.3, 0.9]])
    assert config.expected_rank == 1
    assert config.catalog == "pendulum"
    assert config.lattice.s_max == 50.0


def test_explicit_expected_rank_overrides_catalog():
    assert JobConfig.from_dict({"system": "sho", "expected_rank": None}).expected_rank is None
    assert JobConfig.from_dict({"system": "cylinder", "expected_rank": 2}).expected_rank == 2


def test_inline_system():
    config = JobConfig.from_dict(
        {"system": {"integrals": ["p1", "(p2^2 + q2^2)/2"], "name": "mine"}, "box": [[0, 1], [0.5, 1]], "seed": [0, 1, 0.5, 0]}
    )
    assert config.system.n == 2
    assert config.system.name == "mine"
    assert config.catalog is None
    assert config.expected_rank is None


def test_time_dependent_system():
    config = JobConfig.from_dict(
        {
            "system": {"hamiltonian": "(p1^2 + q1^2)/2", "integrals": ["(p1^2 + q1^2)/2"], "dimension": 1},
            "box": [[0.5, 1.5], [0.5, 1.5]],
            "seed": [0, 1.4, 0, 0],
        }
    )
    assert config.system.sources[0] == "p1 + (p2^2 + q2^2)/2"


def test_option_sections():
    config = JobConfig.from_dict(
        {"system": "sho", "chart": {"grid_resolution": [5]}, "integrator": {"box": 20}, "emit": {"levels": 3}}
    )
    assert config.chart.grid_resolution == (5,)
    assert config.integrator.box == 20
    assert config.emit.levels == 3


@pytest.mark.parametrize(
    "data",
    [
        [],
        {},
        {"system": "sho", "colour": 1},
        {"system": "sho", "lattice": {"smax": 1}},
        {"system": "sho", "lattice": {"s_max": -1}},
        {"system": "sho", "lattice": []},
        {"system": "nope"},
        {"system": 3},
        {"system": {"catalog": "sho", "integrals": ["p1"]}},
        {"system": {"integrals": "p1"}, "box": [[0, 1]], "seed": [0, 1]},
        {"system": {"integrals": ["p1 +"]}, "box": [[0, 1]], "seed": [0, 1]},
        {"system": {"integrals": ["p1"], "dimension": 2}, "box": [[0, 1]], "seed": [0, 1]},
        {"system": {"integrals": ["p1"]}},
        {"system": {"name": "x"}, "box": [[0, 1]], "seed": [0, 1]},
        {"system": "sho", "box": [[1, 0]]},
        {"system": "sho", "seed": [1, 0, 0]},
        {"system": "sho", "seed": ["a", 0]},
        {"system": "sho", "expected_rank": 2},
        {"system": "sho", "involution_tol": 0},
        {"system": "sho", "rng_seed": -1},
        {"system": "sho", "emit": {"orbit_points": 1}},
    ],
)
def test_invalid_configurations(data):
    with pytest.raises(ConfigError):
        JobConfig.from_dict(data)


def test_load_config(tmp_path):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"system": "free", "output": "results"}))
    config = load_config(path)
    assert config.output == tmp_path / "results"


def test_absolute_output_is_kept(tmp_path):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"system": "free", "output": str(tmp_path / "abs")}))
    assert load_config(path).output == tmp_path / "abs"


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    path = tmp_path / "bad.json"
    path.write_text("{")
    with pytest.raises(ConfigError):
        load_config(path)


def test_provenance():
    config = JobConfig.from_dict({"system": "sho(2)", "verify": {"samples": 3}})
    data = config.to_dict()
    assert data["catalog"] == "sho(2)"
    assert data["verify"]["samples"] == 3
    assert data["integrator"]["rtol"] == 1e-11
    assert "output" not in data
    json.dumps(data)


def test_rng_is_fresh():
    config = JobConfig.from_dict({"system": "sho", "rng_seed": 5})
    assert config.rng.random() == config.rng.random()
    assert config.replace(rng_seed=6).rng.random() != config.rng.random()
