"""Shared fixtures: catalog systems and fast option sets."""

import functools

import numpy as np
import pytest

from torchaa.base.config import ChartOptions, GaugeOptions, IntegratorOptions, LatticeOptions, VerifyOptions
from torchaa.catalog import catalog_get
from torchaa.chart import build_chart, gauge_fix

FAST_LATTICE = LatticeOptions(s_max=10.0, grid_step=0.1, full_grid=False)
FAST_CHART = ChartOptions(grid_resolution=5)
FAST_GAUGE = GaugeOptions(degree=2, level_samples=3, fiber_samples=2)
FAST_VERIFY = VerifyOptions(samples=4)


@pytest.fixture
def fast_lattice():
    return FAST_LATTICE


@pytest.fixture
def fast_chart_options():
    return FAST_CHART


@pytest.fixture
def fast_gauge():
    return FAST_GAUGE


@pytest.fixture
def fast_verify():
    return FAST_VERIFY


@pytest.fixture
def opts():
    return IntegratorOptions()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@functools.lru_cache(maxsize=None)
def _catalog_chart(name, fitted):
    entry = catalog_get(name)
    chart = build_chart(entry.system, entry.box, entry.seed, FAST_CHART, FAST_LATTICE, expected_rank=entry.rank)
    if fitted:
        chart, _ = gauge_fix(chart, options=FAST_GAUGE)
    return chart


@pytest.fixture(scope="session")
def catalog_chart():
    """Build (and cache) the chart of a catalog entry with the fast options."""

    def build(name, fitted=False):
        return _catalog_chart(name, fitted)

    return build


@pytest.fixture(params=["free", "sho", "sho(2)", "sho2", "cylinder", "pendulum", "pendulum-rotation", "extended-time"])
def integrable_entry(request):
    return catalog_get(request.param)
