"""Period lattice detection and continuation tests."""

import numpy as np
import pytest

from torchaa.base.config import LatticeOptions
from torchaa.base.errors import CriticalPointError, NoReturnsFoundError, RankChangeError
from torchaa.catalog import catalog_get
from torchaa.flow import joint_flow
from torchaa.lattice import (
    PeriodLattice,
    complement_clearance,
    continue_lattice,
    find_period_lattice,
    refine_period,
)


@pytest.fixture(scope="module")
def sho2_lattice():
    entry = catalog_get("sho2")
    return entry, find_period_lattice(entry.system, entry.seed, LatticeOptions(s_max=10, full_grid=False))


def test_free_particle_has_no_periods(fast_lattice):
    entry = catalog_get("free")
    lattice = find_period_lattice(entry.system, entry.seed, fast_lattice)
    assert lattice.rank == 0
    np.testing.assert_array_equal(lattice.complement, np.eye(1))
    assert lattice.coverage["axes"] == [10.0]


def test_oscillator_period(fast_lattice):
    entry = catalog_get("sho(2)")
    lattice = find_period_lattice(entry.system, [1.0, 0.0], fast_lattice)
    assert lattice.rank == 1
    assert lattice.basis[0, 0] == pytest.approx(np.pi, abs=1e-8)
    assert lattice.residuals[0] < 1e-8


def test_two_oscillators(sho2_lattice):
    _, lattice = sho2_lattice
    assert lattice.rank == 2
    np.testing.assert_allclose(lattice.basis, np.diag([2 * np.pi, 2 * np.pi / np.sqrt(2)]), atol=1e-6)
    assert lattice.complement.shape == (2, 0)


def test_pendulum_libration(fast_lattice):
    entry = catalog_get("pendulum")
    lattice = find_period_lattice(entry.system, entry.seed, fast_lattice, expected_rank=1)
    expected = entry.periods(entry.system.values(entry.seed))
    assert lattice.basis[0, 0] == pytest.approx(expected[0, 0], abs=1e-6)


def test_cylinder_mixed_fiber(fast_lattice):
    entry = catalog_get("cylinder")
    lattice = find_period_lattice(entry.system, entry.seed, fast_lattice)
    assert lattice.rank == 1
    np.testing.assert_allclose(lattice.basis[:, 0], [0.0, 2 * np.pi], atol=1e-6)
    np.testing.assert_array_equal(lattice.complement[:, 0], [1.0, 0.0])


def test_expected_rank_not_reached(fast_lattice):
    entry = catalog_get("free")
    with pytest.raises(NoReturnsFoundError) as info:
        find_period_lattice(entry.system, entry.seed, fast_lattice, expected_rank=1)
    assert info.value.coverage["s_max"] == 10.0


def test_critical_base_point(fast_lattice):
    entry = catalog_get("sho")
    with pytest.raises(CriticalPointError):
        find_period_lattice(entry.system, [0.0, 0.0], fast_lattice)


def test_explicit_complement(fast_lattice):
    entry = catalog_get("cylinder")
    lattice = find_period_lattice(entry.system, entry.seed, fast_lattice, complement=[[1.0], [0.5]])
    np.testing.assert_array_equal(lattice.complement[:, 0], [1.0, 0.5])


@pytest.mark.parametrize("seed", range(100))
def test_integer_combinations_return(sho2_lattice, seed):
    entry, lattice = sho2_lattice
    k = np.random.default_rng(seed).integers(-3, 4, lattice.rank)
    z = joint_flow(entry.system, lattice.base_point, lattice.basis @ k)
    np.testing.assert_allclose(z, lattice.base_point, atol=1e-7)


def test_complement_has_no_hidden_periods(fast_lattice):
    entry = catalog_get("cylinder")
    lattice = find_period_lattice(entry.system, entry.seed, fast_lattice)
    clearance = complement_clearance(entry.system, lattice, options=fast_lattice)
    assert clearance.shape == (1,)
    assert clearance[0] > 0.01


def test_compact_fiber_has_no_complement(sho2_lattice):
    entry, lattice = sho2_lattice
    assert complement_clearance(entry.system, lattice).size == 0


# %% continuation
def _oscillator_section(J):
    return np.array([np.sqrt(2 * J[0]), 0.0])


def _pendulum_section(J):
    return np.array([0.0, np.sqrt(2 * (J[0] + 1))])


def test_oscillator_is_isochronous(fast_lattice):
    system = catalog_get("sho").system
    lattice = find_period_lattice(system, _oscillator_section([1.0]), fast_lattice)
    path = np.linspace(1.0, 2.0, 6)[:, None]
    continued = continue_lattice(system, lattice, path, _oscillator_section, fast_lattice)
    assert continued.basis[0, 0] == pytest.approx(2 * np.pi, abs=1e-8)
    np.testing.assert_allclose(continued.level, [2.0])


def test_pendulum_period_grows_with_energy(fast_lattice):
    entry = catalog_get("pendulum")
    lattice = find_period_lattice(entry.system, _pendulum_section([0.3]), fast_lattice)
    periods = [lattice.basis[0, 0]]
    for J in np.arange(0.35, 0.91, 0.05):
        lattice = continue_lattice(entry.system, lattice, [[J]], _pendulum_section, fast_lattice)
        periods.append(lattice.basis[0, 0])
        assert periods[-1] == pytest.approx(entry.periods([J])[0, 0], abs=1e-6)
    assert np.all(np.diff(periods) > 0)


def test_zero_length_path(fast_lattice):
    system = catalog_get("sho").system
    lattice = find_period_lattice(system, _oscillator_section([1.0]), fast_lattice)
    continued = continue_lattice(system, lattice, [lattice.level], _oscillator_section, fast_lattice)
    np.testing.assert_array_equal(continued.basis, lattice.basis)
    np.testing.assert_array_equal(continued.base_point, lattice.base_point)


def test_separatrix_crossing_loses_rank():
    # the period at J = 0.9 is about 11.6
    options = LatticeOptions(s_max=15.0, grid_step=0.1, full_grid=False)
    entry = catalog_get("pendulum")
    lattice = find_period_lattice(entry.system, _pendulum_section([0.9]), options)
    assert lattice.rank == 1
    with pytest.raises(RankChangeError) as info:
        continue_lattice(entry.system, lattice, [[1.5]], _pendulum_section, options)
    assert info.value.rank == 1


# %% refinement
def test_refine_period():
    system = catalog_get("sho").system
    s, residual, converged = refine_period(system, [1.0, 0.0], [6.2])
    assert converged
    assert residual <= 1e-9
    assert s[0] == pytest.approx(2 * np.pi, abs=1e-9)


def test_refine_period_fixed_steps():
    system = catalog_get("sho").system
    s, residual, _ = refine_period(system, [1.0, 0.0], [6.2], steps=3)
    assert s[0] == pytest.approx(2 * np.pi, abs=1e-8)
    assert residual < 1e-8


# %% lattice object
def test_decompose_compose():
    lattice = PeriodLattice([[0.0], [2 * np.pi]], [[1.0], [0.5]], [0.0, 1.0, 1.0, 0.0], [1.0, 0.5], [0.0])
    x, phi = lattice.decompose([2.0, 3 * np.pi])
    np.testing.assert_allclose(x, [2.0])
    np.testing.assert_allclose(phi, [2 * np.pi * (3 * np.pi - 1.0) / (2 * np.pi)])
    np.testing.assert_allclose(lattice.compose(x, phi), [2.0, 3 * np.pi])
    np.testing.assert_allclose(lattice.dual_basis() @ lattice.frame, np.eye(2), atol=1e-14)
    assert lattice.contains([0.0, -4 * np.pi])
    assert not lattice.contains([0.0, np.pi])


def test_frame_must_span():
    with pytest.raises(ValueError):
        PeriodLattice([[0.0], [1.0]], [[0.0], [2.0]], [0, 0, 0, 0], [1.0, 1.0], [0.0])
    with pytest.raises(ValueError):
        PeriodLattice([[0.0], [1.0]], np.zeros((2, 0)), [0, 0, 0, 0], [1.0, 1.0], [0.0])


def test_lattice_dict_round_trip(sho2_lattice):
    _, lattice = sho2_lattice
    restored = PeriodLattice.from_dict(lattice.to_dict())
    np.testing.assert_array_equal(restored.basis, lattice.basis)
    np.testing.assert_array_equal(restored.complement, lattice.complement)
    np.testing.assert_array_equal(restored.level, lattice.level)
    assert restored.coverage == lattice.coverage
