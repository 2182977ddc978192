"""Hamiltonian flow tests."""

import numpy as np
import pytest

from torchaa.base.config import IntegratorOptions
from torchaa.base.errors import EscapeError, StepLimitError
from torchaa.catalog import catalog_get
from torchaa.flow import FlowParameters, flow, flow_with_action, joint_flow, trajectory
from torchaa.symplectic import IntegrableSystem

FREE = IntegrableSystem.from_sources(["p1"])
SHO = IntegrableSystem.from_sources(["(q1^2 + p1^2)/2"])
PENDULUM = IntegrableSystem.from_sources(["p1^2/2 - cos(q1)"])
MOMENTA = IntegrableSystem.from_sources(["p1", "p2"])
CYLINDER = IntegrableSystem.from_sources(["p1", "(p2^2 + q2^2)/2"])


def test_translation():
    np.testing.assert_allclose(flow(FREE, 0, [0.0, 1.0], 2.5), [2.5, 1.0], atol=1e-12)


def test_rotation_period():
    np.testing.assert_allclose(flow(SHO, 0, [1.0, 0.0], 2 * np.pi), [1.0, 0.0], atol=1e-9)


def test_rotation_quarter_period():
    # q' = p, p' = -q
    np.testing.assert_allclose(flow(SHO, 0, [1.0, 0.0], np.pi / 2), [0.0, -1.0], atol=1e-9)


@pytest.mark.parametrize("method", ["RK45", "DOP853"])
def test_steppers_agree(method):
    opts = IntegratorOptions(method=method)
    np.testing.assert_allclose(flow(SHO, 0, [1.0, 0.0], np.pi / 2, opts), [0.0, -1.0], atol=1e-9)


def test_pendulum_energy_is_conserved():
    z0 = np.array([0.0, 2.0])
    z = flow(PENDULUM, 0, z0, 0.3)
    assert z[0] > 0.0
    assert PENDULUM.values(z)[0] == pytest.approx(PENDULUM.values(z0)[0], abs=1e-9)


def test_zero_time_is_identity():
    z0 = np.array([0.3, -0.7])
    np.testing.assert_array_equal(flow(SHO, 0, z0, 0.0), z0)


def test_weight_vector_flow():
    z = flow(CYLINDER, [2.0, 0.0], [0.0, 1.0, 1.0, 0.0], 1.5)
    np.testing.assert_allclose(z, [3.0, 1.0, 1.0, 0.0], atol=1e-12)


def test_joint_flow_identity():
    z0 = np.array([0.1, 0.2, 0.3, 0.4])
    np.testing.assert_array_equal(joint_flow(CYLINDER, z0, [0.0, 0.0]), z0)


def test_joint_flow_of_momenta():
    z = joint_flow(MOMENTA, np.zeros(4), FlowParameters([1.5, -2.0]))
    np.testing.assert_allclose(z, [1.5, -2.0, 0.0, 0.0], atol=1e-12)


def test_joint_flow_order_independence():
    z0 = np.array([0.0, 1.0, 1.0, 0.0])
    a = flow(CYLINDER, 1, flow(CYLINDER, 0, z0, 0.7), 1.3)
    b = flow(CYLINDER, 0, flow(CYLINDER, 1, z0, 1.3), 0.7)
    np.testing.assert_allclose(a, b, atol=1e-8)


def test_joint_flow_parameter_count():
    with pytest.raises(ValueError):
        joint_flow(CYLINDER, np.zeros(4), [1.0])


def test_flow_parameters_must_be_finite():
    with pytest.raises(ValueError):
        FlowParameters([1.0, np.inf])


def test_action_of_translation():
    z, action = flow_with_action(FREE, 0, [0.0, 1.0], 3.0)
    np.testing.assert_allclose(z, [3.0, 1.0], atol=1e-12)
    assert action == pytest.approx(3.0, abs=1e-10)


def test_action_of_rotation():
    _, action = flow_with_action(SHO, 0, [1.0, 0.0], 2 * np.pi)
    assert action == pytest.approx(np.pi, abs=1e-9)


def test_action_at_zero_time():
    _, action = flow_with_action(PENDULUM, 0, [0.3, 0.4], 0.0)
    assert action == 0.0


def test_escape_raises():
    opts = IntegratorOptions(box=1.0)
    with pytest.raises(EscapeError) as info:
        flow(FREE, 0, [0.0, 0.0], 10.0, opts)
    assert info.value.t_escape == pytest.approx(1.0, abs=1e-8)


def test_step_limit():
    opts = IntegratorOptions(max_steps=2)
    with pytest.raises(StepLimitError):
        flow(SHO, 0, [1.0, 0.0], 100.0, opts)


def test_trajectory_dense_output():
    path = trajectory(SHO, 0, [1.0, 0.0], 2 * np.pi)
    t = np.linspace(0.0, 2 * np.pi, 9)
    np.testing.assert_allclose(path(t), np.stack([np.cos(t), -np.sin(t)], axis=-1), atol=1e-8)
    assert not path.escaped


def test_trajectory_reports_escape():
    path = trajectory(FREE, 0, [0.0, 0.0], 10.0, IntegratorOptions(box=2.0))
    assert path.escaped
    assert path.t_end == pytest.approx(2.0, abs=1e-8)


@pytest.mark.parametrize(
    "changes",
    [{"rtol": 0.0}, {"atol": -1.0}, {"max_steps": 0}, {"method": "Euler"}, {"box": -1.0}, {"box": ([1.0], [0.0])}],
)
def test_invalid_integrator_options(changes):
    with pytest.raises(ValueError):
        IntegratorOptions(**changes)


def test_box_bounds():
    lower, upper = IntegratorOptions(box=([-1.0, -2.0], [1.0, 2.0])).bounds(2)
    np.testing.assert_array_equal(lower, [-1.0, -2.0])
    np.testing.assert_array_equal(upper, [1.0, 2.0])


# %% invariants
SYSTEMS = [catalog_get(name) for name in ("sho(2)", "pendulum", "cylinder", "extended-time", "sho2")]


@pytest.mark.parametrize("seed", range(100))
def test_level_set_invariance(seed):
    rng = np.random.default_rng(seed)
    entry = SYSTEMS[seed % len(SYSTEMS)]
    system = entry.system
    z0 = entry.seed + rng.uniform(-0.1, 0.1, system.dim)
    index = int(rng.integers(system.n))
    z = flow(system, index, z0, rng.uniform(-2.0, 2.0))
    np.testing.assert_allclose(system.values(z), system.values(z0), atol=1e-8)


@pytest.mark.parametrize("seed", range(100))
def test_reversibility(seed):
    rng = np.random.default_rng(seed)
    entry = SYSTEMS[seed % len(SYSTEMS)]
    system = entry.system
    z0 = entry.seed + rng.uniform(-0.1, 0.1, system.dim)
    index = int(rng.integers(system.n))
    t = rng.uniform(0.1, 2.0)
    back = flow(system, index, flow(system, index, z0, t), -t)
    np.testing.assert_allclose(back, z0, atol=1e-8)


@pytest.mark.parametrize("seed", range(100))
def test_group_action(seed):
    rng = np.random.default_rng(seed)
    entry = SYSTEMS[seed % len(SYSTEMS)]
    system = entry.system
    z0 = entry.seed + rng.uniform(-0.1, 0.1, system.dim)
    s, s2 = rng.uniform(-1.0, 1.0, (2, system.n))
    composed = joint_flow(system, joint_flow(system, z0, s2), s)
    np.testing.assert_allclose(composed, joint_flow(system, z0, s + s2), atol=1e-8)
