"""Vector field, Poisson bracket and Liouville form tests."""

import numpy as np
import pytest

from torchaa.expr import eval_with_gradient, parse
from torchaa.symplectic import (
    IntegrableSystem,
    PhaseSpace,
    batch_vector_field,
    exterior_derivative,
    hamiltonian_vector_field,
    liouville_form,
    liouville_integral,
    poisson_bracket,
    vector_fields,
)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_symplectic_matrix(n):
    omega = PhaseSpace(n).omega
    np.testing.assert_array_equal(omega, -omega.T)
    np.testing.assert_array_equal(omega @ omega, -np.eye(2 * n))


def test_symplectic_matrix_golden():
    np.testing.assert_array_equal(PhaseSpace(1).omega, [[0.0, -1.0], [1.0, 0.0]])


def test_coordinate_names():
    assert PhaseSpace(2).coordinate_names == ["q1", "q2", "p1", "p2"]


def test_translation_field():
    system = IntegrableSystem.from_sources(["p1"])
    np.testing.assert_allclose(hamiltonian_vector_field(system, 0, [3.0, -1.0]), [1.0, 0.0])


def test_rotation_field():
    system = IntegrableSystem.from_sources(["(q1^2 + p1^2)/2"])
    np.testing.assert_allclose(hamiltonian_vector_field(system, 0, [1.0, 0.0]), [0.0, -1.0])


def test_pendulum_field():
    system = IntegrableSystem.from_sources(["p1^2/2 - cos(q1)"])
    np.testing.assert_allclose(hamiltonian_vector_field(system, 0, [0.0, 2.0]), [2.0, 0.0])


def test_weighted_field():
    system = IntegrableSystem.from_sources(["p1", "(p2^2 + q2^2)/2"])
    z = [0.0, 1.0, 0.0, 0.0]
    field = hamiltonian_vector_field(system, [2.0, 3.0], z)
    np.testing.assert_allclose(field, [2.0, 0.0, 0.0, -3.0])


@pytest.mark.parametrize("seed", range(20))
def test_contraction_identity(seed, integrable_entry):
    # theta _| Omega0 = -dF, componentwise
    system = integrable_entry.system
    rng = np.random.default_rng(seed)
    z = integrable_entry.seed + rng.uniform(-0.2, 0.2, system.dim)
    omega = system.phase_space.omega
    for index, F in enumerate(system.integrals):
        theta = hamiltonian_vector_field(system, index, z)
        _, dF = eval_with_gradient(F, z)
        np.testing.assert_allclose(theta @ omega + dF, 0.0, atol=1e-14)


def test_batch_vector_field(rng):
    system = IntegrableSystem.from_sources(["p1^2/2 - cos(q1)", "p2^2/2 + q2^4"])
    points = rng.uniform(-1, 1, (5, 4))
    batch = batch_vector_field(system, points).numpy()
    assert batch.shape == (5, 2, 4)
    for k, z in enumerate(points):
        _, fields = vector_fields(system, z)
        np.testing.assert_allclose(batch[k], fields, rtol=1e-12, atol=1e-14)
    single = batch_vector_field(system, points, 1).numpy()
    np.testing.assert_allclose(single, batch[:, 1], rtol=1e-12, atol=1e-14)


def test_canonical_pair_bracket(rng):
    f, g = parse("q1", 1), parse("p1", 1)
    for z in rng.normal(size=(5, 2)):
        assert poisson_bracket(f, g, z) == 1.0


def test_disjoint_variables_bracket(rng):
    f, g = parse("p1", 2), parse("(q2^2 + p2^2)/2", 2)
    for z in rng.normal(size=(5, 4)):
        assert poisson_bracket(f, g, z) == 0.0


def test_oscillator_bracket():
    f, g = parse("(q1^2 + p1^2)/2", 1), parse("q1", 1)
    assert poisson_bracket(f, g, [0.0, 2.0]) == -2.0


def test_bracket_dimension_mismatch():
    with pytest.raises(ValueError):
        poisson_bracket(parse("q1", 1), parse("q1", 2), [0.0, 0.0])


@pytest.mark.parametrize("seed", range(100))
def test_level_sets_are_invariant(seed, integrable_entry):
    # dF_mu(theta_lambda) = {F_mu, F_lambda}, zero on involutive systems
    system = integrable_entry.system
    rng = np.random.default_rng(seed)
    z = integrable_entry.seed + rng.uniform(-0.3, 0.3, system.dim)
    for lam in range(system.n):
        theta = hamiltonian_vector_field(system, lam, z)
        for mu, F in enumerate(system.integrals):
            _, dF = eval_with_gradient(F, z)
            bracket = poisson_bracket(F, system.integrals[lam], z)
            assert dF @ theta == pytest.approx(bracket, abs=1e-12)
            assert abs(bracket) <= 1e-10


def test_liouville_form():
    np.testing.assert_array_equal(liouville_form([0.0, 0.0]), [0.0, 0.0])
    np.testing.assert_array_equal(liouville_form([5.0, 2.0]), [2.0, 0.0])
    np.testing.assert_array_equal(liouville_form([1.0, 2.0, 3.0, 4.0]), [3.0, 4.0, 0.0, 0.0])


def test_liouville_integral_unit_circle():
    circle = lambda t: np.array([np.cos(t), -np.sin(t)])  # noqa
    velocity = lambda t: np.array([-np.sin(t), -np.cos(t)])  # noqa
    assert liouville_integral(circle, 0.0, 2 * np.pi) == pytest.approx(np.pi, abs=1e-8)
    assert liouville_integral(circle, 0.0, 2 * np.pi, velocity) == pytest.approx(np.pi, abs=1e-10)


def test_liouville_integral_polygon():
    # square traversed clockwise in the (q, p) plane encloses area 1
    points = [[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0], [0.0, 0.0]]
    assert liouville_integral(points) == pytest.approx(1.0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exterior_derivative_of_liouville_form(n, rng):
    z = rng.normal(size=2 * n)
    np.testing.assert_allclose(exterior_derivative(liouville_form, z), PhaseSpace(n).omega, atol=1e-6)
