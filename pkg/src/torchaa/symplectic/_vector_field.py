"""Hamiltonian vector fields and Poisson brackets."""

__all__ = [
    "hamiltonian_vector_field",
    "vector_fields",
    "batch_vector_field",
    "poisson_bracket",
    "poisson_matrix",
]

import numpy as np
import numpy.typing as npt
import torch

from ..expr import Expression, eval_with_gradient
from ._phase_space import IntegrableSystem


def hamiltonian_vector_field(
    system: IntegrableSystem, index: int | npt.ArrayLike, z: npt.ArrayLike
) -> npt.NDArray[float]:
    """
    Hamiltonian vector field of a first integral.

    The field solves ``theta _| Omega0 = -dF``, which with the coordinate
    ordering ``(q, p)`` reads ``theta = (dF/dp, -dF/dq)``.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    index : int | ArrayLike
        Integral index ``lambda`` (0-based) or a weight vector ``w`` of
        length ``n``; a weight vector gives the field ``sum_l w_l theta_l``.
    z : ArrayLike
        Phase space point.

    Returns
    -------
    np.ndarray
        Vector field at ``z``.

    Examples
    --------
    >>> import torchaa
    >>> system = torchaa.symplectic.IntegrableSystem.from_sources(["p1^2/2 - cos(q1)"])
    >>> torchaa.symplectic.hamiltonian_vector_field(system, 0, [0.0, 2.0])
    array([ 2., -0.])

    """
    weights = _weights(system, index)
    _, fields = vector_fields(system, z, np.flatnonzero(weights))
    return weights[weights != 0] @ fields


def vector_fields(
    system: IntegrableSystem, z: npt.ArrayLike, indexes: npt.ArrayLike | None = None
) -> tuple[npt.NDArray[float], npt.NDArray[float]]:
    """
    Evaluate the integrals and all Hamiltonian vector fields at ``z``.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    z : ArrayLike
        Phase space point.
    indexes : ArrayLike, optional
        Restrict to these integrals. The default is all of them.

    Returns
    -------
    values : np.ndarray
        Values of the selected integrals.
    fields : np.ndarray
        Fields as rows, shape ``(len(indexes), 2n)``.

    """
    n = system.n
    if indexes is None:
        indexes = range(n)
    values, fields = [], []
    for k in indexes:
        value, grad = eval_with_gradient(system.integrals[k], z)
        values.append(value)
        fields.append(np.concatenate([grad[n:], -grad[:n]]))
    if not fields:
        return np.zeros(0), np.zeros((0, 2 * n))
    return np.asarray(values), np.stack(fields)


def batch_vector_field(
    system: IntegrableSystem, points: npt.ArrayLike, index: int | npt.ArrayLike | None = None
) -> torch.Tensor:
    """
    Vectorized Hamiltonian vector fields.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    points : ArrayLike
        Points of shape ``(..., 2n)``.
    index : int | ArrayLike, optional
        Integral index or weight vector. If omitted, all fields are returned.

    Returns
    -------
    torch.Tensor
        Shape ``(..., 2n)`` for a single field, else ``(..., n, 2n)``.

    """
    n = system.n
    _, jac = system.batch_jacobian(points)
    fields = torch.cat([jac[..., n:], -jac[..., :n]], dim=-1)
    if index is None:
        return fields
    weights = torch.as_tensor(_weights(system, index), dtype=fields.dtype)
    return torch.einsum("l,...li->...i", weights, fields)


def poisson_bracket(f: Expression, g: Expression, z: npt.ArrayLike) -> float:
    """
    Poisson bracket ``{f, g} = sum_a (df/dq_a dg/dp_a - df/dp_a dg/dq_a)``.

    Examples
    --------
    >>> from torchaa.expr import parse
    >>> poisson_bracket(parse("(q1^2 + p1^2)/2", 1), parse("q1", 1), [0.0, 2.0])
    -2.0

    """
    if f.dimension != g.dimension:
        raise ValueError("brackets need expressions on the same phase space")
    n = f.dimension
    _, df = eval_with_gradient(f, z)
    _, dg = eval_with_gradient(g, z)
    return float(df[:n] @ dg[n:] - df[n:] @ dg[:n])


def poisson_matrix(jacobian: npt.ArrayLike) -> npt.NDArray[float]:
    """
    Pairwise brackets ``{F_l, F_m}`` from the Jacobians of the integrals.

    Parameters
    ----------
    jacobian : ArrayLike
        Jacobian(s) of shape ``(..., k, 2n)``.

    Returns
    -------
    np.ndarray
        Brackets of shape ``(..., k, k)``.

    """
    jacobian = np.asarray(jacobian)
    n = jacobian.shape[-1] // 2
    dq, dp = jacobian[..., :n], jacobian[..., n:]
    return dq @ np.swapaxes(dp, -1, -2) - dp @ np.swapaxes(dq, -1, -2)


# %% subroutines
def _weights(system: IntegrableSystem, index) -> npt.NDArray[float]:
    if np.ndim(index) == 0:
        k = int(index)
        if not 0 <= k < system.n:
            raise ValueError(f"integral index {k} out of range for n = {system.n}")
        weights = np.zeros(system.n)
        weights[k] = 1.0
        return weights
    weights = np.asarray(index, dtype=float)
    if weights.shape != (system.n,):
        raise ValueError(f"weight vector must have shape ({system.n},), got {weights.shape}")
    return weights
