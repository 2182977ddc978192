"""Flows of the first integrals and their joint R^n action."""

__all__ = [
    "FlowParameters",
    "flow",
    "trajectory",
    "joint_flow",
    "flow_with_action",
    "field_rhs",
]

from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.typing as npt

from ..base.config import IntegratorOptions
from ..base.errors import EscapeError
from ..symplectic import IntegrableSystem, vector_fields
from ._integrator import Trajectory, integrate


@dataclass(frozen=True)
class FlowParameters:
    """
    Joint flow parameters ``s``, one time per first integral.

    Parameters
    ----------
    s : ArrayLike
        Flow times.

    """

    s: npt.NDArray[float]

    def __post_init__(self):
        s = np.atleast_1d(np.asarray(self.s, dtype=float))
        if s.ndim != 1 or not np.all(np.isfinite(s)):
            raise ValueError("flow parameters must be a finite vector")
        object.__setattr__(self, "s", s)

    def __array__(self, dtype=None, copy=None):
        return self.s.astype(dtype) if dtype is not None else self.s


def field_rhs(
    system: IntegrableSystem, index: int | npt.ArrayLike, with_action: bool = False
) -> Callable:
    """
    Right-hand side ``z -> theta_w(z)`` of a (weighted) Hamiltonian flow.

    With ``with_action``, the state carries one extra channel accumulating
    the Liouville form ``dA/dt = sum_a p_a dq_a/dt``.
    """
    n = system.n
    if np.ndim(index) == 0:
        indexes = np.array([int(index)])
        weights = np.ones(1)
        if not 0 <= indexes[0] < n:
            raise ValueError(f"integral index {indexes[0]} out of range for n = {n}")
    else:
        weights = np.asarray(index, dtype=float)
        if weights.shape != (n,):
            raise ValueError(f"weight vector must have shape ({n},), got {weights.shape}")
        indexes = np.flatnonzero(weights)
        weights = weights[indexes]

    def rhs(y):
        z = y[: 2 * n]
        _, fields = vector_fields(system, z, indexes)
        dz = weights @ fields if fields.size else np.zeros(2 * n)
        if with_action:
            return np.append(dz, z[n:] @ dz[:n])
        return dz

    return rhs


def trajectory(
    system: IntegrableSystem,
    index: int | npt.ArrayLike,
    z0: npt.ArrayLike,
    t: float,
    opts: IntegratorOptions | None = None,
    with_action: bool = False,
    rtol: float | None = None,
    atol: float | None = None,
) -> Trajectory:
    """
    Integrate a Hamiltonian flow keeping the continuous extension.

    Escape from the bounding box terminates the trajectory without raising;
    inspect :attr:`Trajectory.escape`.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    index : int | ArrayLike
        Integral index or weight vector.
    z0 : ArrayLike
        Initial point.
    t : float
        Final time.
    opts : IntegratorOptions, optional
        Integrator options.
    with_action : bool, optional
        Append the Liouville action channel to the state.
    rtol, atol : float, optional
        Override the tolerances of ``opts``.

    Returns
    -------
    Trajectory
        Dense trajectory.

    """
    opts = opts or IntegratorOptions()
    z0 = _check_point(system, z0)
    y0 = np.append(z0, 0.0) if with_action else z0
    return integrate(
        field_rhs(system, index, with_action),
        y0,
        t,
        opts,
        dense=True,
        bounds=opts.bounds(system.dim),
        rtol=rtol,
        atol=atol,
    )


def flow(
    system: IntegrableSystem,
    index: int | npt.ArrayLike,
    z0: npt.ArrayLike,
    t: float,
    opts: IntegratorOptions | None = None,
) -> npt.NDArray[float]:
    """
    Flow ``z0`` along the Hamiltonian vector field of ``F_index`` for time ``t``.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    index : int | ArrayLike
        Integral index (0-based) or weight vector ``w`` (field ``sum w_l theta_l``).
    z0 : ArrayLike
        Initial point.
    t : float
        Flow time.
    opts : IntegratorOptions, optional
        Integrator options.

    Returns
    -------
    np.ndarray
        ``z(t)``.

    Raises
    ------
    EscapeError
        If the trajectory leaves the bounding box.
    StepLimitError
        If the step budget is exhausted.

    """
    z, _ = _flow(system, index, z0, t, opts, with_action=False)
    return z


def flow_with_action(
    system: IntegrableSystem,
    index: int | npt.ArrayLike,
    z0: npt.ArrayLike,
    t: float,
    opts: IntegratorOptions | None = None,
) -> tuple[npt.NDArray[float], float]:
    """
    Flow ``z0`` and accumulate ``A = int Xi(z') dt`` along the trajectory.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    index : int | ArrayLike
        Integral index or weight vector.
    z0 : ArrayLike
        Initial point.
    t : float
        Flow time.
    opts : IntegratorOptions, optional
        Integrator options.

    Returns
    -------
    z : np.ndarray
        ``z(t)``.
    action : float
        Line integral of ``sum p dq`` along the trajectory.

    """
    return _flow(system, index, z0, t, opts, with_action=True)


def joint_flow(
    system: IntegrableSystem,
    z0: npt.ArrayLike,
    s: FlowParameters | npt.ArrayLike,
    opts: IntegratorOptions | None = None,
) -> npt.NDArray[float]:
    """
    Joint flow ``Phi_s(z0)`` of the ``R^n`` action.

    The single flows are applied sequentially, ``s_1`` first. On involutive
    systems the result does not depend on the order, up to the
    integration tolerance.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    z0 : ArrayLike
        Initial point.
    s : FlowParameters | ArrayLike
        Flow times, one per integral.
    opts : IntegratorOptions, optional
        Integrator options.

    Returns
    -------
    np.ndarray
        ``Phi_s(z0)``; exactly ``z0`` for ``s = 0``.

    """
    s = np.asarray(FlowParameters(s) if not isinstance(s, FlowParameters) else s)
    if s.size != system.n:
        raise ValueError(f"flow parameters must have {system.n} entries, got {s.size}")
    z = _check_point(system, z0)
    for index, t in enumerate(s):
        if t != 0.0:
            z = flow(system, index, z, t, opts)
    return z


# %% subroutines
def _check_point(system: IntegrableSystem, z0) -> npt.NDArray[float]:
    z0 = np.asarray(z0, dtype=float).ravel().copy()
    if z0.size != system.dim:
        raise ValueError(f"phase space point must have {system.dim} entries, got {z0.size}")
    return z0


def _flow(system, index, z0, t, opts, with_action):
    opts = opts or IntegratorOptions()
    z0 = _check_point(system, z0)
    y0 = np.append(z0, 0.0) if with_action else z0
    result = integrate(
        field_rhs(system, index, with_action), y0, t, opts, bounds=opts.bounds(system.dim)
    )
    if result.escaped:
        t_escape, point = result.escape
        raise EscapeError(t_escape, point[: system.dim])
    y = result.y_end
    if with_action:
        return y[: system.dim], float(y[-1])
    return y, None
