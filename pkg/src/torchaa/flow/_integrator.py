"""Adaptive embedded Runge-Kutta integration with box escape detection."""

__all__ = ["Trajectory", "integrate"]

import logging

from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.typing as npt

from scipy.integrate import DOP853, RK45, OdeSolution
from scipy.optimize import brentq

from ..base.config import IntegratorOptions
from ..base.errors import IntegrationError, StepLimitError

logger = logging.getLogger(__name__)

_METHODS = {"RK45": RK45, "DOP853": DOP853}


@dataclass
class Trajectory:
    """
    Result of an integration.

    Attributes
    ----------
    t0 : float
        Initial time.
    t_end : float
        Final time (escape time if the trajectory escaped).
    y_end : np.ndarray
        Final state.
    nsteps : int
        Number of accepted steps.
    escape : tuple[float, np.ndarray] | None
        Escape time and point, if the box was left.
    dense : OdeSolution | None
        Continuous extension over ``[t0, t_end]`` (if requested).

    """

    t0: float
    t_end: float
    y_end: npt.NDArray[float]
    nsteps: int
    escape: tuple[float, npt.NDArray[float]] | None = None
    dense: OdeSolution | None = None

    @property
    def escaped(self) -> bool:
        return self.escape is not None

    def __call__(self, t: float | npt.ArrayLike) -> npt.NDArray[float]:
        """Evaluate the dense output; states are returned along the last axis."""
        if self.dense is None:
            raise ValueError("trajectory was integrated without dense output")
        return np.moveaxis(np.asarray(self.dense(t)), 0, -1)


def integrate(
    rhs: Callable,
    y0: npt.ArrayLike,
    t: float,
    opts: IntegratorOptions | None = None,
    dense: bool = False,
    bounds: tuple[npt.NDArray, npt.NDArray] | None = None,
    rtol: float | None = None,
    atol: float | None = None,
) -> Trajectory:
    """
    Integrate ``y' = rhs(y)`` from ``0`` to ``t``.

    The embedded pair (Dormand-Prince 5(4) by default) is stepped manually
    so that the step budget and the bounding box are checked after every
    accepted step. Box escape terminates the integration and is located on
    the continuous extension of the escaping step.

    Parameters
    ----------
    rhs : Callable
        Autonomous right-hand side ``y -> y'``.
    y0 : ArrayLike
        Initial state.
    t : float
        Final time (may be negative).
    opts : IntegratorOptions, optional
        Integrator options. The default is ``IntegratorOptions()``.
    dense : bool, optional
        Keep the continuous extension. The default is ``False``.
    bounds : tuple[np.ndarray, np.ndarray], optional
        ``(lower, upper)`` box checked on the leading ``len(lower)``
        state components. The default is no box.
    rtol, atol : float, optional
        Override the tolerances of ``opts``.

    Returns
    -------
    Trajectory
        Final state, step count, escape record and dense output.

    Raises
    ------
    StepLimitError
        If the step budget is exhausted.
    IntegrationError
        If the solver fails or the state becomes non-finite.

    """
    if opts is None:
        opts = IntegratorOptions()
    y0 = np.asarray(y0, dtype=float).copy()
    t = float(t)
    if not np.isfinite(t):
        raise ValueError(f"integration time must be finite, got {t}")
    rtol = opts.rtol if rtol is None else rtol
    atol = opts.atol if atol is None else atol

    def inside(y):
        if bounds is None:
            return np.inf
        lower, upper = bounds
        head = y[: lower.size]
        return min(np.min(head - lower), np.min(upper - head))

    if bounds is not None and inside(y0) < 0:
        return Trajectory(0.0, 0.0, y0, 0, escape=(0.0, y0))
    if t == 0.0:
        return Trajectory(0.0, 0.0, y0, 0)

    solver = _METHODS[opts.method](
        lambda _, y: rhs(y), 0.0, y0, t, rtol=rtol, atol=atol, vectorized=False
    )
    ts, interpolants = [0.0], []
    nsteps = 0
    escape = None
    while solver.status == "running":
        if nsteps >= opts.max_steps:
            raise StepLimitError(opts.max_steps, solver.t)
        message = solver.step()
        if solver.status == "failed":
            raise IntegrationError(f"integration failed at t = {solver.t:.6g}: {message}")
        nsteps += 1
        if not np.all(np.isfinite(solver.y)):
            raise IntegrationError(f"non-finite state at t = {solver.t:.6g}")

        step = solver.dense_output()
        if inside(solver.y) < 0:
            a, b = sorted((solver.t_old, solver.t))
            t_escape = brentq(lambda s: inside(step(s)), a, b, xtol=1e-12)
            escape = (t_escape, step(t_escape))
            ts.append(t_escape)
            interpolants.append(step)
            break
        ts.append(solver.t)
        interpolants.append(step)

    if escape is not None:
        t_end, y_end = escape[0], np.asarray(escape[1])
    else:
        t_end, y_end = solver.t, solver.y.copy()
    logger.debug("integrated to t = %.6g in %d steps", t_end, nsteps)

    return Trajectory(
        0.0,
        t_end,
        y_end,
        nsteps,
        escape=escape,
        dense=OdeSolution(ts, interpolants) if dense else None,
    )
