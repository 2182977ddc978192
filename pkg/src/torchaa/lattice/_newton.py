"""Newton refinement of joint-flow returns."""

__all__ = ["refine_period"]

import logging

import numpy as np
import numpy.typing as npt

from ..base.config import IntegratorOptions, LatticeOptions
from ..base.errors import IllConditionedError, IntegrationError
from ..flow import joint_flow
from ..symplectic import IntegrableSystem, vector_fields

logger = logging.getLogger(__name__)


def refine_period(
    system: IntegrableSystem,
    z0: npt.ArrayLike,
    s: npt.ArrayLike,
    options: LatticeOptions | None = None,
    opts: IntegratorOptions | None = None,
    steps: int | None = None,
) -> tuple[npt.NDArray[float], float, bool]:
    """
    Refine a near-return ``Phi_s(z0) ~ z0`` by Newton iteration.

    The residual ``r(s) = Phi_s(z0) - z0`` is solved in the least-squares
    sense; the Jacobian columns are the vector fields ``theta_l`` at the
    endpoint, since the flows commute.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    z0 : ArrayLike
        Base point.
    s : ArrayLike
        Initial flow parameters.
    options : LatticeOptions, optional
        Tolerance, iteration limit and conditioning threshold.
    opts : IntegratorOptions, optional
        Integrator options.
    steps : int, optional
        Take exactly this many Newton steps, without tolerance or
        stagnation stops. The result is then a smooth function of
        ``z0`` and the initial ``s``.

    Returns
    -------
    s : np.ndarray
        Refined flow parameters.
    residual : float
        Final ``|Phi_s(z0) - z0|``.
    converged : bool
        Whether ``residual <= options.tol``.

    Raises
    ------
    IllConditionedError
        If ``sigma_min / sigma_max`` of the Jacobian drops below ``options.cond_limit``.

    """
    options = options or LatticeOptions()
    z0 = np.asarray(z0, dtype=float)
    s = np.asarray(s, dtype=float).copy()
    if steps is not None:
        return _fixed_steps(system, z0, s, int(steps), options, opts)

    first = None
    residual = previous = np.inf
    for it in range(options.max_newton + 1):
        try:
            r = joint_flow(system, z0, s, opts) - z0
        except IntegrationError as err:
            logger.debug("Newton step %d left the integrable region: %s", it, err)
            return s, np.inf, False
        residual = float(np.linalg.norm(r))
        logger.debug("Newton iteration %d: s = %s, residual = %.3e", it, s, residual)
        if residual <= options.tol:
            return s, residual, True
        if first is None:
            first = residual
        elif residual > 10.0 * first or not np.isfinite(residual):
            break
        elif it >= 3 and residual > 0.5 * previous:
            # stagnation at the integration error level
            break
        previous = residual
        if it == options.max_newton:
            break

        s = s + _newton_step(system, z0 + r, r, options)

    return s, residual, False


# %% subroutines
def _newton_step(system, end, r, options):
    _, fields = vector_fields(system, end)
    jac = fields.T
    sigma = np.linalg.svd(jac, compute_uv=False)
    ratio = sigma[-1] / sigma[0] if sigma[0] > 0 else 0.0
    if ratio < options.cond_limit:
        raise IllConditionedError(ratio)
    ds, *_ = np.linalg.lstsq(jac, -r, rcond=None)
    return ds


def _fixed_steps(system, z0, s, steps, options, opts):
    for _ in range(steps):
        r = joint_flow(system, z0, s, opts) - z0
        s = s + _newton_step(system, z0 + r, r, options)
    residual = float(np.linalg.norm(joint_flow(system, z0, s, opts) - z0))
    return s, residual, residual <= options.tol
