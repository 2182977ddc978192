"""Falsification probe for completeness of the flows."""

__all__ = ["CompletenessResult", "completeness_probe"]

import logging

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..base.config import IntegratorOptions
from ..symplectic import IntegrableSystem
from ._flow import field_rhs
from ._integrator import integrate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompletenessResult:
    """
    Outcome of :func:`completeness_probe`.

    A trajectory that stays in the box up to ``T_max`` is evidence, not
    proof, of completeness: the probe can only falsify.

    Attributes
    ----------
    escaped : bool
        Whether some flow left the bounding box.
    index : int | None
        Integral whose flow escaped first (0-based).
    t_escape : float | None
        Signed escape time.
    point : np.ndarray | None
        Escape point.
    t_max : float
        Probed time horizon.

    """

    escaped: bool
    index: int | None = None
    t_escape: float | None = None
    point: npt.NDArray[float] | None = None
    t_max: float = 0.0

    def to_dict(self) -> dict:
        return {
            "escaped": self.escaped,
            "index": self.index,
            "t_escape": self.t_escape,
            "point": None if self.point is None else self.point.tolist(),
            "t_max": self.t_max,
        }


def completeness_probe(
    system: IntegrableSystem,
    z0: npt.ArrayLike,
    t_max: float,
    opts: IntegratorOptions | None = None,
) -> CompletenessResult:
    """
    Integrate every flow forward and backward to ``+-t_max`` inside the box.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    z0 : ArrayLike
        Initial point.
    t_max : float
        Time horizon.
    opts : IntegratorOptions, optional
        Integrator options; ``opts.box`` is the probed region.

    Returns
    -------
    CompletenessResult
        First escape (smallest ``|t|``), if any.

    """
    if not t_max > 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    opts = opts or IntegratorOptions()
    z0 = np.asarray(z0, dtype=float)

    first = None
    for index in range(system.n):
        for sign in (1.0, -1.0):
            result = integrate(
                field_rhs(system, index), z0, sign * t_max, opts, bounds=opts.bounds(system.dim)
            )
            if result.escaped:
                t_escape, point = result.escape
                if first is None or abs(t_escape) < abs(first.t_escape):
                    first = CompletenessResult(True, index, float(t_escape), point, t_max)

    if first is None:
        logger.info("completeness probe: no escape up to |t| = %.4g", t_max)
        return CompletenessResult(False, t_max=t_max)
    logger.info(
        "completeness probe: flow %d escaped at t = %.6g", first.index + 1, first.t_escape
    )
    return first
