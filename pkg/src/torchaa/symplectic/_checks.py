"""Hypothesis checks: regularity and involution."""

__all__ = [
    "RegularityResult",
    "InvolutionReport",
    "check_regular",
    "require_regular",
    "check_involution",
    "sample_points",
]

import logging

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..base.errors import CriticalPointError
from ._phase_space import IntegrableSystem
from ._vector_field import poisson_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RegularityResult:
    """
    Outcome of :func:`check_regular`.

    Attributes
    ----------
    regular : bool
        ``True`` if ``dF`` has full rank ``n`` at the point.
    rank : int
        Numerical rank of ``dF``.
    singular_values : np.ndarray
        Singular values of ``dF``, in decreasing order.

    """

    regular: bool
    rank: int
    singular_values: npt.NDArray[float]

    def __bool__(self) -> bool:
        return self.regular


@dataclass(frozen=True)
class InvolutionReport:
    """
    Outcome of :func:`check_involution`.

    Attributes
    ----------
    passed : bool
        ``True`` if every bracket is below the tolerance.
    max_bracket : float
        Largest ``|{F_l, F_m}|`` over samples and pairs.
    pair : tuple[int, int]
        Pair attaining the maximum.
    point : np.ndarray
        Sample attaining the maximum.
    tol : float
        Tolerance used.
    n_samples : int
        Number of samples.

    """

    passed: bool
    max_bracket: float
    pair: tuple[int, int]
    point: npt.NDArray[float]
    tol: float
    n_samples: int

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_bracket": self.max_bracket,
            "pair": list(self.pair),
            "point": self.point.tolist(),
            "tol": self.tol,
            "n_samples": self.n_samples,
        }


def check_regular(system: IntegrableSystem, z: npt.ArrayLike, tol: float = 1e-8) -> RegularityResult:
    """
    Check that ``z`` is a regular point of the integral map ``F``.

    ``z`` is regular iff the smallest singular value of the ``n x 2n``
    Jacobian exceeds ``tol`` times the largest one.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    z : ArrayLike
        Phase space point.
    tol : float, optional
        Relative singular value threshold. The default is ``1e-8``.

    Returns
    -------
    RegularityResult
        Regularity flag, numerical rank and singular values.

    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    _, jac = system.jacobian(z)
    sigma = np.linalg.svd(jac, compute_uv=False)
    if sigma[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(sigma > tol * sigma[0]))
    return RegularityResult(rank == system.n, rank, sigma)


def require_regular(system: IntegrableSystem, z: npt.ArrayLike, tol: float = 1e-8):
    """Raise :class:`CriticalPointError` if ``z`` is not regular."""
    result = check_regular(system, z, tol)
    if not result.regular:
        raise CriticalPointError(np.asarray(z, dtype=float), result.rank)
    return result


def check_involution(
    system: IntegrableSystem, points: npt.ArrayLike, tol: float = 1e-10
) -> InvolutionReport:
    """
    Check that the first integrals Poisson-commute on sample points.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    points : ArrayLike
        Sample points of shape ``(nsamples, 2n)``.
    tol : float, optional
        Admissible bracket magnitude. The default is ``1e-10``.

    Returns
    -------
    InvolutionReport
        Largest bracket and pass flag.

    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] < 1:
        raise ValueError("at least one sample point is required")
    _, jac = system.batch_jacobian(points)
    brackets = np.abs(poisson_matrix(jac.numpy()))

    flat = int(np.argmax(brackets))
    sample, l, m = np.unravel_index(flat, brackets.shape)
    max_bracket = float(brackets.reshape(-1)[flat])
    if l > m:
        l, m = m, l
    report = InvolutionReport(
        max_bracket <= tol, max_bracket, (int(l), int(m)), points[sample], tol, points.shape[0]
    )
    logger.info(
        "involution check on %d samples: max bracket %.3g (%s)",
        points.shape[0],
        max_bracket,
        "pass" if report.passed else "fail",
    )
    return report


def sample_points(
    center: npt.ArrayLike,
    radius: float,
    count: int,
    rng: np.random.Generator | int | None = None,
) -> npt.NDArray[float]:
    """
    Uniform samples in the cube of half-width ``radius`` around ``center``.

    Parameters
    ----------
    center : ArrayLike
        Cube center.
    radius : float
        Cube half-width.
    count : int
        Number of samples.
    rng : np.random.Generator | int, optional
        Random generator or seed. The default is ``None``.

    Returns
    -------
    np.ndarray
        Samples of shape ``(count, len(center))``.

    """
    rng = np.random.default_rng(rng)
    center = np.asarray(center, dtype=float)
    return center + rng.uniform(-radius, radius, size=(count, center.size))
