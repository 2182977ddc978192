"""Coarse scans of the joint flow for near-returns."""

__all__ = ["axis_scan", "plane_scan", "near_return_threshold"]

import logging

from types import SimpleNamespace

import numpy as np
import numpy.typing as npt

from ..base.config import IntegratorOptions, LatticeOptions
from ..flow import Trajectory, integrate, trajectory
from ..symplectic import IntegrableSystem, batch_vector_field, vector_fields

logger = logging.getLogger(__name__)


def near_return_threshold(
    system: IntegrableSystem, z0: npt.ArrayLike, options: LatticeOptions
) -> float:
    """
    Coarse acceptance threshold of the scans.

    A grid point within ``grid_step`` of a period is at most
    ``grid_step * |Theta(z0)|_2`` away from ``z0``, with ``Theta`` the
    matrix of vector fields; the threshold is never below
    ``coarse_factor * tol``.
    """
    _, fields = vector_fields(system, z0)
    return max(options.coarse_factor * options.tol, options.grid_step * np.linalg.norm(fields, 2))


def axis_scan(
    system: IntegrableSystem,
    z0: npt.ArrayLike,
    axis: int,
    threshold: float,
    options: LatticeOptions,
    opts: IntegratorOptions,
) -> SimpleNamespace:
    """
    Scan ``Phi_{t e_axis}(z0)`` for near-returns, ``t in [0, s_max]``.

    Returns
    -------
    SimpleNamespace
        ``candidates`` (list of flow parameter vectors), ``trajectory``
        (dense output, reused by the plane scans) and ``covered`` (the
        scanned extent, shorter than ``s_max`` on escape).

    """
    z0 = np.asarray(z0, dtype=float)
    n, h = system.n, options.grid_step
    traj = trajectory(
        system, axis, z0, options.s_max, opts, rtol=options.scan_rtol, atol=options.scan_atol
    )
    covered = traj.t_end
    t = h * np.arange(int(np.floor(covered / h + 1e-9)) + 1)
    distance = np.linalg.norm(traj(t) - z0, axis=-1)

    candidates = []
    for k in _local_minima_1d(distance, threshold):
        s = np.zeros(n)
        s[axis] = t[k]
        candidates.append(s)
    logger.debug(
        "axis scan %d: %d candidates over [0, %.4g] (threshold %.3g)",
        axis + 1,
        len(candidates),
        covered,
        threshold,
    )

    return SimpleNamespace(candidates=candidates, trajectory=traj, covered=covered)


def plane_scan(
    system: IntegrableSystem,
    z0: npt.ArrayLike,
    axes: tuple[int, int],
    start: Trajectory,
    threshold: float,
    options: LatticeOptions,
    opts: IntegratorOptions,
) -> SimpleNamespace:
    """
    Scan the coordinate plane ``s_l >= 0, |s_m| <= s_max`` for near-returns.

    The points ``Phi_{s_l e_l}(z0)`` sampled on the grid are flowed along
    ``theta_m`` as one stacked batch, forward and backward. Points that
    leave the bounding box are frozen and excluded from the scan.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    z0 : ArrayLike
        Base point.
    axes : tuple[int, int]
        Scanned axes ``(l, m)``.
    start : Trajectory
        Dense trajectory of the axis scan along ``l``.
    threshold : float
        Near-return threshold.
    options : LatticeOptions
        Scan options.
    opts : IntegratorOptions
        Integrator options (for the bounding box).

    Returns
    -------
    SimpleNamespace
        ``candidates`` and scanned ``extent``.

    """
    z0 = np.asarray(z0, dtype=float)
    n, h = system.n, options.grid_step
    lam, mu = axes
    lower, upper = opts.bounds(system.dim)

    s_lam = h * np.arange(int(np.floor(start.t_end / h + 1e-9)) + 1)
    starts = np.atleast_2d(start(s_lam))
    npts = starts.shape[0]

    def rhs(y):
        points = y.reshape(npts, system.dim)
        inside = np.all((points >= lower) & (points <= upper), axis=-1)
        velocity = batch_vector_field(system, points, mu).numpy()
        return (velocity * inside[:, None]).reshape(-1)

    t = h * np.arange(int(np.floor(options.s_max / h + 1e-9)) + 1)
    grids = []
    for sign in (-1.0, 1.0):
        result = integrate(
            rhs,
            starts.reshape(-1),
            sign * options.s_max,
            opts,
            dense=True,
            rtol=options.scan_rtol,
            atol=options.scan_atol,
        )
        points = result(sign * t).reshape(t.size, npts, system.dim)
        inside = np.all((points >= lower) & (points <= upper), axis=-1)
        distance = np.where(inside, np.linalg.norm(points - z0, axis=-1), np.inf)
        grids.append(distance.T)

    # rows: s_lam, columns: s_mu from -s_max to s_max
    distance = np.concatenate([grids[0][:, :0:-1], grids[1]], axis=1)
    s_mu = np.concatenate([-t[:0:-1], t])

    candidates = []
    for i, j in _local_minima_2d(distance, threshold):
        if s_lam[i] == 0.0:
            # axis points are covered by the axis scans
            continue
        s = np.zeros(n)
        s[lam], s[mu] = s_lam[i], s_mu[j]
        candidates.append(s)
    logger.debug(
        "plane scan (%d, %d): %d candidates on a %d x %d grid",
        lam + 1,
        mu + 1,
        len(candidates),
        *distance.shape,
    )

    return SimpleNamespace(
        candidates=candidates, extent=(float(s_lam[-1]), float(options.s_max))
    )


# %% subroutines
def _local_minima_1d(distance: npt.NDArray[float], threshold: float) -> list[int]:
    out = []
    for k in range(1, distance.size):
        right = distance[k + 1] if k + 1 < distance.size else np.inf
        if distance[k] < threshold and distance[k] <= distance[k - 1] and distance[k] <= right:
            out.append(k)
    return out


def _local_minima_2d(distance: npt.NDArray[float], threshold: float) -> list[tuple[int, int]]:
    padded = np.pad(distance, 1, constant_values=np.inf)
    center = padded[1:-1, 1:-1]
    is_min = center < threshold
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            shifted = padded[1 + di : padded.shape[0] - 1 + di, 1 + dj : padded.shape[1] - 1 + dj]
            is_min &= center <= shifted
    return [tuple(int(v) for v in idx) for idx in np.argwhere(is_min)]
