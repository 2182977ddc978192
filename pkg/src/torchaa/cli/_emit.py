"""Tabular data series of a chart."""

__all__ = ["orbit_trace", "residual_map", "action_curves", "write_csv"]

import csv
import itertools
import logging

from pathlib import Path

import numpy as np
import numpy.typing as npt

from ..base.config import EmitOptions, IntegratorOptions, VerifyOptions
from ..base.errors import EscapeError
from ..chart import Chart, chart_samples, from_action_angle, pullback, to_action_angle
from ..flow import trajectory
from ..utils import format_csv_float

logger = logging.getLogger(__name__)


def _chart_header(chart, prefix=""):
    n, k = chart.n, chart.n - chart.rank
    return (
        [f"{prefix}I{a + 1}" for a in range(n)]
        + [f"{prefix}x{a + 1}" for a in range(k)]
        + [f"{prefix}phi{i + 1}" for i in range(chart.rank)]
    )


def orbit_trace(
    chart: Chart,
    options: EmitOptions | None = None,
    opts: IntegratorOptions | None = None,
) -> tuple[list[str], npt.NDArray[float]]:
    """
    Orbit of an action Hamiltonian in raw and chart coordinates.

    The orbit starts at the chart origin ``(I(J_c), 0, 0)`` over the box
    center ``J_c`` and follows the Hamiltonian field of ``I_l o F`` for
    ``options.orbit_time``. Along it, only the coordinate conjugate to
    ``I_l`` advances, at unit speed.

    Parameters
    ----------
    chart : Chart
        Chart.
    options : EmitOptions, optional
        Trace length and action index.
    opts : IntegratorOptions, optional
        Integrator options; the default uses those of the chart.

    Returns
    -------
    header : list[str]
        ``t, q.., p.., I.., x.., phi..``.
    rows : np.ndarray
        One row per sample time.

    Raises
    ------
    EscapeError
        If the orbit leaves the bounding box.

    """
    options = options or EmitOptions()
    opts = opts or chart.opts
    n, k = chart.n, chart.n - chart.rank
    index = options.orbit_action
    if index is None:
        index = k if chart.rank else 0
    if index >= n:
        raise ValueError(f"orbit_action must be smaller than {n}, got {index}")

    J = chart.box.mean(axis=1)
    I = chart.actions(J)
    z0 = from_action_angle(chart, I, np.zeros(k), np.zeros(chart.rank), opts)
    weights = chart.actions.jacobian(J)[index]
    path = trajectory(chart.system, weights, z0, options.orbit_time, opts)
    if path.escaped:
        raise EscapeError(*path.escape)

    times = np.linspace(0.0, options.orbit_time, options.orbit_points, endpoint=False)
    points = path(times)
    rows = []
    for t, z in zip(times, points):
        I_z, x, phi = to_action_angle(chart, z, opts)
        rows.append(np.concatenate([[t], z, I_z, x, phi]))
    header = (
        ["t"]
        + [f"q{i + 1}" for i in range(n)]
        + [f"p{i + 1}" for i in range(n)]
        + _chart_header(chart)
    )
    logger.info("orbit trace of action %d: %d points", index, len(rows))
    return header, np.asarray(rows)


def residual_map(
    chart: Chart,
    options: EmitOptions | None = None,
    verify: VerifyOptions | None = None,
    rng: np.random.Generator | int | None = None,
) -> tuple[list[str], npt.NDArray[float]]:
    """
    Canonical-form residual at random chart points over ``V`` times the fiber.

    Returns
    -------
    header : list[str]
        ``I.., x.., phi.., residual``.
    rows : np.ndarray
        One row per sample, ``options.residual_samples`` rows.

    """
    options = options or EmitOptions()
    verify = verify or VerifyOptions()
    n = chart.n
    canonical = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    samples = chart_samples(chart, options.residual_samples, rng, verify.fiber_span)
    rows = []
    for point in samples:
        P = pullback(chart, point, verify.fd_step)
        rows.append(np.append(point, np.max(np.abs(P - canonical))))
    logger.info("residual map: %d samples", len(rows))
    return _chart_header(chart) + ["residual"], np.asarray(rows)


def action_curves(chart: Chart, options: EmitOptions | None = None) -> tuple[list[str], npt.NDArray[float]]:
    """
    Actions over a tensor grid of ``options.levels`` levels per axis of ``V``.

    Returns
    -------
    header : list[str]
        ``J.., I..``.
    rows : np.ndarray
        One row per grid level, last axis fastest.

    """
    options = options or EmitOptions()
    axes = [np.linspace(lo, hi, options.levels) for lo, hi in chart.box]
    levels = np.array(list(itertools.product(*axes)))
    actions = chart.actions(levels)
    header = [f"J{i + 1}" for i in range(chart.n)] + [f"I{i + 1}" for i in range(chart.n)]
    return header, np.hstack([levels, actions])


def write_csv(path: str | Path, header: list[str], rows: npt.ArrayLike) -> Path:
    """
    Write a header row and numeric rows with 17 significant digits.

    Returns
    -------
    Path
        Written file.

    """
    path = Path(path)
    with path.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in np.atleast_2d(np.asarray(rows, dtype=float)):
            writer.writerow([format_csv_float(x) for x in row])
    return path
