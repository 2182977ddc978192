"""Numerical verification of chart canonicality."""

__all__ = [
    "VerificationReport",
    "verify_canonical",
    "pullback",
    "chart_samples",
    "check_lattice_duality",
    "angle_advance",
]

import logging

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import numpy.typing as npt

from ..base.config import IntegratorOptions, VerifyOptions
from ..base.errors import FiniteDifferenceStepError
from ..flow import flow, joint_flow
from ._actions import compute_actions
from ._chart import Chart, from_action_angle, to_action_angle

logger = logging.getLogger(__name__)

FD_STEP_RANGE = (1e-9, 1e-2)

_BRACKETS = ("I_I", "x_I", "phi_I", "x_phi", "phi_phi", "x_x")


@dataclass(frozen=True)
class VerificationReport:
    """
    Residuals of the pulled-back symplectic form over sampled chart points.

    Attributes
    ----------
    canonical_residual : float
        ``max |P - Omega_can|`` with ``P = T^T Omega0 T``.
    brackets : dict
        Max Poisson bracket residuals against ``{x^a, I_b} = delta``,
        ``{phi^i, I_j} = delta`` and vanishing other brackets.
    omega_ab : float
        ``max |W_ab - delta_ab|`` of the mixed level/fiber block ``W``
        in adapted level coordinates.
    omega_ak : float
        ``max |W_ak|``.
    nondegeneracy : float
        Smallest singular value of the compact block ``W_jk``
        (``inf`` without angles).
    level_fiber : float
        ``max |Q_{J,s} - Id|`` in the flow-parameter coordinates.
    isotropy : float
        ``max |Q_{s,s}|``; vanishes on Lagrangian level sets.
    tol : float
        Threshold on ``canonical_residual``.
    samples : list
        Sampled chart points.

    """

    canonical_residual: float
    brackets: dict
    omega_ab: float
    omega_ak: float
    nondegeneracy: float
    level_fiber: float
    isotropy: float
    tol: float
    samples: list = field(default_factory=list)

    @property
    def n_samples(self) -> int:
        return len(self.samples)

    @property
    def passed(self) -> bool:
        return self.canonical_residual <= self.tol

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["n_samples"] = self.n_samples
        out["passed"] = self.passed
        return out


def chart_samples(
    chart: Chart,
    count: int,
    rng: np.random.Generator | int | None = None,
    span: float = 1.0,
    margin: float = 0.05,
) -> npt.NDArray[float]:
    """
    Random chart points ``(I, x, phi)`` inside the chart domain.

    Levels are drawn uniformly from ``V`` shrunk by ``margin`` on each
    side, line coordinates from ``[-span, span]`` and angles from
    ``[0, 2 pi)``.
    """
    rng = np.random.default_rng(rng)
    box = chart.box
    width = box[:, 1] - box[:, 0]
    k, m = chart.n - chart.rank, chart.rank
    out = []
    for _ in range(count):
        J = box[:, 0] + width * (margin + (1 - 2 * margin) * rng.random(chart.n))
        x = rng.uniform(-span, span, k)
        phi = rng.uniform(0.0, 2 * np.pi, m)
        out.append(np.concatenate([chart.actions(J), x, phi]))
    return np.asarray(out).reshape(count, 2 * chart.n)


def pullback(
    chart: Chart,
    point: npt.ArrayLike,
    fd_step: float = 1e-5,
    opts: IntegratorOptions | None = None,
    reparametrize: Callable | None = None,
) -> npt.NDArray[float]:
    """
    Pulled-back symplectic form ``P = T^T Omega0 T`` at a chart point.

    ``T`` is the central finite-difference Jacobian of
    :func:`from_action_angle` in ``(I, x, phi)``, with step
    ``fd_step * max(1, |y_k|)`` along coordinate ``k``.

    Parameters
    ----------
    chart : Chart
        Chart.
    point : ArrayLike
        Chart point ``(I, x, phi)``.
    fd_step : float, optional
        Relative step in ``[1e-9, 1e-2]``. The default is ``1e-5``.
    opts : IntegratorOptions, optional
        Integrator options.
    reparametrize : Callable, optional
        Map applied to the chart coordinates before the inverse chart.

    Returns
    -------
    np.ndarray
        Matrix of shape ``(2n, 2n)``.

    Raises
    ------
    FiniteDifferenceStepError
        If ``fd_step`` is outside ``[1e-9, 1e-2]``.

    """
    _check_step(fd_step)
    n, k = chart.n, chart.n - chart.rank

    def inverse(y):
        if reparametrize is not None:
            y = np.asarray(reparametrize(y), dtype=float)
        return from_action_angle(chart, y[:n], y[n : n + k], y[n + k :], opts)

    T = _jacobian(inverse, np.asarray(point, dtype=float), fd_step)
    return T.T @ chart.system.phase_space.omega @ T


def verify_canonical(
    chart: Chart,
    sample_points: npt.ArrayLike | None = None,
    fd_step: float | None = None,
    options: VerifyOptions | None = None,
    rng: np.random.Generator | int | None = None,
    reparametrize: Callable | None = None,
) -> VerificationReport:
    """
    Verify that the chart pulls the symplectic form back to ``dI ^ dx + dI ^ dphi``.

    Parameters
    ----------
    chart : Chart
        Chart to verify.
    sample_points : ArrayLike, optional
        Chart points ``(I, x, phi)`` of shape ``(N, 2n)``. The default
        draws ``options.samples`` points with :func:`chart_samples`.
    fd_step : float, optional
        Relative finite-difference step. The default is ``options.fd_step``.
    options : VerifyOptions, optional
        Verification options.
    rng : np.random.Generator | int, optional
        Random source for the default samples.
    reparametrize : Callable, optional
        Map applied to the chart coordinates before the inverse chart;
        used to check deliberately modified charts.

    Returns
    -------
    VerificationReport
        Residuals over the samples.

    Raises
    ------
    FiniteDifferenceStepError
        If the step is outside ``[1e-9, 1e-2]``.

    Examples
    --------
    >>> import torchaa
    >>> entry = torchaa.catalog.catalog_get("free")
    >>> chart = torchaa.chart.build_chart(entry.system, entry.box, entry.seed)
    >>> torchaa.chart.verify_canonical(chart, rng=0).canonical_residual < 1e-8
    True

    """
    options = options or VerifyOptions()
    fd_step = options.fd_step if fd_step is None else fd_step
    _check_step(fd_step)
    if sample_points is None:
        sample_points = chart_samples(chart, options.samples, rng, options.fiber_span)
    samples = np.atleast_2d(np.asarray(sample_points, dtype=float))

    n, k = chart.n, chart.n - chart.rank
    canonical = _canonical(n)
    brackets_expected = np.linalg.inv(canonical)
    groups = {"I": np.arange(n), "x": np.arange(n, n + k), "phi": np.arange(n + k, 2 * n)}

    residual = 0.0
    brackets = dict.fromkeys(_BRACKETS, 0.0)
    omega_ab = omega_ak = level_fiber = isotropy = 0.0
    nondegeneracy = np.inf
    for point in samples:
        P = pullback(chart, point, fd_step, reparametrize=reparametrize)
        residual = max(residual, float(np.max(np.abs(P - canonical))))
        B = np.linalg.inv(P) - brackets_expected
        for name in _BRACKETS:
            rows, cols = (groups[g] for g in name.split("_"))
            block = B[np.ix_(rows, cols)]
            if block.size:
                brackets[name] = max(brackets[name], float(np.max(np.abs(block))))

        Q, frame = _level_pullback(chart, point, fd_step)
        Qjs = Q[:n, n:]
        W = np.linalg.solve(frame, Qjs @ frame)
        level_fiber = max(level_fiber, float(np.max(np.abs(Qjs - np.eye(n)))))
        isotropy = max(isotropy, float(np.max(np.abs(Q[n:, n:]))))
        if k:
            omega_ab = max(omega_ab, float(np.max(np.abs(W[:k, :k] - np.eye(k)))))
        if k and chart.rank:
            omega_ak = max(omega_ak, float(np.max(np.abs(W[:k, k:]))))
        if chart.rank:
            sigma = np.linalg.svd(W[k:, k:], compute_uv=False)
            nondegeneracy = min(nondegeneracy, float(sigma[-1]))

    report = VerificationReport(
        residual,
        brackets,
        omega_ab,
        omega_ak,
        nondegeneracy,
        level_fiber,
        isotropy,
        options.residual_tol,
        samples.tolist(),
    )
    logger.info(
        "verification done: canonical residual %.3e over %d samples (%s)",
        residual,
        len(samples),
        "pass" if report.passed else "FAIL",
    )
    return report


def check_lattice_duality(
    chart: Chart, J: npt.ArrayLike, step: float = 1e-5
) -> tuple[float, npt.NDArray[float]]:
    """
    Check ``2 pi <e^{i*}(J), grad_J I_j(J)> = delta_ij`` on the compact block.

    ``grad_J I`` is a central finite difference of :func:`compute_actions`
    (loop integrals, not the interpolated action map).

    Returns
    -------
    deviation : float
        Max deviation from the identity.
    matrix : np.ndarray
        The ``m x m`` pairing matrix.

    """
    _check_step(step)
    J = np.asarray(J, dtype=float).reshape(-1)
    n, k = chart.n, chart.n - chart.rank
    grad = np.empty((n, n))
    for l in range(n):
        h = step * max(1.0, abs(J[l]))
        dJ = np.zeros(n)
        dJ[l] = h
        plus = compute_actions(chart.system, chart.section, chart.family, J + dJ, chart.opts)
        minus = compute_actions(chart.system, chart.section, chart.family, J - dJ, chart.opts)
        grad[:, l] = (plus - minus) / (2 * h)
    dual = chart.lattice(J).dual_basis()[k:]
    matrix = 2 * np.pi * dual @ grad[k:].T
    deviation = float(np.max(np.abs(matrix - np.eye(chart.rank)))) if chart.rank else 0.0
    return deviation, matrix


def angle_advance(
    chart: Chart, point: npt.ArrayLike, index: int, t: float, opts: IntegratorOptions | None = None
) -> float:
    """
    Flow by the Hamiltonian field of ``I_index o F`` and measure the chart drift.

    The coordinate conjugate to ``I_index`` must advance by ``t`` while
    every other chart coordinate stays fixed.

    Parameters
    ----------
    chart : Chart
        Chart.
    point : ArrayLike
        Chart point ``(I, x, phi)``.
    index : int
        Action index (0-based, noncompact first).
    t : float
        Flow time.
    opts : IntegratorOptions, optional
        Integrator options.

    Returns
    -------
    float
        Max deviation from the predicted chart point, angles compared
        modulo ``2 pi``.

    """
    point = np.asarray(point, dtype=float)
    n, k = chart.n, chart.n - chart.rank
    if not 0 <= index < n:
        raise ValueError(f"action index {index} out of range for n = {n}")
    z = from_action_angle(chart, point[:n], point[n : n + k], point[n + k :], opts)
    J = chart.actions.inverse(point[:n])
    weights = chart.actions.jacobian(J)[index]
    z_t = flow(chart.system, weights, z, t, opts or chart.opts)
    I, x, phi = to_action_angle(chart, z_t, opts)

    expected = point.copy()
    expected[n + index] += t
    actual = np.concatenate([I, x, phi])
    diff = actual - expected
    diff[n + k :] = (diff[n + k :] + np.pi) % (2 * np.pi) - np.pi
    return float(np.max(np.abs(diff)))


# %% subroutines
def _check_step(step):
    lo, hi = FD_STEP_RANGE
    if not lo <= step <= hi:
        raise FiniteDifferenceStepError(f"finite-difference step {step:g} outside [{lo:g}, {hi:g}]")


def _canonical(n):
    eye, zero = np.eye(n), np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def _jacobian(func, y, fd_step):
    columns = []
    for j in range(y.size):
        h = fd_step * max(1.0, abs(y[j]))
        dy = np.zeros(y.size)
        dy[j] = h
        columns.append((func(y + dy) - func(y - dy)) / (2 * h))
    return np.stack(columns, axis=1)


def _level_pullback(chart, point, fd_step):
    n, k = chart.n, chart.n - chart.rank
    J = chart.actions.inverse(point[:n])
    D, Dp, Bp = chart.gauge(J)
    x_raw = point[n : n + k] + D
    phi_raw = np.mod(point[n + k :] + Dp + Bp @ x_raw, 2 * np.pi)
    lattice = chart.lattice(J)
    s = lattice.compose(x_raw, phi_raw)

    def level_map(y):
        z0 = chart.section(y[:n])
        return joint_flow(chart.system, z0, y[n:], chart.opts)

    K = _jacobian(level_map, np.concatenate([J, s]), fd_step)
    Q = K.T @ chart.system.phase_space.omega @ K
    frame = np.hstack([lattice.complement, lattice.basis / (2 * np.pi)])
    return Q, frame
