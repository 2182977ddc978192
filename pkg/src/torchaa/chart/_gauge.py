"""Gauge corrections of the raw chart and their least-squares fit."""

__all__ = ["GaugeCorrection", "GaugeFitReport", "gauge_fix", "gauge_samples"]

import itertools
import logging

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from numpy.polynomial import legendre
from scipy import linalg

from ..base.config import GaugeOptions, IntegratorOptions
from ..base.errors import GaugeFitError

logger = logging.getLogger(__name__)

_RCOND = 1e-10


@dataclass(frozen=True, eq=False)
class GaugeCorrection:
    """
    Shifts of the fiber coordinates turning the raw chart canonical.

    The corrected coordinates are ``x = x_raw - D(J)`` and
    ``phi = phi_raw - D'(J) - B'(J) x_raw``. Every component is a
    tensor product of Legendre polynomials in the level values,
    rescaled from the box ``V`` to ``[-1, 1]^n``.

    Attributes
    ----------
    box : np.ndarray
        Level box ``V``, shape ``(n, 2)``.
    degree : int
        Polynomial degree per variable.
    D : np.ndarray
        Coefficients of ``D^a``, shape ``(n - m, (degree + 1)^n)``.
    Dp : np.ndarray
        Coefficients of ``D'^i``, shape ``(m, (degree + 1)^n)``.
    Bp : np.ndarray
        Coefficients of ``B'^i_a``, shape ``(m, n - m, (degree + 1)^n)``.

    """

    box: npt.NDArray[float]
    degree: int
    D: npt.NDArray[float]
    Dp: npt.NDArray[float]
    Bp: npt.NDArray[float]

    def __post_init__(self):
        box = np.asarray(self.box, dtype=float).reshape(-1, 2)
        n, size = box.shape[0], (self.degree + 1) ** box.shape[0]
        D = np.asarray(self.D, dtype=float).reshape(-1, size)
        Dp = np.asarray(self.Dp, dtype=float).reshape(-1, size)
        Bp = np.asarray(self.Bp, dtype=float).reshape(Dp.shape[0], D.shape[0], size)
        if D.shape[0] + Dp.shape[0] != n:
            raise ValueError("gauge corrections must cover n - m lines and m angles")
        if not (np.all(np.isfinite(D)) and np.all(np.isfinite(Dp)) and np.all(np.isfinite(Bp))):
            raise ValueError("gauge coefficients must be finite")
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "Dp", Dp)
        object.__setattr__(self, "Bp", Bp)

    @classmethod
    def zero(cls, box: npt.ArrayLike, rank: int, degree: int = 0) -> "GaugeCorrection":
        """Vanishing correction for ``m = rank`` compact directions."""
        box = np.asarray(box, dtype=float).reshape(-1, 2)
        n = box.shape[0]
        size = (degree + 1) ** n
        return cls(box, degree, np.zeros((n - rank, size)), np.zeros((rank, size)), np.zeros((rank, n - rank, size)))

    @property
    def n(self) -> int:
        return self.box.shape[0]

    @property
    def rank(self) -> int:
        return self.Dp.shape[0]

    @property
    def is_zero(self) -> bool:
        return not (self.D.any() or self.Dp.any() or self.Bp.any())

    def basis(self, J: npt.ArrayLike) -> tuple[npt.NDArray[float], npt.NDArray[float]]:
        """
        Tensor-product Legendre basis at ``J``.

        Returns
        -------
        values : np.ndarray
            Basis values, shape ``((degree + 1)^n,)``; the constant comes first.
        gradient : np.ndarray
            Derivatives with respect to ``J``, shape ``((degree + 1)^n, n)``.

        """
        return _legendre_basis(J, self.box, self.degree)

    def __call__(self, J: npt.ArrayLike):
        """
        Evaluate the corrections at ``J``.

        Returns
        -------
        D : np.ndarray
            Line shifts, shape ``(n - m,)``.
        Dp : np.ndarray
            Angle shifts, shape ``(m,)``.
        Bp : np.ndarray
            Angle shears, shape ``(m, n - m)``.

        """
        values, _ = self.basis(J)
        return self.D @ values, self.Dp @ values, self.Bp @ values

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "box": self.box.tolist(),
            "D": self.D.tolist(),
            "Dp": self.Dp.tolist(),
            "Bp": self.Bp.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GaugeCorrection":
        return cls(data["box"], int(data["degree"]), data["D"], data["Dp"], data["Bp"])


@dataclass(frozen=True)
class GaugeFitReport:
    """
    Outcome of :func:`gauge_fix`.

    Attributes
    ----------
    pre_residual : float
        Max off-canonical entry of the pulled-back form before the fit.
    post_residual : float
        Same after the fit.
    rank : int
        Numerical rank of the least-squares matrix.
    unknowns : int
        Number of polynomial coefficients.
    rows : int
        Number of equations.
    samples : int
        Number of sampled chart points.
    degree : int
        Polynomial degree per variable.

    """

    pre_residual: float
    post_residual: float
    rank: int
    unknowns: int
    rows: int
    samples: int
    degree: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def gauge_samples(chart, options: GaugeOptions | None = None) -> npt.NDArray[float]:
    """
    Tensor grid of raw chart points ``(I, x_raw, phi_raw)`` for the fit.

    Levels sit at the cell midpoints of a regular grid over ``V``; line
    coordinates span ``[-fiber_span, fiber_span]`` and angles sit at the
    cell midpoints of one fundamental cell.
    """
    options = options or GaugeOptions()
    box = chart.box
    k, m = chart.n - chart.rank, chart.rank
    frac = (np.arange(options.level_samples) + 0.5) / options.level_samples
    levels = [lo + frac * (hi - lo) for lo, hi in box]
    lines = np.linspace(-options.fiber_span, options.fiber_span, options.fiber_samples)
    # half-cell offset keeps the finite difference stencil off the angle seam
    angles = 2 * np.pi * (np.arange(options.fiber_samples) + 0.5) / options.fiber_samples

    out = []
    for J in itertools.product(*levels):
        I = chart.actions(np.array(J))
        for fiber in itertools.product(*([lines] * k + [angles] * m)):
            out.append(np.concatenate([I, fiber]))
    return np.asarray(out)


def gauge_fix(
    chart,
    sample_grid: npt.ArrayLike | None = None,
    degree: int | None = None,
    options: GaugeOptions | None = None,
    opts: IntegratorOptions | None = None,
):
    """
    Fit the gauge correction that makes the chart canonical.

    The pulled-back form of the raw chart differs from the canonical one
    by ``dI_a ^ dD^a + dI_i ^ dD'^i + dI_i ^ d(B'^i_a x^a)``, which is
    linear in the polynomial coefficients. The coefficients minimize the
    squared off-canonical entries over the samples; constant terms of
    ``D`` and ``D'`` are left out, and the remaining null space is
    resolved by the minimum-norm solution.

    Parameters
    ----------
    chart : Chart
        Chart to correct; any existing gauge is replaced.
    sample_grid : ArrayLike, optional
        Raw chart points ``(I, x_raw, phi_raw)`` of shape ``(N, 2n)``.
        The default is :func:`gauge_samples`.
    degree : int, optional
        Polynomial degree per variable. The default is ``options.degree``.
    options : GaugeOptions, optional
        Fit options.
    opts : IntegratorOptions, optional
        Integrator options.

    Returns
    -------
    chart : Chart
        Chart with the fitted gauge.
    report : GaugeFitReport
        Largest off-canonical pullback entry over the samples, for the
        raw chart and re-measured on the corrected one.

    Raises
    ------
    GaugeFitError
        If there are fewer equations than unknowns.

    """
    from ._verify import pullback

    options = options or GaugeOptions()
    degree = options.degree if degree is None else int(degree)
    raw = chart.with_gauge(GaugeCorrection.zero(chart.box, chart.rank))
    samples = gauge_samples(chart, options) if sample_grid is None else np.atleast_2d(sample_grid)
    n, m = chart.n, chart.rank
    k = n - m
    if samples.shape[-1] != 2 * n:
        raise ValueError(f"gauge samples must have {2 * n} coordinates, got {samples.shape[-1]}")

    dim = 2 * n
    upper = np.triu_indices(dim, 1)
    target = _canonical(n)[upper]
    residuals, blocks = [], []
    for point in samples:
        P = pullback(raw, point, options.fd_step, opts)
        residuals.append(P[upper] - target)
        if n > 1:
            blocks.append(_design(raw, point, degree, k, m, upper))
    residuals = np.concatenate(residuals)
    pre = float(np.max(np.abs(residuals)))

    if n == 1:
        # a single degree of freedom has no dI ^ dI block: every section is canonical
        report = GaugeFitReport(pre, pre, 0, 0, residuals.size, len(samples), degree)
        logger.info("gauge fit skipped for one degree of freedom, residual %.3e", pre)
        return raw, report

    A = np.concatenate(blocks)
    if A.shape[0] < A.shape[1]:
        raise GaugeFitError(
            f"{A.shape[0]} equations for {A.shape[1]} gauge coefficients; "
            "lower the degree or add samples"
        )
    coeffs, _, rank, _ = linalg.lstsq(A, -residuals, cond=_RCOND)

    size = (degree + 1) ** n
    D, Dp, Bp = _unpack(coeffs, k, m, size)
    gauge = GaugeCorrection(chart.box, degree, D, Dp, Bp)
    fitted = chart.with_gauge(gauge)
    # measured on the corrected chart, not read off the linear model
    post = max(
        float(np.max(np.abs(pullback(fitted, point, options.fd_step, opts)[upper] - target))) for point in samples
    )
    report = GaugeFitReport(pre, post, int(rank), A.shape[1], A.shape[0], len(samples), degree)
    logger.info(
        "gauge fitted: degree %d, rank %d of %d, residual %.3e -> %.3e", degree, rank, A.shape[1], pre, post
    )
    return fitted, report


# %% subroutines
def _legendre_basis(J, box, degree):
    J = np.asarray(J, dtype=float).reshape(-1)
    n = J.size
    width = box[:, 1] - box[:, 0]
    u = 2 * (J - box[:, 0]) / width - 1
    V = legendre.legvander(u, degree)
    if degree > 0:
        der = legendre.legder(np.eye(degree + 1), axis=0)
        dV = legendre.legvander(u, degree - 1) @ der
    else:
        dV = np.zeros_like(V)
    dV = dV * (2 / width)[:, None]

    index = np.array(list(itertools.product(range(degree + 1), repeat=n)), dtype=int).reshape(-1, n)
    axes = np.arange(n)
    factors = V[axes, index]
    values = np.prod(factors, axis=1)
    gradient = np.empty((index.shape[0], n))
    for l in range(n):
        others = np.prod(np.delete(factors, l, axis=1), axis=1)
        gradient[:, l] = dV[l, index[:, l]] * others
    return values, gradient


def _canonical(n):
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def _wedge(a, b):
    return np.outer(a, b) - np.outer(b, a)


def _design(chart, point, degree, k, m, upper):
    n = k + m
    dim = 2 * n
    I, xt = point[:n], point[n : n + k]
    J = chart.actions.inverse(I)
    dJdI = np.linalg.inv(chart.actions.jacobian(J))
    values, gradient = _legendre_basis(J, chart.box, degree)
    grad_I = gradient @ dJdI
    unit = np.eye(dim)

    def dI(b):
        return np.concatenate([grad_I[b], np.zeros(n)])

    columns = []
    for a in range(k):
        for b in range(1, values.size):
            columns.append(_wedge(unit[a], dI(b))[upper])
    for i in range(m):
        for b in range(1, values.size):
            columns.append(_wedge(unit[k + i], dI(b))[upper])
    for i in range(m):
        for a in range(k):
            shear = _wedge(unit[k + i], unit[n + a])
            for b in range(values.size):
                columns.append((xt[a] * _wedge(unit[k + i], dI(b)) + values[b] * shear)[upper])
    return np.stack(columns, axis=1) if columns else np.zeros((len(upper[0]), 0))


def _unpack(coeffs, k, m, size):
    D = np.zeros((k, size))
    Dp = np.zeros((m, size))
    start = 0
    for a in range(k):
        D[a, 1:] = coeffs[start : start + size - 1]
        start += size - 1
    for i in range(m):
        Dp[i, 1:] = coeffs[start : start + size - 1]
        start += size - 1
    Bp = coeffs[start:].reshape(m, k, size)
    return D, Dp, Bp
