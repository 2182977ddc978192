"""One-call action-angle chart pipeline."""

__all__ = ["action_angle_chart"]

import numpy as np
import numpy.typing as npt

from ..base.config import ChartOptions, GaugeOptions, IntegratorOptions, LatticeOptions, VerifyOptions
from ..base.errors import NonInvolutiveError
from ..chart import Chart, GaugeFitReport, VerificationReport, build_chart, gauge_fix, verify_canonical
from ..symplectic import IntegrableSystem, check_involution, sample_points


def action_angle_chart(
    system: IntegrableSystem,
    box: npt.ArrayLike,
    seed: npt.ArrayLike,
    chart_options: ChartOptions | None = None,
    lattice_options: LatticeOptions | None = None,
    gauge_options: GaugeOptions | None = None,
    verify_options: VerifyOptions | None = None,
    opts: IntegratorOptions | None = None,
    expected_rank: int | None = None,
    involution_tol: float = 1e-10,
    rng: np.random.Generator | int | None = None,
) -> tuple[Chart, GaugeFitReport, VerificationReport]:
    """
    Build, gauge-fix and verify an action-angle chart.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    box : ArrayLike
        Level box ``V``.
    seed : ArrayLike
        Seed point with ``F(seed)`` in ``V``.
    chart_options : ChartOptions, optional
        Section and chart options.
    lattice_options : LatticeOptions, optional
        Period search options.
    gauge_options : GaugeOptions, optional
        Gauge fit options.
    verify_options : VerifyOptions, optional
        Verification options.
    opts : IntegratorOptions, optional
        Integrator options.
    expected_rank : int, optional
        Require this many compact directions.
    involution_tol : float, optional
        Admissible Poisson bracket near the seed. The default is ``1e-10``.
    rng : np.random.Generator | int, optional
        Random source of the involution and verification samples.

    Returns
    -------
    chart : Chart
        Gauge-fixed chart.
    fit : GaugeFitReport
        Gauge fit residuals.
    report : VerificationReport
        Verification of the fitted chart.

    Raises
    ------
    NonInvolutiveError
        If the first integrals do not commute near the seed.

    Examples
    --------
    >>> import torchaa
    >>> entry = torchaa.catalog.catalog_get("sho(2)")
    >>> chart, fit, report = torchaa.action_angle_chart(entry.system, entry.box, entry.seed, rng=0)
    >>> report.passed
    True

    """
    rng = np.random.default_rng(rng)
    seed = np.asarray(seed, dtype=float)
    radius = 0.1 * max(1.0, float(np.max(np.abs(seed))))
    points = np.vstack([seed, sample_points(seed, radius, 32, rng)])
    involution = check_involution(system, points, involution_tol)
    if not involution.passed:
        raise NonInvolutiveError(involution.max_bracket)

    chart = build_chart(system, box, seed, chart_options, lattice_options, opts, expected_rank)
    chart, fit = gauge_fix(chart, options=gauge_options, opts=opts)
    report = verify_canonical(chart, options=verify_options, rng=rng)
    return chart, fit, report
