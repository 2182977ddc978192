"""Hypothesis analysis of an integrable system over a level box."""

__all__ = ["analyze_system", "AnalysisReport"]

import logging

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from ..base.config import ChartOptions, IntegratorOptions, LatticeOptions
from ..base.errors import ActionAngleError
from ..chart import LatticeFamily, Section, build_lattice_family, build_section
from ..flow import CompletenessResult, completeness_probe
from ..lattice import PeriodLattice, find_period_lattice
from ..symplectic import (
    IntegrableSystem,
    InvolutionReport,
    RegularityResult,
    check_involution,
    check_regular,
    sample_points,
)

logger = logging.getLogger(__name__)


@dataclass
class AnalysisReport:
    """
    Outcome of :func:`analyze_system`.

    Attributes
    ----------
    regularity : RegularityResult
        Regularity of ``F`` at the seed.
    involution : InvolutionReport
        Poisson brackets on samples around the seed.
    completeness : CompletenessResult | None
        Completeness probe from the seed.
    lattice : PeriodLattice | None
        Period lattice at the seed node of the section.
    section : Section | None
        Section over ``V``.
    family : LatticeFamily | None
        Lattice continued over the section grid.
    stage : str | None
        Stage that failed, if any.
    error : str | None
        Message of the failure.

    """

    regularity: RegularityResult
    involution: InvolutionReport
    completeness: CompletenessResult | None = None
    lattice: PeriodLattice | None = None
    section: Section | None = None
    family: LatticeFamily | None = None
    stage: str | None = None
    error: str | None = None
    notes: list = field(default_factory=list)

    @property
    def rank(self) -> int | None:
        return None if self.lattice is None else self.lattice.rank

    @property
    def passed(self) -> bool:
        """Whether every hypothesis check passed and all stages completed."""
        return (
            self.regularity.regular
            and self.involution.passed
            and self.error is None
            and self.family is not None
        )

    def to_dict(self) -> dict:
        out = {
            "passed": self.passed,
            "rank": self.rank,
            "regularity": {
                "regular": self.regularity.regular,
                "rank": self.regularity.rank,
                "singular_values": np.asarray(self.regularity.singular_values).tolist(),
            },
            "involution": self.involution.to_dict(),
            "completeness": None if self.completeness is None else self.completeness.to_dict(),
            "lattice": None if self.lattice is None else self.lattice.to_dict(),
            "stage": self.stage,
            "error": self.error,
            "notes": list(self.notes),
        }
        if self.family is not None:
            out["continuation"] = {
                "grid": [axis.tolist() for axis in self.section.axes],
                "rank": self.family.rank,
                "periods": self.family.periods().tolist(),
                "max_residual": float(self.family.residuals.max()) if self.family.rank else 0.0,
            }
        return out


def analyze_system(
    system: IntegrableSystem,
    box: npt.ArrayLike,
    seed: npt.ArrayLike,
    chart_options: ChartOptions | None = None,
    lattice_options: LatticeOptions | None = None,
    opts: IntegratorOptions | None = None,
    involution_tol: float = 1e-10,
    involution_samples: int = 32,
    rng: np.random.Generator | int | None = None,
) -> AnalysisReport:
    """
    Check the hypotheses of the construction over a level box.

    Runs the regularity and involution checks at and around the seed,
    the completeness probe, the period lattice search and its
    continuation over the section grid. Later stages are skipped once a
    hypothesis fails.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    box : ArrayLike
        Level box ``V``.
    seed : ArrayLike
        Seed point with ``F(seed)`` in ``V``.
    chart_options : ChartOptions, optional
        Section options.
    lattice_options : LatticeOptions, optional
        Lattice search options; ``s_max`` is also the probe horizon.
    opts : IntegratorOptions, optional
        Integrator options.
    involution_tol : float, optional
        Admissible Poisson bracket. The default is ``1e-10``.
    involution_samples : int, optional
        Number of sample points. The default is ``32``.
    rng : np.random.Generator | int, optional
        Random source of the sample points.

    Returns
    -------
    AnalysisReport
        Stage results; ``stage`` and ``error`` name the failed stage.

    Examples
    --------
    >>> import torchaa
    >>> entry = torchaa.catalog.catalog_get("cylinder")
    >>> torchaa.analyze_system(entry.system, entry.box, entry.seed).rank
    1

    """
    chart_options = chart_options or ChartOptions()
    lattice_options = lattice_options or LatticeOptions()
    opts = opts or IntegratorOptions()
    seed = np.asarray(seed, dtype=float)

    regularity = check_regular(system, seed)
    radius = 0.1 * max(1.0, float(np.max(np.abs(seed))))
    points = np.vstack([seed, sample_points(seed, radius, involution_samples, rng)])
    involution = check_involution(system, points, involution_tol)
    report = AnalysisReport(regularity, involution)
    if not regularity.regular:
        report.notes.append("seed is a critical point of F")
        return report
    if not involution.passed:
        report.notes.append("first integrals are not in involution")
        return report

    try:
        report.stage = "completeness"
        report.completeness = completeness_probe(system, seed, lattice_options.s_max, opts)
        if report.completeness.escaped:
            report.notes.append(
                f"flow {report.completeness.index} leaves the bounding box at "
                f"t = {report.completeness.t_escape:.6g}"
            )
        report.stage = "section"
        report.section = build_section(system, box, seed, options=chart_options)
        report.stage = "lattice"
        base = report.section.points[report.section.seed_node]
        report.lattice = find_period_lattice(system, base, lattice_options, opts)
        report.stage = "continuation"
        report.family = build_lattice_family(report.section, report.lattice, None, lattice_options, opts)
        report.stage = None
    except ActionAngleError as err:
        err.stage = report.stage
        report.error = str(err)
        logger.warning("analysis stopped at stage %s: %s", report.stage, err)
    return report
