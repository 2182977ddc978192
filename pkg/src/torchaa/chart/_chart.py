"""Action-angle chart over a trivializing patch."""

__all__ = [
    "Chart",
    "build_chart",
    "to_action_angle",
    "from_action_angle",
    "check_integrals_of_actions",
    "IntegralsReport",
]

import dataclasses
import itertools
import logging

from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.typing as npt

from ..base.config import ChartOptions, IntegratorOptions, LatticeOptions
from ..base.errors import ChartDomainError, IntegrationError, PointNotReachableError
from ..flow import joint_flow
from ..lattice import PeriodLattice, find_period_lattice
from ..symplectic import IntegrableSystem, vector_fields
from ._actions import ActionMap, build_action_map
from ._family import LatticeFamily, build_lattice_family
from ._gauge import GaugeCorrection
from ._section import Section, build_section

logger = logging.getLogger(__name__)

TWO_PI = 2 * np.pi


@dataclass(frozen=True, eq=False)
class Chart:
    """
    Action-angle chart ``(I, x, phi)`` on the preimage of a level box.

    The chart is immutable; :meth:`with_gauge` returns a new chart.

    Attributes
    ----------
    system : IntegrableSystem
        Integrable system.
    section : Section
        Base points ``chi(J)``, the fiber origins.
    family : LatticeFamily
        Period lattice over ``V``.
    actions : ActionMap
        Interpolated action map ``J -> I``.
    gauge : GaugeCorrection
        Fiber coordinate shifts.
    options : ChartOptions
        Chart options.
    opts : IntegratorOptions
        Integrator options.

    """

    system: IntegrableSystem
    section: Section
    family: LatticeFamily
    actions: ActionMap
    gauge: GaugeCorrection
    options: ChartOptions = dataclasses.field(default_factory=ChartOptions)
    opts: IntegratorOptions = dataclasses.field(default_factory=IntegratorOptions)

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def rank(self) -> int:
        """Number ``m`` of angle coordinates."""
        return self.family.rank

    @property
    def box(self) -> npt.NDArray[float]:
        return self.section.box

    def with_gauge(self, gauge: GaugeCorrection) -> "Chart":
        if gauge.rank != self.rank or gauge.n != self.n:
            raise ValueError("gauge correction does not match the chart dimensions")
        return dataclasses.replace(self, gauge=gauge)

    def lattice(self, J: npt.ArrayLike) -> PeriodLattice:
        """Period lattice at level ``J``, based at ``chi(J)``."""
        return self.family(J)

    def raw_point(self, J: npt.ArrayLike, x: npt.ArrayLike, phi: npt.ArrayLike) -> npt.NDArray[float]:
        """Point ``Phi_s(chi(J))`` with ``s = C x + E phi / 2 pi`` (no gauge)."""
        J = np.asarray(J, dtype=float).reshape(-1)
        z0 = self.section(J)
        lattice = self.family(J, z0)
        s = lattice.compose(x, np.mod(np.asarray(phi, dtype=float), TWO_PI))
        return joint_flow(self.system, z0, s, self.opts)

    def raw_coordinates(self, z: npt.ArrayLike):
        """
        Level value and raw fiber coordinates of ``z`` (no gauge).

        Returns
        -------
        J : np.ndarray
            ``F(z)``.
        x : np.ndarray
            Raw line coordinates.
        phi : np.ndarray
            Raw angles in ``[0, 2 pi)``.

        """
        z = np.asarray(z, dtype=float).reshape(-1)
        if z.size != self.system.dim:
            raise ValueError(f"phase space point must have {self.system.dim} entries, got {z.size}")
        J = self.system.values(z)
        if not self.section.contains(J):
            raise ChartDomainError(f"F(z) = {J.tolist()} is outside the box {self.box.tolist()}")
        z0 = self.section(J)
        lattice = self.family(J, z0)
        s = _solve_fiber(self.system, z0, z, lattice, self.options, self.opts)
        x, phi = lattice.decompose(s)
        return J, x, np.mod(phi, TWO_PI)

    def to_dict(self) -> dict:
        return {
            "system": self.system.to_dict(),
            "section": self.section.to_dict(),
            "lattice": self.family.to_dict(),
            "actions": self.actions.to_dict(),
            "gauge": self.gauge.to_dict(),
            "options": {
                "chart": self.options.asdict(),
                "integrator": self.opts.asdict(),
                "lattice": self.family.options.asdict(),
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Chart":
        options = data.get("options", {})
        chart_options = ChartOptions(**_tuples(options.get("chart", {})))
        opts = IntegratorOptions(**_tuples(options.get("integrator", {})))
        lattice_options = LatticeOptions(**options.get("lattice", {}))
        system = IntegrableSystem.from_dict(data["system"])
        section = Section.from_dict(system, data["section"], chart_options)
        family = LatticeFamily.from_dict(section, data["lattice"], lattice_options, opts)
        actions = ActionMap(section.axes, np.asarray(data["actions"]["values"], dtype=float), chart_options)
        gauge = GaugeCorrection.from_dict(data["gauge"])
        return cls(system, section, family, actions, gauge, chart_options, opts)


def build_chart(
    system: IntegrableSystem,
    box: npt.ArrayLike,
    seed: npt.ArrayLike,
    options: ChartOptions | None = None,
    lattice_options: LatticeOptions | None = None,
    opts: IntegratorOptions | None = None,
    expected_rank: int | None = None,
    complement: npt.ArrayLike | Callable | None = None,
    section: Section | None = None,
) -> Chart:
    """
    Build the raw (zero gauge) action-angle chart over ``V``.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    box : ArrayLike
        Level box ``V``.
    seed : ArrayLike
        Regular point with ``F(seed)`` in ``V``.
    options : ChartOptions, optional
        Section and chart options.
    lattice_options : LatticeOptions, optional
        Period search options.
    opts : IntegratorOptions, optional
        Integrator options.
    expected_rank : int, optional
        Require this many compact directions.
    complement : ArrayLike | Callable, optional
        Complement override, constant or ``J -> (n, n - m)`` matrix.
    section : Section, optional
        Use this section instead of building one from ``seed``.

    Returns
    -------
    Chart
        Chart with zero gauge; see :func:`gauge_fix`.

    Examples
    --------
    >>> import torchaa
    >>> entry = torchaa.catalog.catalog_get("free")
    >>> chart = torchaa.chart.build_chart(entry.system, entry.box, entry.seed)
    >>> chart.rank
    0

    """
    options = options or ChartOptions()
    opts = opts or IntegratorOptions()
    lattice_options = lattice_options or LatticeOptions()
    if section is None:
        section = build_section(system, box, seed, options=options)
    base = section.points[section.seed_node]
    constant = None if complement is None or callable(complement) else complement
    lattice = find_period_lattice(system, base, lattice_options, opts, expected_rank, constant)
    if callable(complement):
        lattice = dataclasses.replace(lattice, complement=complement(section.node(section.seed_node)))
    family = build_lattice_family(section, lattice, complement, lattice_options, opts)
    actions = build_action_map(section, family, options, opts)
    gauge = GaugeCorrection.zero(section.box, family.rank)
    logger.info("chart built: n = %d, m = %d", system.n, family.rank)
    return Chart(system, section, family, actions, gauge, options, opts)


def to_action_angle(chart: Chart, z: npt.ArrayLike, opts: IntegratorOptions | None = None):
    """
    Chart coordinates of a phase space point.

    Parameters
    ----------
    chart : Chart
        Chart.
    z : ArrayLike
        Point with ``F(z)`` in ``V``.
    opts : IntegratorOptions, optional
        Integrator options overriding those of the chart.

    Returns
    -------
    I : np.ndarray
        Actions ``(I_a, I_i)``.
    x : np.ndarray
        Line coordinates ``x^a``.
    phi : np.ndarray
        Angles ``phi^i`` in ``[0, 2 pi)``.

    Raises
    ------
    ChartDomainError
        If ``F(z)`` is outside ``V``.
    PointNotReachableError
        If no flow parameter maps ``chi(F(z))`` onto ``z``.

    """
    if opts is not None:
        chart = dataclasses.replace(chart, opts=opts)
    J, x_raw, phi_raw = chart.raw_coordinates(z)
    D, Dp, Bp = chart.gauge(J)
    x = x_raw - D
    phi = np.mod(phi_raw - Dp - Bp @ x_raw, TWO_PI)
    return chart.actions(J), x, phi


def from_action_angle(
    chart: Chart,
    I: npt.ArrayLike,
    x: npt.ArrayLike,
    phi: npt.ArrayLike,
    opts: IntegratorOptions | None = None,
) -> npt.NDArray[float]:
    """
    Phase space point with chart coordinates ``(I, x, phi)``.

    Parameters
    ----------
    chart : Chart
        Chart.
    I : ArrayLike
        Actions in the image of ``V``.
    x : ArrayLike
        Line coordinates, shape ``(n - m,)``.
    phi : ArrayLike
        Angles, shape ``(m,)``; reduced modulo ``2 pi``.
    opts : IntegratorOptions, optional
        Integrator options overriding those of the chart.

    Returns
    -------
    np.ndarray
        Phase space point.

    Raises
    ------
    ChartDomainError
        If ``I`` is outside the image of ``V``.
    ActionInversionError
        If the action map cannot be inverted.

    """
    if opts is not None:
        chart = dataclasses.replace(chart, opts=opts)
    k = chart.n - chart.rank
    x = np.asarray(x, dtype=float).reshape(-1)
    phi = np.asarray(phi, dtype=float).reshape(-1)
    if x.size != k or phi.size != chart.rank:
        raise ValueError(f"expected {k} line coordinates and {chart.rank} angles")
    J = chart.actions.inverse(I)
    D, Dp, Bp = chart.gauge(J)
    x_raw = x + D
    phi_raw = phi + Dp + Bp @ x_raw
    return chart.raw_point(J, x_raw, phi_raw)


@dataclass(frozen=True)
class IntegralsReport:
    """Outcome of :func:`check_integrals_of_actions`."""

    passed: bool
    max_deviation: float
    tol: float
    n_samples: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def check_integrals_of_actions(
    chart: Chart, samples: npt.ArrayLike, tol: float = 1e-7
) -> IntegralsReport:
    """
    Check that the first integrals are functions of the actions only.

    Parameters
    ----------
    chart : Chart
        Chart.
    samples : ArrayLike
        Chart points ``(I, x, phi)`` of shape ``(N, 2n)``.
    tol : float, optional
        Admissible ``|F(from_action_angle(I, x, phi)) - J(I)|``.
        The default is ``1e-7``.

    Returns
    -------
    IntegralsReport
        Pass flag and maximum deviation.

    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    n, k = chart.n, chart.n - chart.rank
    deviation = 0.0
    for point in samples:
        I, x, phi = point[:n], point[n : n + k], point[n + k :]
        J = chart.actions.inverse(I)
        z = from_action_angle(chart, I, x, phi)
        deviation = max(deviation, float(np.max(np.abs(chart.system.values(z) - J))))
    report = IntegralsReport(deviation <= tol, deviation, tol, len(samples))
    logger.info("integrals along fibers: max deviation %.3e over %d samples", deviation, len(samples))
    return report


# %% subroutines
def _tuples(options: dict) -> dict:
    return {key: tuple(value) if isinstance(value, list) else value for key, value in options.items()}


def _residual(system, z0, z, s, opts):
    try:
        return joint_flow(system, z0, s, opts) - z
    except IntegrationError:
        return None


def _fiber_newton(system, z0, z, s, options, opts):
    r = _residual(system, z0, z, s, opts)
    if r is None:
        return s, np.inf
    residual = float(np.linalg.norm(r))
    for it in range(options.newton_maxiter):
        logger.debug("fiber Newton iteration %d: residual %.3e", it, residual)
        if residual <= options.newton_tol:
            break
        _, fields = vector_fields(system, z + r)
        ds, *_ = np.linalg.lstsq(fields.T, -r, rcond=None)
        for alpha in 0.5 ** np.arange(7):
            trial = _residual(system, z0, z, s + alpha * ds, opts)
            if trial is not None and np.linalg.norm(trial) < residual:
                s, r = s + alpha * ds, trial
                residual = float(np.linalg.norm(r))
                break
        else:
            break
    return s, residual


def _solve_fiber(system, z0, z, lattice, options, opts):
    if np.array_equal(z, z0):
        return np.zeros(system.n)

    # linearized guess, then seeds spread over one lattice cell
    _, fields = vector_fields(system, z0)
    guess, *_ = np.linalg.lstsq(fields.T, z - z0, rcond=None)
    s, residual = _fiber_newton(system, z0, z, guess, options, opts)
    if residual <= options.newton_tol:
        return s

    k = lattice.n - lattice.rank
    x_guess = (lattice.dual_basis() @ guess)[:k]
    fractions = np.arange(options.seeds_per_axis) / options.seeds_per_axis
    seeds = []
    for cell in itertools.product(fractions, repeat=lattice.rank):
        seed = lattice.complement @ x_guess + lattice.basis @ np.asarray(cell)
        r = _residual(system, z0, z, seed, opts)
        seeds.append((np.inf if r is None else float(np.linalg.norm(r)), len(seeds), seed))
    for start_residual, _, seed in sorted(seeds, key=lambda item: item[:2]):
        if not np.isfinite(start_residual):
            continue
        s, residual = _fiber_newton(system, z0, z, seed, options, opts)
        if residual <= options.newton_tol:
            return s
    raise PointNotReachableError(
        f"no flow parameter reaches the point from chi(J) (best residual {residual:.3g})"
    )
