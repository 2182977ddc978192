"""Numerical options shared by the pipeline stages."""

__all__ = [
    "IntegratorOptions",
    "LatticeOptions",
    "ChartOptions",
    "GaugeOptions",
    "VerifyOptions",
    "EmitOptions",
]

import dataclasses

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

DEFAULT_BOX = 50.0


class _Options:
    """Mixin with provenance helpers."""

    def asdict(self) -> dict:
        """Return the options as a plain dictionary (for reports)."""
        out = {}
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if isinstance(value, np.ndarray):
                value = value.tolist()
            elif isinstance(value, tuple):
                value = [np.asarray(v).tolist() for v in value]
            out[field.name] = value
        return out

    def replace(self, **changes):
        """Return a copy with ``changes`` applied."""
        return dataclasses.replace(self, **changes)


def _check_positive(**values):
    for name, value in values.items():
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class IntegratorOptions(_Options):
    """
    Options of the adaptive Runge-Kutta flow integrator.

    Parameters
    ----------
    rtol : float, optional
        Relative tolerance. The default is ``1e-11``.
    atol : float, optional
        Absolute tolerance. The default is ``1e-12``.
    max_steps : int, optional
        Maximum number of accepted steps per trajectory.
        The default is ``200000``.
    box : float | tuple, optional
        Bounding box for escape detection, either a half-width of the
        cube ``[-box, box]^{2n}`` or a pair ``(lower, upper)`` of
        per-coordinate bounds. The default is ``50.0``.
    method : str, optional
        Embedded Runge-Kutta stepper from ``scipy.integrate`` (``RK45`` or
        ``DOP853``), stepped directly by the flow integrator. The default is
        ``"RK45"`` (Dormand-Prince 5(4) with dense output).

    """

    rtol: float = 1e-11
    atol: float = 1e-12
    max_steps: int = 200_000
    box: float | tuple = DEFAULT_BOX
    method: str = "RK45"

    def __post_init__(self):
        _check_positive(rtol=self.rtol, atol=self.atol)
        if int(self.max_steps) < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.method not in ("RK45", "DOP853"):
            raise ValueError(f"unsupported integration method {self.method!r}")
        if np.isscalar(self.box):
            _check_positive(box=self.box)
        else:
            lower, upper = self.box
            if np.any(np.asarray(upper) <= np.asarray(lower)):
                raise ValueError("bounding box must have upper > lower")

    def bounds(self, dim: int) -> tuple[npt.NDArray, npt.NDArray]:
        """Return ``(lower, upper)`` bounds of the escape box in ``R^dim``."""
        if np.isscalar(self.box):
            half = float(self.box)
            return -half * np.ones(dim), half * np.ones(dim)
        lower, upper = self.box
        lower = np.broadcast_to(np.asarray(lower, dtype=float), (dim,)).copy()
        upper = np.broadcast_to(np.asarray(upper, dtype=float), (dim,)).copy()
        return lower, upper


@dataclass(frozen=True)
class LatticeOptions(_Options):
    """
    Options of the period lattice search.

    Parameters
    ----------
    s_max : float, optional
        Half-width of the scanned flow-parameter region. The default is ``50.0``.
    grid_step : float, optional
        Grid spacing of the scan along each axis. The default is ``0.1``.
    tol : float, optional
        Acceptance tolerance on ``|Phi_s(z0) - z0|`` after Newton refinement.
        The default is ``1e-9``.
    coarse_factor : float, optional
        Near-return threshold is at least ``coarse_factor * tol``.
        The default is ``1e3``.
    max_newton : int, optional
        Maximum number of Newton iterations per candidate. The default is ``25``.
    full_grid : bool | None, optional
        Scan coordinate planes of the parameter space after the axis scans.
        ``None`` scans planes for ``n == 2`` always and for ``n == 3`` only
        when the axis scans find fewer than three periods.
    scan_rtol : float, optional
        Relative integration tolerance during the coarse scan. The default is ``1e-8``.
    scan_atol : float, optional
        Absolute integration tolerance during the coarse scan. The default is ``1e-10``.
    membership_tol : float, optional
        Distance below which a candidate is considered a member of the
        lattice generated by the accepted vectors. The default is ``1e-6``.
    cond_limit : float, optional
        Smallest admissible ``sigma_min / sigma_max`` of the Newton Jacobian.
        The default is ``1e-10``.

    """

    s_max: float = 50.0
    grid_step: float = 0.1
    tol: float = 1e-9
    coarse_factor: float = 1e3
    max_newton: int = 25
    full_grid: bool | None = None
    scan_rtol: float = 1e-8
    scan_atol: float = 1e-10
    membership_tol: float = 1e-6
    cond_limit: float = 1e-10

    def __post_init__(self):
        _check_positive(
            s_max=self.s_max,
            grid_step=self.grid_step,
            tol=self.tol,
            coarse_factor=self.coarse_factor,
            scan_rtol=self.scan_rtol,
            scan_atol=self.scan_atol,
            membership_tol=self.membership_tol,
            cond_limit=self.cond_limit,
        )
        if self.grid_step >= self.s_max:
            raise ValueError("grid_step must be smaller than s_max")


@dataclass(frozen=True)
class ChartOptions(_Options):
    """
    Options of the chart construction.

    Parameters
    ----------
    grid_resolution : int | tuple[int, ...], optional
        Number of section nodes per axis of the level box. The default is ``9``.
    section_tol : float, optional
        Tolerance on ``|F(chi(J)) - J|`` at section nodes. The default is ``1e-12``.
    section_maxiter : int, optional
        Maximum Gauss-Newton iterations per node. The default is ``50``.
    newton_tol : float, optional
        Tolerance of the fiber Newton solve in ``to_action_angle``.
        The default is ``1e-9``.
    newton_maxiter : int, optional
        Maximum iterations of fiber and action-map Newton solves.
        The default is ``30``.
    seeds_per_axis : int, optional
        Seeds per lattice direction over one lattice cell. The default is ``6``.
    refine_steps : int, optional
        Fixed number of Newton steps polishing interpolated section points
        and lattice bases off the grid. The default is ``2``.
    closure_tol : float, optional
        Admissible gap of the closed loops used by ``compute_actions``.
        The default is ``1e-6``.
    jump_factor : float, optional
        Adjacent section points may be at most ``jump_factor`` times the
        Gauss-Newton step bound apart. The default is ``4.0``.

    """

    grid_resolution: int | tuple = 9
    section_tol: float = 1e-12
    section_maxiter: int = 50
    newton_tol: float = 1e-9
    newton_maxiter: int = 30
    seeds_per_axis: int = 6
    refine_steps: int = 2
    closure_tol: float = 1e-6
    jump_factor: float = 4.0

    def __post_init__(self):
        _check_positive(
            section_tol=self.section_tol,
            newton_tol=self.newton_tol,
            closure_tol=self.closure_tol,
            jump_factor=self.jump_factor,
        )
        res = np.atleast_1d(self.grid_resolution)
        if np.any(res < 2):
            raise ValueError("grid_resolution must be >= 2 along every axis")
        if self.seeds_per_axis < 1:
            raise ValueError("seeds_per_axis must be >= 1")
        if self.refine_steps < 0:
            raise ValueError("refine_steps must be non-negative")

    def resolution(self, n: int) -> tuple[int, ...]:
        """Return the per-axis grid resolution for ``n`` levels."""
        res = np.atleast_1d(self.grid_resolution).astype(int)
        if res.size == 1:
            res = np.repeat(res, n)
        if res.size != n:
            raise ValueError(f"grid_resolution has {res.size} entries, expected {n}")
        return tuple(int(r) for r in res)


@dataclass(frozen=True)
class GaugeOptions(_Options):
    """
    Options of the least-squares gauge fit.

    Parameters
    ----------
    degree : int, optional
        Degree per variable of the tensor-product Legendre polynomials.
        The default is ``3``.
    level_samples : int, optional
        Sampled levels per axis of the level box. The default is ``3``.
    fiber_samples : int, optional
        Sampled fiber points per fiber axis. The default is ``2``.
    fiber_span : float, optional
        Noncompact fiber coordinates are sampled in ``[-fiber_span, fiber_span]``.
        The default is ``1.0``.
    fd_step : float, optional
        Relative finite-difference step of the pullback. The default is ``1e-5``.

    """

    degree: int = 3
    level_samples: int = 3
    fiber_samples: int = 2
    fiber_span: float = 1.0
    fd_step: float = 1e-5

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        if self.level_samples < 1 or self.fiber_samples < 1:
            raise ValueError("sample counts must be >= 1")
        _check_positive(fiber_span=self.fiber_span, fd_step=self.fd_step)


@dataclass(frozen=True)
class VerifyOptions(_Options):
    """
    Options of the chart verification suite.

    Parameters
    ----------
    samples : int, optional
        Number of sampled chart points. The default is ``8``.
    fd_step : float, optional
        Relative finite-difference step of the pullback. The default is ``1e-5``.
    residual_tol : float, optional
        Admissible canonical-form residual. The default is ``1e-4``.
    integral_tol : float, optional
        Admissible deviation of the first integrals along fibers.
        The default is ``1e-7``.
    fiber_span : float, optional
        Noncompact fiber coordinates are sampled in ``[-fiber_span, fiber_span]``.
        The default is ``1.0``.

    """

    samples: int = 8
    fd_step: float = 1e-5
    residual_tol: float = 1e-4
    integral_tol: float = 1e-7
    fiber_span: float = 1.0

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        _check_positive(
            fd_step=self.fd_step,
            residual_tol=self.residual_tol,
            integral_tol=self.integral_tol,
            fiber_span=self.fiber_span,
        )


@dataclass(frozen=True)
class EmitOptions(_Options):
    """
    Options of the CSV data series.

    Parameters
    ----------
    orbit_points : int, optional
        Samples of the orbit trace. The default is ``200``.
    orbit_action : int | None, optional
        Index of the action whose Hamiltonian flow is traced. The default
        traces the first compact action, or the first action when the
        fiber has no compact directions.
    orbit_time : float, optional
        Flow time of the orbit trace; ``2 pi`` is one full turn of an
        angle. The default is ``2 pi``.
    levels : int, optional
        Levels per axis of the action curves. The default is ``21``.
    residual_samples : int, optional
        Sampled chart points of the residual map. The default is ``8``.

    """

    orbit_points: int = 200
    orbit_action: int | None = None
    orbit_time: float = 2 * np.pi
    levels: int = 21
    residual_samples: int = 8

    def __post_init__(self):
        if self.orbit_points < 2 or self.levels < 2:
            raise ValueError("orbit_points and levels must be >= 2")
        if self.residual_samples < 1:
            raise ValueError("residual_samples must be >= 1")
        if self.orbit_action is not None and self.orbit_action < 0:
            raise ValueError("orbit_action must be non-negative")
        _check_positive(orbit_time=self.orbit_time)
