"""Global section of the level-set fibration over a box of level values."""

__all__ = ["Section", "build_section", "shift_section", "level_box"]

import collections
import itertools
import logging

from typing import Callable

import numpy as np
import numpy.typing as npt

from ..base.config import ChartOptions, IntegratorOptions
from ..base.errors import ChartDomainError, CriticalPointError, NewtonDivergenceError
from ..flow import joint_flow
from ..symplectic import IntegrableSystem, require_regular
from ..utils import TensorSpline

logger = logging.getLogger(__name__)

_REGULAR_TOL = 1e-8


class Section:
    """
    Section ``chi : V -> R^{2n}`` with ``F(chi(J)) = J``.

    Base points are stored on a rectangular grid over the box ``V``.
    Off the grid, ``chi`` is the tensor-product spline of the node points
    followed by a fixed number of Gauss-Newton steps back onto the
    level set.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    box : ArrayLike
        Level box ``V`` of shape ``(n, 2)``, one ``(lower, upper)`` row per axis.
    points : ArrayLike
        Base points of shape ``(r_1, ..., r_n, 2n)``.
    residuals : ArrayLike
        ``|F(chi(J)) - J|`` at the nodes, shape ``(r_1, ..., r_n)``.
    seed_node : tuple[int, ...]
        Grid index the construction started from.
    options : ChartOptions, optional
        Polishing options.

    """

    def __init__(
        self,
        system: IntegrableSystem,
        box: npt.ArrayLike,
        points: npt.ArrayLike,
        residuals: npt.ArrayLike,
        seed_node: tuple[int, ...],
        options: ChartOptions | None = None,
    ):
        self.system = system
        self.box = level_box(box, system.n)
        self.points = np.asarray(points, dtype=float)
        self.residuals = np.asarray(residuals, dtype=float)
        self.seed_node = tuple(int(k) for k in seed_node)
        self.options = options or ChartOptions()
        shape = self.points.shape[:-1]
        if len(shape) != system.n or self.points.shape[-1] != system.dim:
            raise ValueError(f"section points of shape {self.points.shape} do not match n = {system.n}")
        self.axes = [np.linspace(lo, hi, r) for (lo, hi), r in zip(self.box, shape)]
        self._spline = TensorSpline(self.axes, self.points)

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def shape(self) -> tuple[int, ...]:
        """Grid resolution per axis."""
        return self.points.shape[:-1]

    def nodes(self) -> npt.NDArray[float]:
        """Level values at the grid nodes, shape ``(r_1, ..., r_n, n)``."""
        return np.stack(np.meshgrid(*self.axes, indexing="ij"), axis=-1)

    def node(self, index: tuple[int, ...]) -> npt.NDArray[float]:
        """Level value of the grid node ``index``."""
        return np.array([axis[k] for axis, k in zip(self.axes, index)])

    def contains(self, J: npt.ArrayLike, rtol: float = 1e-12) -> bool:
        """Whether ``J`` lies in ``V`` (up to a relative slack)."""
        J = np.asarray(J, dtype=float)
        slack = rtol * np.maximum(1.0, np.abs(self.box).max(axis=1))
        return bool(np.all(J >= self.box[:, 0] - slack) and np.all(J <= self.box[:, 1] + slack))

    def __call__(self, J: npt.ArrayLike) -> npt.NDArray[float]:
        """
        Base point ``chi(J)``.

        Raises
        ------
        ChartDomainError
            If ``J`` is outside ``V``.

        """
        J = np.asarray(J, dtype=float).reshape(-1)
        if J.size != self.n:
            raise ValueError(f"level value must have {self.n} entries, got {J.size}")
        if not self.contains(J):
            raise ChartDomainError(f"level value {J.tolist()} outside the box {self.box.tolist()}")
        z = self._spline(J)
        for _ in range(self.options.refine_steps):
            z = _gauss_newton_step(self.system, z, J)
        return z

    def to_dict(self) -> dict:
        return {
            "box": self.box.tolist(),
            "points": self.points.tolist(),
            "residuals": self.residuals.tolist(),
            "seed_node": list(self.seed_node),
        }

    @classmethod
    def from_dict(cls, system: IntegrableSystem, data: dict, options: ChartOptions | None = None) -> "Section":
        return cls(system, data["box"], data["points"], data["residuals"], data["seed_node"], options)


def level_box(box: npt.ArrayLike, n: int) -> npt.NDArray[float]:
    """
    Validate a level box ``V``.

    Parameters
    ----------
    box : ArrayLike
        ``(lower, upper)`` for ``n = 1`` or one such row per axis.
    n : int
        Number of degrees of freedom.

    Returns
    -------
    np.ndarray
        Box of shape ``(n, 2)``.

    """
    box = np.asarray(box, dtype=float).reshape(-1, 2)
    if box.shape != (n, 2):
        raise ValueError(f"level box must have shape ({n}, 2), got {box.shape}")
    if not np.all(np.isfinite(box)) or np.any(box[:, 1] <= box[:, 0]):
        raise ValueError("level box must be finite and nonempty along every axis")
    return box


def build_section(
    system: IntegrableSystem,
    box: npt.ArrayLike,
    seed: npt.ArrayLike,
    grid_resolution: int | tuple[int, ...] | None = None,
    tol: float | None = None,
    options: ChartOptions | None = None,
) -> Section:
    """
    Build a section over ``V`` by Gauss-Newton continuation from a seed.

    The node closest to ``F(seed)`` is solved first, starting from the
    seed; the other nodes are filled breadth-first, each starting from an
    already solved neighbour. Gauss-Newton steps
    ``z += dF^T (dF dF^T)^{-1} (J - F(z))`` move within the span of the
    gradients, transversally to the level sets.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    box : ArrayLike
        Level box ``V``.
    seed : ArrayLike
        Regular phase space point with ``F(seed)`` in ``V``.
    grid_resolution : int | tuple[int, ...], optional
        Nodes per axis. The default is ``options.grid_resolution``.
    tol : float, optional
        Node tolerance on ``|F(chi(J)) - J|``. The default is ``options.section_tol``.
    options : ChartOptions, optional
        Chart options.

    Returns
    -------
    Section
        Section over ``V``.

    Raises
    ------
    CriticalPointError
        If the seed or a Newton iterate is a critical point of ``F``.
    NewtonDivergenceError
        If a node cannot be solved or jumps away from its neighbour.

    Examples
    --------
    >>> import torchaa
    >>> system = torchaa.symplectic.IntegrableSystem.from_sources(["p1"])
    >>> section = torchaa.chart.build_section(system, [1.0, 2.0], [0.0, 1.5])
    >>> section([1.25])
    array([0.  , 1.25])

    """
    options = options or ChartOptions()
    if grid_resolution is not None:
        options = options.replace(grid_resolution=grid_resolution)
    if tol is not None:
        options = options.replace(section_tol=tol)
    box = level_box(box, system.n)
    seed = np.asarray(seed, dtype=float).reshape(-1)
    if seed.size != system.dim:
        raise ValueError(f"seed must have {system.dim} entries, got {seed.size}")
    require_regular(system, seed, _REGULAR_TOL)
    J0 = system.values(seed)
    if np.any(J0 < box[:, 0]) or np.any(J0 > box[:, 1]):
        raise ChartDomainError(f"F(seed) = {J0.tolist()} is outside the box {box.tolist()}")

    shape = options.resolution(system.n)
    axes = [np.linspace(lo, hi, r) for (lo, hi), r in zip(box, shape)]
    start = tuple(int(np.argmin(np.abs(axis - j))) for axis, j in zip(axes, J0))

    points = np.full(shape + (system.dim,), np.nan)
    residuals = np.full(shape, np.nan)
    points[start], residuals[start] = _solve_node(system, seed, _level(axes, start), start, options)

    queue = collections.deque([start])
    while queue:
        index = queue.popleft()
        for neighbour in _neighbours(index, shape):
            if not np.isnan(residuals[neighbour]):
                continue
            points[neighbour], residuals[neighbour] = _solve_node(
                system, points[index], _level(axes, neighbour), neighbour, options
            )
            queue.append(neighbour)

    logger.info(
        "section built on a %s grid, max node residual %.3e", "x".join(map(str, shape)), residuals.max()
    )
    return Section(system, box, points, residuals, start, options)


def shift_section(
    section: Section,
    offset: Callable[[npt.NDArray[float]], npt.ArrayLike],
    opts: IntegratorOptions | None = None,
) -> Section:
    """
    Move every base point along the fiber: ``chi'(J) = Phi_{offset(J)}(chi(J))``.

    The result is another section of the same fibration; the chart built
    on it differs by a re-trivialization.

    Parameters
    ----------
    section : Section
        Section to shift.
    offset : Callable
        Map ``J -> s`` of flow parameters.
    opts : IntegratorOptions, optional
        Integrator options.

    Returns
    -------
    Section
        Shifted section.

    """
    points = np.empty_like(section.points)
    nodes = section.nodes()
    for index in itertools.product(*map(range, section.shape)):
        points[index] = joint_flow(section.system, section.points[index], offset(nodes[index]), opts)
    residuals = np.abs(
        np.apply_along_axis(section.system.values, -1, points) - nodes
    ).max(axis=-1)
    return Section(section.system, section.box, points, residuals, section.seed_node, section.options)


# %% subroutines
def _level(axes, index):
    return np.array([axis[k] for axis, k in zip(axes, index)])


def _neighbours(index, shape):
    for axis in range(len(shape)):
        for step in (-1, 1):
            k = index[axis] + step
            if 0 <= k < shape[axis]:
                yield index[:axis] + (k,) + index[axis + 1 :]


def _gauss_newton_step(system, z, J):
    F, G = system.jacobian(z)
    return z + G.T @ np.linalg.solve(G @ G.T, J - F)


def _solve_node(system, z, J, node, options):
    start = z.copy()
    F, G = system.jacobian(z)
    sigma = np.linalg.svd(G, compute_uv=False)
    # a Gauss-Newton path from the neighbour is about |dJ| / sigma_min long
    bound = options.jump_factor * max(np.linalg.norm(J - F), options.section_tol) / sigma[-1]

    residual = float(np.linalg.norm(F - J))
    for it in range(options.section_maxiter):
        logger.debug("section node %s, iteration %d: residual %.3e", node, it, residual)
        if residual <= options.section_tol:
            break
        sigma = np.linalg.svd(G, compute_uv=False)
        if sigma[-1] <= _REGULAR_TOL * sigma[0]:
            raise CriticalPointError(z, int(np.sum(sigma > _REGULAR_TOL * sigma[0])))
        z = z + G.T @ np.linalg.solve(G @ G.T, J - F)
        F, G = system.jacobian(z)
        residual = float(np.linalg.norm(F - J))
        if not np.isfinite(residual):
            break

    if not residual <= options.section_tol:
        raise NewtonDivergenceError(node, residual)
    if np.linalg.norm(z - start) > bound:
        raise NewtonDivergenceError(node, residual)
    return z, residual
