"""Action variables from loop integrals of the Liouville form."""

__all__ = ["compute_actions", "ActionMap", "build_action_map"]

import itertools
import logging

import numpy as np
import numpy.typing as npt

from ..base.config import ChartOptions, IntegratorOptions
from ..base.errors import ActionInversionError, ChartDomainError, StaleLatticeError
from ..flow import flow_with_action
from ..symplectic import IntegrableSystem
from ..utils import TensorSpline
from ._family import LatticeFamily
from ._section import Section

logger = logging.getLogger(__name__)


def compute_actions(
    system: IntegrableSystem,
    section: Section,
    lattice_family: LatticeFamily,
    J: npt.ArrayLike,
    opts: IntegratorOptions | None = None,
    closure_tol: float | None = None,
) -> npt.NDArray[float]:
    """
    Action variables at the level ``J``.

    Compact actions are ``I_i = A_i / 2 pi`` where ``A_i`` is the
    integral of ``p dq`` along the closed loop ``t -> Phi_{t e_i}(chi(J))``,
    ``t in [0, 1]``. Noncompact actions are ``I_a = <c_a, J>`` with the
    complement frozen at the seed node, i.e. ``I_a = J_a`` for axis
    complements.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    section : Section
        Section over ``V``.
    lattice_family : LatticeFamily
        Lattice family over ``V``.
    J : ArrayLike
        Level value in ``V``.
    opts : IntegratorOptions, optional
        Integrator options.
    closure_tol : float, optional
        Admissible loop gap. The default is ``ChartOptions().closure_tol``.

    Returns
    -------
    np.ndarray
        Actions ``(I_a, I_i)``, noncompact first.

    Raises
    ------
    StaleLatticeError
        If a loop does not close within ``closure_tol``.

    Examples
    --------
    >>> import torchaa
    >>> entry = torchaa.catalog.catalog_get("sho(2)")
    >>> chart = torchaa.chart.build_chart(entry.system, entry.box, entry.seed)
    >>> I = torchaa.chart.compute_actions(entry.system, chart.section, chart.family, [1.0])
    >>> round(float(I[0]), 8)
    0.5

    """
    closure_tol = ChartOptions().closure_tol if closure_tol is None else closure_tol
    J = np.asarray(J, dtype=float).reshape(-1)
    z0 = section(J)
    lattice = lattice_family(J, z0)
    noncompact = lattice_family.frozen_complement.T @ J

    compact = np.zeros(lattice.rank)
    for i in range(lattice.rank):
        z1, area = flow_with_action(system, lattice.basis[:, i], z0, 1.0, opts)
        gap = float(np.linalg.norm(z1 - z0))
        if gap > closure_tol:
            raise StaleLatticeError(gap)
        compact[i] = area / (2 * np.pi)
    return np.concatenate([noncompact, compact])


class ActionMap:
    """
    Interpolated action map ``J -> I(J)`` and its inverse.

    Parameters
    ----------
    axes : list[ArrayLike]
        Grid nodes per axis of ``V``.
    values : ArrayLike
        Actions at the nodes, shape ``(r_1, ..., r_n, n)``.
    options : ChartOptions, optional
        Newton options of the inversion.

    """

    def __init__(self, axes: list[npt.ArrayLike], values: npt.ArrayLike, options: ChartOptions | None = None):
        self.axes = [np.asarray(x, dtype=float) for x in axes]
        self.values = np.asarray(values, dtype=float)
        self.options = options or ChartOptions()
        self._spline = TensorSpline(self.axes, self.values)
        self.box = np.stack([self._spline.lower, self._spline.upper], axis=1)

    @property
    def n(self) -> int:
        return len(self.axes)

    def __call__(self, J: npt.ArrayLike) -> npt.NDArray[float]:
        return self._spline(J)

    def jacobian(self, J: npt.ArrayLike) -> npt.NDArray[float]:
        """``dI/dJ`` with rows indexed by actions, shape ``(..., n, n)``."""
        return self._spline.gradient(J)

    def inverse(self, I: npt.ArrayLike) -> npt.NDArray[float]:
        """
        Level value ``J`` with ``I(J) = I``.

        Raises
        ------
        ChartDomainError
            If ``I`` is outside the image of ``V``.
        ActionInversionError
            If the Newton iteration fails.

        """
        I = np.asarray(I, dtype=float).reshape(-1)
        if I.size != self.n:
            raise ValueError(f"actions must have {self.n} entries, got {I.size}")
        nodes = np.stack(np.meshgrid(*self.axes, indexing="ij"), axis=-1).reshape(-1, self.n)
        distance = np.linalg.norm(self.values.reshape(-1, self.n) - I, axis=-1)
        J = nodes[np.argmin(distance)].copy()

        scale = np.maximum(1.0, np.abs(self.box).max(axis=1))
        eps = 4 * np.finfo(float).eps
        for _ in range(self.options.newton_maxiter + 20):
            try:
                dJ = np.linalg.solve(self.jacobian(J), I - self(J))
            except np.linalg.LinAlgError as err:
                raise ActionInversionError(f"singular action Jacobian at J = {J.tolist()}") from err
            J = J + dJ
            if np.all(np.abs(dJ) <= eps * scale):
                break
        residual = float(np.max(np.abs(self(J) - I)))
        if not residual <= 1e-10 * max(1.0, float(np.abs(I).max())):
            raise ActionInversionError(f"action inversion did not converge (residual {residual:.3g})")
        slack = 1e-9 * scale
        if np.any(J < self.box[:, 0] - slack) or np.any(J > self.box[:, 1] + slack):
            raise ChartDomainError(f"actions {I.tolist()} are outside the image of the level box")
        return np.clip(J, self.box[:, 0], self.box[:, 1])

    def check_invertible(self, cond_limit: float = 1e-10) -> float:
        """
        Check ``dI/dJ`` on the grid nodes.

        Returns
        -------
        float
            Smallest ``sigma_min / sigma_max`` over the nodes.

        Raises
        ------
        ActionInversionError
            If the determinant changes sign or the Jacobian is singular.

        """
        nodes = np.stack(np.meshgrid(*self.axes, indexing="ij"), axis=-1).reshape(-1, self.n)
        jac = self.jacobian(nodes)
        sign, _ = np.linalg.slogdet(jac)
        sigma = np.linalg.svd(jac, compute_uv=False)
        ratio = float(np.min(sigma[:, -1] / sigma[:, 0]))
        if np.any(sign == 0) or np.any(sign != sign[0]) or ratio < cond_limit:
            raise ActionInversionError(
                f"action map is not invertible on the level box (min sigma ratio {ratio:.3g})"
            )
        return ratio

    def to_dict(self) -> dict:
        return {"values": self.values.tolist()}


def build_action_map(
    section: Section,
    lattice_family: LatticeFamily,
    options: ChartOptions | None = None,
    opts: IntegratorOptions | None = None,
) -> ActionMap:
    """Compute the actions on every section node and interpolate them."""
    options = options or section.options
    values = np.zeros(section.shape + (section.n,))
    for index in itertools.product(*map(range, section.shape)):
        values[index] = compute_actions(
            section.system, section, lattice_family, section.node(index), opts, options.closure_tol
        )
    action_map = ActionMap(section.axes, values, options)
    ratio = action_map.check_invertible()
    logger.info(
        "actions computed on %d nodes, range %s, min dI/dJ sigma ratio %.3g",
        values[..., 0].size,
        [[float(v.min()), float(v.max())] for v in np.moveaxis(values, -1, 0)],
        ratio,
    )
    return action_map
