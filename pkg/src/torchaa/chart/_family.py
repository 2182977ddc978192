"""Period lattices continued over the section grid."""

__all__ = ["LatticeFamily", "build_lattice_family"]

import collections
import itertools
import logging

from typing import Callable

import numpy as np
import numpy.typing as npt

from ..base.config import ChartOptions, IntegratorOptions, LatticeOptions
from ..lattice import PeriodLattice, continue_lattice, refine_period
from ..utils import TensorSpline
from ._section import Section, _neighbours

logger = logging.getLogger(__name__)

_CACHE_SIZE = 512


class LatticeFamily:
    """
    Period lattice ``J -> (E(J), C(J))`` over the level box.

    Node bases come from continuation along the section grid. Off the
    grid, the spline of the node bases is polished by a fixed number of
    Newton steps at ``chi(J)``.

    Parameters
    ----------
    section : Section
        Section the lattices are attached to.
    bases : ArrayLike
        Lattice bases of shape ``(r_1, ..., r_n, n, m)``.
    complement : ArrayLike | Callable
        Constant ``(n, n - m)`` complement, or a map ``J -> complement``.
    residuals : ArrayLike, optional
        Node residuals ``|Phi_{e_i}(chi(J)) - chi(J)|``.
    coverage : dict, optional
        Search record of the seed lattice.
    options : LatticeOptions, optional
        Newton options.
    opts : IntegratorOptions, optional
        Integrator options.

    """

    def __init__(
        self,
        section: Section,
        bases: npt.ArrayLike,
        complement: npt.ArrayLike | Callable,
        residuals: npt.ArrayLike | None = None,
        coverage: dict | None = None,
        options: LatticeOptions | None = None,
        opts: IntegratorOptions | None = None,
    ):
        self.section = section
        self.system = section.system
        self.bases = np.asarray(bases, dtype=float)
        if self.bases.shape[: section.n + 1] != section.shape + (section.n,):
            raise ValueError(f"lattice bases of shape {self.bases.shape} do not match the section grid")
        self.residuals = (
            np.zeros(section.shape + (self.rank,)) if residuals is None else np.asarray(residuals, dtype=float)
        )
        self.complement = complement
        self.coverage = coverage or {}
        self.options = options or LatticeOptions()
        self.opts = opts or IntegratorOptions()
        self._spline = TensorSpline(section.axes, self.bases) if self.rank else None
        self._cache = collections.OrderedDict()

    @property
    def n(self) -> int:
        return self.section.n

    @property
    def rank(self) -> int:
        return self.bases.shape[-1]

    @property
    def frozen_complement(self) -> npt.NDArray[float]:
        """Complement at the seed node; defines the noncompact actions."""
        return self.complement_at(self.section.node(self.section.seed_node))

    def complement_at(self, J: npt.ArrayLike) -> npt.NDArray[float]:
        if callable(self.complement):
            out = self.complement(np.asarray(J, dtype=float))
        else:
            out = self.complement
        return np.asarray(out, dtype=float).reshape(self.n, self.n - self.rank)

    def __call__(self, J: npt.ArrayLike, z: npt.ArrayLike | None = None) -> PeriodLattice:
        """
        Lattice at level ``J``.

        Parameters
        ----------
        J : ArrayLike
            Level value in ``V``.
        z : ArrayLike, optional
            Base point ``chi(J)`` if already known.

        Returns
        -------
        PeriodLattice
            Lattice based at ``chi(J)``.

        """
        J = np.asarray(J, dtype=float).reshape(-1)
        key = J.tobytes()
        if key in self._cache:
            self._cache.move_to_end(key)
            return self._cache[key]

        z = self.section(J) if z is None else np.asarray(z, dtype=float)
        basis = np.zeros((self.n, 0))
        residuals = []
        if self.rank:
            basis = np.array(self._spline(J))
            for i in range(self.rank):
                basis[:, i], residual, _ = refine_period(
                    self.system, z, basis[:, i], self.options, self.opts, steps=self.section.options.refine_steps
                )
                residuals.append(residual)
        lattice = PeriodLattice(basis, self.complement_at(J), z, J, residuals, self.coverage)

        self._cache[key] = lattice
        if len(self._cache) > _CACHE_SIZE:
            self._cache.popitem(last=False)
        return lattice

    def periods(self) -> npt.NDArray[float]:
        """Euclidean lengths ``|e_i|`` at the nodes, shape ``(r_1, ..., r_n, m)``."""
        return np.linalg.norm(self.bases, axis=-2)

    def to_dict(self) -> dict:
        if callable(self.complement):
            raise ValueError("a level-dependent complement cannot be serialized")
        return {
            "rank": self.rank,
            "bases": self.bases.tolist(),
            "complement": np.asarray(self.complement, dtype=float).tolist(),
            "residuals": self.residuals.tolist(),
            "coverage": self.coverage,
        }

    @classmethod
    def from_dict(
        cls,
        section: Section,
        data: dict,
        options: LatticeOptions | None = None,
        opts: IntegratorOptions | None = None,
    ) -> "LatticeFamily":
        n, m = section.n, int(data["rank"])
        bases = np.asarray(data["bases"], dtype=float).reshape(section.shape + (n, m))
        complement = np.asarray(data["complement"], dtype=float).reshape(n, n - m)
        residuals = np.asarray(data["residuals"], dtype=float).reshape(section.shape + (m,))
        return cls(section, bases, complement, residuals, data.get("coverage", {}), options, opts)


def build_lattice_family(
    section: Section,
    lattice: PeriodLattice,
    complement: npt.ArrayLike | Callable | None = None,
    options: LatticeOptions | None = None,
    opts: IntegratorOptions | None = None,
) -> LatticeFamily:
    """
    Continue a seed lattice over every node of the section grid.

    Nodes are visited breadth-first from the seed node, each continued
    from an already visited neighbour.

    Parameters
    ----------
    section : Section
        Section over ``V``.
    lattice : PeriodLattice
        Lattice found at the seed point.
    complement : ArrayLike | Callable, optional
        Complement override. The default is the complement of ``lattice``,
        frozen over ``V``.
    options : LatticeOptions, optional
        Newton options.
    opts : IntegratorOptions, optional
        Integrator options.

    Returns
    -------
    LatticeFamily
        Lattice family over ``V``.

    Raises
    ------
    RankChangeError
        If a lattice vector is lost on the way.

    """
    system = section.system
    shape = section.shape
    m = lattice.rank
    bases = np.zeros(shape + (system.n, m))
    residuals = np.zeros(shape + (m,))
    visited = np.zeros(shape, dtype=bool)

    def node_point(index):
        return lambda J: section.points[index]

    start = section.seed_node
    at = {start: continue_lattice(system, lattice, [section.node(start)], node_point(start), options, opts)}
    queue = collections.deque([start])
    visited[start] = True
    while queue:
        index = queue.popleft()
        for neighbour in _neighbours(index, shape):
            if visited[neighbour]:
                continue
            at[neighbour] = continue_lattice(
                system, at[index], [section.node(neighbour)], node_point(neighbour), options, opts
            )
            visited[neighbour] = True
            queue.append(neighbour)

    for index in itertools.product(*map(range, shape)):
        bases[index] = at[index].basis
        residuals[index] = at[index].residuals

    if complement is None:
        complement = lattice.complement
    family = LatticeFamily(section, bases, complement, residuals, lattice.coverage, options, opts)
    logger.info(
        "lattice continued over %d nodes: rank %d, period range %s",
        int(np.prod(shape)),
        m,
        [[float(p.min()), float(p.max())] for p in np.moveaxis(family.periods(), -1, 0)],
    )
    return family
