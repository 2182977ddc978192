"""Period lattice of the joint flow on a level set."""

__all__ = [
    "PeriodLattice",
    "find_period_lattice",
    "continue_lattice",
    "complement_clearance",
]

import logging

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import numpy.typing as npt

from ..base.config import IntegratorOptions, LatticeOptions
from ..base.errors import NoReturnsFoundError, RankChangeError
from ..flow import joint_flow, trajectory
from ..symplectic import IntegrableSystem, require_regular
from ._newton import refine_period
from ._reduce import axis_complement, canonicalize, is_member, lattice_from_generators, reduce_basis
from ._scan import axis_scan, near_return_threshold, plane_scan

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PeriodLattice:
    """
    Isotropy lattice ``Z^m`` of the ``R^n`` action at a base point.

    Attributes
    ----------
    basis : np.ndarray
        Lattice basis ``e_1..e_m`` as columns, shape ``(n, m)``.
    complement : np.ndarray
        Complement ``c_1..c_{n-m}`` as columns, shape ``(n, n - m)``,
        spanning the noncompact directions.
    base_point : np.ndarray
        Point ``z0`` the lattice was computed at.
    level : np.ndarray
        Level value ``F(z0)``.
    residuals : np.ndarray
        ``|Phi_{e_i}(z0) - z0|`` for each basis vector.
    coverage : dict
        Search record: scanned extents, threshold, candidate counts and
        the refined returns.

    """

    basis: npt.NDArray[float]
    complement: npt.NDArray[float]
    base_point: npt.NDArray[float]
    level: npt.NDArray[float]
    residuals: npt.NDArray[float]
    coverage: dict = field(default_factory=dict)

    def __post_init__(self):
        n = np.asarray(self.level).size
        basis = _columns(self.basis, n)
        complement = _columns(self.complement, n)
        if basis.shape[1] + complement.shape[1] != n:
            raise ValueError("lattice basis and complement must together have n vectors")
        frame = np.hstack([complement, basis])
        if n and np.linalg.matrix_rank(frame) < n:
            raise ValueError("lattice basis and complement do not span R^n")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "complement", complement)
        object.__setattr__(self, "base_point", np.asarray(self.base_point, dtype=float))
        object.__setattr__(self, "level", np.asarray(self.level, dtype=float))
        object.__setattr__(self, "residuals", np.asarray(self.residuals, dtype=float).reshape(-1))

    @property
    def n(self) -> int:
        return self.level.size

    @property
    def rank(self) -> int:
        """Number ``m`` of compact directions."""
        return self.basis.shape[1]

    @property
    def frame(self) -> npt.NDArray[float]:
        """Matrix ``[C, E]`` (noncompact directions first)."""
        return np.hstack([self.complement, self.basis])

    def dual_basis(self) -> npt.NDArray[float]:
        """
        Rows of ``[C, E]^{-1}``.

        The first ``n - m`` rows are the complement duals ``c^{a*}``,
        the last ``m`` rows the lattice duals ``e^{i*}``.
        """
        return np.linalg.inv(self.frame)

    def decompose(self, s: npt.ArrayLike) -> tuple[npt.NDArray[float], npt.NDArray[float]]:
        """
        Split flow parameters as ``s = C x + E phi / 2 pi``.

        Returns
        -------
        x : np.ndarray
            Noncompact coordinates.
        phi : np.ndarray
            Raw angles (not reduced modulo ``2 pi``).

        """
        coeffs = np.linalg.solve(self.frame, np.asarray(s, dtype=float))
        k = self.n - self.rank
        return coeffs[:k], 2 * np.pi * coeffs[k:]

    def compose(self, x: npt.ArrayLike, phi: npt.ArrayLike) -> npt.NDArray[float]:
        """Inverse of :meth:`decompose`."""
        x = np.asarray(x, dtype=float).reshape(-1)
        phi = np.asarray(phi, dtype=float).reshape(-1)
        return self.complement @ x + self.basis @ phi / (2 * np.pi)

    def contains(self, s: npt.ArrayLike, tol: float = 1e-6) -> bool:
        """Whether ``s`` is a lattice vector within ``tol``."""
        return is_member(self.basis, s, tol)

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "basis": self.basis.T.tolist(),
            "complement": self.complement.T.tolist(),
            "base_point": self.base_point.tolist(),
            "level": self.level.tolist(),
            "residuals": self.residuals.tolist(),
            "coverage": self.coverage,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PeriodLattice":
        n = len(data["level"])
        return cls(
            np.asarray(data["basis"], dtype=float).reshape(-1, n).T,
            np.asarray(data["complement"], dtype=float).reshape(-1, n).T,
            data["base_point"],
            data["level"],
            data["residuals"],
            data.get("coverage", {}),
        )


def find_period_lattice(
    system: IntegrableSystem,
    z0: npt.ArrayLike,
    options: LatticeOptions | None = None,
    opts: IntegratorOptions | None = None,
    expected_rank: int | None = None,
    complement: npt.ArrayLike | None = None,
) -> PeriodLattice:
    """
    Detect the period lattice of the joint flow through ``z0``.

    Near-returns ``|Phi_s(z0) - z0|`` below the coarse threshold are
    collected on axis scans (and coordinate-plane scans, see
    ``LatticeOptions.full_grid``), refined by Newton iteration, and
    accepted in order of increasing ``|s|`` if the refined residual is
    below ``options.tol`` and ``s`` is not already a lattice vector. The
    generators are reduced to a canonical basis.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    z0 : ArrayLike
        Regular base point.
    options : LatticeOptions, optional
        Search options (``s_max``, ``grid_step``, ``tol``, ...).
    opts : IntegratorOptions, optional
        Integrator options for Newton refinement.
    expected_rank : int, optional
        Raise if fewer lattice vectors are found.
    complement : ArrayLike, optional
        Complement vectors as columns. The default completes the lattice
        span with coordinate axes.

    Returns
    -------
    PeriodLattice
        Lattice with search coverage. A rank-0 result is a normal return.

    Raises
    ------
    CriticalPointError
        If ``z0`` is not regular.
    NoReturnsFoundError
        If ``expected_rank`` is given and not reached.
    IllConditionedError
        If a Newton Jacobian is nearly singular.

    Examples
    --------
    >>> import torchaa
    >>> entry = torchaa.catalog.catalog_get("sho(2)")
    >>> lattice = torchaa.lattice.find_period_lattice(entry.system, [1.0, 0.0])
    >>> lattice.rank
    1

    """
    options = options or LatticeOptions()
    opts = opts or IntegratorOptions()
    z0 = np.asarray(z0, dtype=float)
    require_regular(system, z0)
    n = system.n
    level = system.values(z0)
    threshold = near_return_threshold(system, z0, options)

    # axis scans
    scans = [axis_scan(system, z0, axis, threshold, options, opts) for axis in range(n)]
    candidates = [s for scan in scans for s in scan.candidates]
    coverage = {
        "s_max": options.s_max,
        "grid_step": options.grid_step,
        "threshold": threshold,
        "axes": [float(scan.covered) for scan in scans],
        "planes": [],
    }
    generators, returns, n_refined = _accept(system, z0, candidates, [], options, opts)

    # plane scans
    run_planes = options.full_grid
    if run_planes is None:
        run_planes = n == 2 or (n == 3 and _rank(generators) < 3)
    if run_planes and n >= 2:
        extra = []
        for lam in range(n):
            for mu in range(lam + 1, n):
                plane = plane_scan(
                    system, z0, (lam, mu), scans[lam].trajectory, threshold, options, opts
                )
                coverage["planes"].append({"axes": [lam, mu], "extent": list(plane.extent)})
                extra.extend(plane.candidates)
        candidates.extend(extra)
        generators, more, count = _accept(system, z0, extra, generators, options, opts)
        returns.extend(more)
        n_refined += count

    if generators:
        basis = canonicalize(reduce_basis(lattice_from_generators(generators, options.membership_tol)))
    else:
        basis = np.zeros((n, 0))
    m = basis.shape[1]
    coverage.update(
        {
            "candidates": len(candidates),
            "refined": n_refined,
            "returns": [s.tolist() for s in returns],
        }
    )

    if complement is None:
        complement = axis_complement(basis, n)
    residuals = [_residual(system, z0, basis[:, i], opts) for i in range(m)]
    lattice = PeriodLattice(basis, complement, z0, level, residuals, coverage)
    logger.info(
        "period lattice at J = %s: rank %d, basis %s", np.round(level, 6).tolist(), m, basis.T.tolist()
    )

    if expected_rank is not None and m < expected_rank:
        raise NoReturnsFoundError(
            f"found {m} lattice vectors, expected {expected_rank} "
            f"(scanned s_max = {options.s_max}, grid_step = {options.grid_step})",
            coverage,
        )
    return lattice


def continue_lattice(
    system: IntegrableSystem,
    lattice: PeriodLattice,
    path: npt.ArrayLike,
    section: Callable,
    options: LatticeOptions | None = None,
    opts: IntegratorOptions | None = None,
) -> PeriodLattice:
    """
    Track a period lattice along a path of level values.

    Each basis vector is refined by Newton iteration at the base point
    ``section(J)`` of every path point, starting from its value at the
    previous point. The complement is kept frozen.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    lattice : PeriodLattice
        Lattice at the start of the path.
    path : ArrayLike
        Level values ``J0 -> J1``, shape ``(npoints, n)``; the first point
        may be the level of ``lattice``.
    section : Callable
        Base point map ``J -> chi(J)``.
    options : LatticeOptions, optional
        Newton options.
    opts : IntegratorOptions, optional
        Integrator options.

    Returns
    -------
    PeriodLattice
        Lattice at the last path point.

    Raises
    ------
    RankChangeError
        If a basis vector cannot be refined, or the basis degenerates.

    """
    options = options or LatticeOptions()
    path = np.atleast_2d(np.asarray(path, dtype=float))
    basis = lattice.basis.copy()
    z, level = lattice.base_point, lattice.level
    residuals = lattice.residuals

    for J in path:
        if np.array_equal(J, level):
            continue
        z = np.asarray(section(J), dtype=float)
        level = J
        residuals = []
        for i in range(lattice.rank):
            s, residual, converged = refine_period(system, z, basis[:, i], options, opts)
            if not converged:
                raise RankChangeError(J, lattice.rank, f"basis vector {i + 1} lost (residual {residual:.3g})")
            basis[:, i] = s
            residuals.append(residual)
        if lattice.rank and np.linalg.matrix_rank(basis, tol=options.membership_tol) < lattice.rank:
            raise RankChangeError(J, lattice.rank, "basis vectors became dependent")

    logger.debug("continued lattice to J = %s: basis %s", level.tolist(), basis.T.tolist())
    return PeriodLattice(basis, lattice.complement, z, level, residuals, lattice.coverage)


def complement_clearance(
    system: IntegrableSystem,
    lattice: PeriodLattice,
    samples: int = 200,
    options: LatticeOptions | None = None,
    opts: IntegratorOptions | None = None,
) -> npt.NDArray[float]:
    """
    Check that no hidden periods lie along the complement directions.

    Parameters
    ----------
    system : IntegrableSystem
        Integrable system.
    lattice : PeriodLattice
        Lattice to check.
    samples : int, optional
        Number of samples of ``t in (0, s_max]``. The default is ``200``.
    options : LatticeOptions, optional
        Provides ``s_max``.
    opts : IntegratorOptions, optional
        Integrator options.

    Returns
    -------
    np.ndarray
        For each complement vector ``c_a``, the smallest distance
        ``|Phi_{t c_a}(z0) - z0|`` over ``t in [s_max / samples, s_max]``
        (sampling stops where the flow leaves the bounding box).

    """
    options = options or LatticeOptions()
    z0 = lattice.base_point
    t = options.s_max * np.arange(1, samples + 1) / samples
    out = []
    for a in range(lattice.complement.shape[1]):
        traj = trajectory(system, lattice.complement[:, a], z0, options.s_max, opts)
        tk = t[t <= traj.t_end]
        if tk.size == 0:
            out.append(np.inf)
            continue
        out.append(float(np.min(np.linalg.norm(traj(tk) - z0, axis=-1))))
    return np.asarray(out)


# %% subroutines
def _rank(generators) -> int:
    if not generators:
        return 0
    return int(np.linalg.matrix_rank(np.stack(generators, axis=1), tol=1e-6))


def _accept(system, z0, candidates, generators, options, opts):
    generators = list(generators)
    basis = _basis(generators, options)
    returns = []
    n_refined = 0
    order = sorted(range(len(candidates)), key=lambda k: (float(np.linalg.norm(candidates[k])), tuple(candidates[k])))
    for k in order:
        s0 = candidates[k]
        if basis.size and is_member(basis, s0, 2 * options.grid_step * np.sqrt(s0.size)):
            continue
        n_refined += 1
        s, residual, converged = refine_period(system, z0, s0, options, opts)
        if not converged or np.linalg.norm(s) < 0.5 * options.grid_step:
            logger.debug("rejected candidate %s (residual %.3g)", s0.tolist(), residual)
            continue
        returns.append(s)
        if is_member(basis, s, options.membership_tol):
            continue
        generators.append(s)
        basis = _basis(generators, options)
        logger.debug("accepted lattice vector %s (residual %.3g)", s.tolist(), residual)
    return generators, returns, n_refined


def _basis(generators, options):
    if not generators:
        return np.zeros((0, 0))
    return lattice_from_generators(generators, options.membership_tol)


def _residual(system, z0, s, opts):
    return float(np.linalg.norm(joint_flow(system, z0, s, opts) - z0))


def _columns(vectors, n) -> npt.NDArray[float]:
    if np.size(vectors) == 0:
        return np.zeros((n, 0))
    return np.asarray(vectors, dtype=float).reshape(n, -1)
