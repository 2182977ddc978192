"""Reduction and canonical form of period lattice bases."""

__all__ = [
    "gauss_reduce",
    "greedy_reduce",
    "reduce_basis",
    "lattice_from_generators",
    "canonicalize",
    "is_member",
    "axis_complement",
]

import logging

import numpy as np
import numpy.typing as npt

from ..base.errors import LatticeError

logger = logging.getLogger(__name__)

MAX_ITER = 10000


def gauss_reduce(
    u: npt.NDArray[float], v: npt.NDArray[float]
) -> tuple[npt.NDArray[float], npt.NDArray[float]]:
    """
    Lagrange-Gauss reduction of a two-dimensional lattice basis.

    Returns
    -------
    u, v : np.ndarray
        Reduced basis with ``|u| <= |v|`` and ``|<u, v>| <= |u|^2 / 2``.

    """
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    if u @ u > v @ v:
        u, v = v, u
    for _ in range(MAX_ITER):
        k = np.round((u @ v) / (u @ u))
        v = v - k * u
        if v @ v >= u @ u:
            return u, v
        u, v = v, u
    raise LatticeError(f"Gauss reduction did not terminate after {MAX_ITER} iterations")


def greedy_reduce(basis: npt.NDArray[float]) -> npt.NDArray[float]:
    """
    Pairwise greedy near-orthogonalization of a lattice basis.

    Each vector is shortened by integer multiples of the others until no
    pairwise step reduces its length.

    Parameters
    ----------
    basis : np.ndarray
        Basis vectors as columns.

    Returns
    -------
    np.ndarray
        Reduced basis, columns sorted by length.

    """
    basis = np.array(basis, dtype=float)
    m = basis.shape[1]
    for _ in range(MAX_ITER):
        changed = False
        for i in range(m):
            for j in range(m):
                if i == j:
                    continue
                bj = basis[:, j]
                k = np.round((basis[:, i] @ bj) / (bj @ bj))
                if k == 0:
                    continue
                candidate = basis[:, i] - k * bj
                if candidate @ candidate < basis[:, i] @ basis[:, i] * (1 - 1e-12):
                    basis[:, i] = candidate
                    changed = True
        if not changed:
            order = np.argsort(np.linalg.norm(basis, axis=0), kind="stable")
            return basis[:, order]
    raise LatticeError(f"greedy reduction did not terminate after {MAX_ITER} iterations")


def reduce_basis(basis: npt.NDArray[float]) -> npt.NDArray[float]:
    """
    Reduce a lattice basis: Gauss-Lagrange for rank 2, greedy for rank 3.

    Parameters
    ----------
    basis : np.ndarray
        Basis vectors as columns, shape ``(n, m)``.

    Returns
    -------
    np.ndarray
        Reduced basis of the same lattice.

    """
    basis = np.asarray(basis, dtype=float)
    m = basis.shape[1]
    if m <= 1:
        return basis.copy()
    if m == 2:
        u, v = gauss_reduce(basis[:, 0], basis[:, 1])
        return np.stack([u, v], axis=1)
    return greedy_reduce(basis)


def lattice_from_generators(
    generators: list[npt.NDArray[float]], tol: float = 1e-6
) -> npt.NDArray[float]:
    """
    Extract a basis from a (possibly redundant) generating set.

    Generators are shortened against each other by integer steps until
    the redundant ones vanish, as in the Euclidean algorithm.

    Parameters
    ----------
    generators : list[np.ndarray]
        Lattice vectors.
    tol : float, optional
        Vectors shorter than ``tol`` are dropped. The default is ``1e-6``.

    Returns
    -------
    np.ndarray
        Basis vectors as columns, shape ``(n, m)``.

    """
    vectors = [np.asarray(g, dtype=float) for g in generators if np.linalg.norm(g) > tol]
    if not vectors:
        return np.zeros((0, 0))
    n = vectors[0].size
    rank = np.linalg.matrix_rank(np.stack(vectors, axis=1), tol=tol)

    for _ in range(MAX_ITER):
        vectors.sort(key=lambda v: float(v @ v))
        changed = False
        for i in range(1, len(vectors)):
            for j in range(i):
                vj = vectors[j]
                k = np.round((vectors[i] @ vj) / (vj @ vj))
                if k != 0:
                    vectors[i] = vectors[i] - k * vj
                    changed = True
        vectors = [v for v in vectors if np.linalg.norm(v) > tol]
        if len(vectors) <= rank or not changed:
            break

    if len(vectors) > rank:
        logger.warning(
            "generating set did not collapse to a basis; keeping the %d shortest independent vectors",
            rank,
        )
        vectors = _independent_subset(vectors, rank, tol)
    return np.stack(vectors, axis=1).reshape(n, -1)


def canonicalize(basis: npt.NDArray[float]) -> npt.NDArray[float]:
    """
    Order basis vectors by dominant axis and make dominant components positive.

    Parameters
    ----------
    basis : np.ndarray
        Basis vectors as columns.

    Returns
    -------
    np.ndarray
        Canonical basis.

    """
    basis = np.array(basis, dtype=float)
    if basis.size == 0:
        return basis
    dominant = np.argmax(np.abs(basis), axis=0)
    signs = np.sign(basis[dominant, np.arange(basis.shape[1])])
    basis = basis * np.where(signs == 0, 1.0, signs)
    order = np.lexsort((np.linalg.norm(basis, axis=0), dominant))
    return basis[:, order]


def is_member(basis: npt.NDArray[float], s: npt.ArrayLike, tol: float) -> bool:
    """Whether ``s`` lies within ``tol`` of the lattice spanned by ``basis``."""
    s = np.asarray(s, dtype=float)
    if basis.size == 0:
        return bool(np.linalg.norm(s) <= tol)
    coeffs, *_ = np.linalg.lstsq(basis, s, rcond=None)
    return bool(np.linalg.norm(basis @ np.round(coeffs) - s) <= tol)


def axis_complement(basis: npt.NDArray[float], n: int) -> npt.NDArray[float]:
    """
    Complete a lattice span to a basis of ``R^n`` with coordinate axes.

    Axes are tried in order and kept when they increase the rank.

    Parameters
    ----------
    basis : np.ndarray
        Lattice basis as columns, shape ``(n, m)``.
    n : int
        Ambient dimension.

    Returns
    -------
    np.ndarray
        Complement as columns, shape ``(n, n - m)``.

    """
    basis = np.asarray(basis, dtype=float)
    if basis.size == 0:
        basis = np.zeros((n, 0))
    frame = basis
    chosen = []
    for k in range(n):
        if len(chosen) == n - basis.shape[1]:
            break
        axis = np.eye(n)[:, k]
        trial = np.column_stack([frame, axis])
        if np.linalg.matrix_rank(trial, tol=1e-8) == trial.shape[1]:
            frame = trial
            chosen.append(axis)
    return np.stack(chosen, axis=1) if chosen else np.zeros((n, 0))


# %% subroutines
def _independent_subset(vectors, rank, tol):
    out = []
    for v in sorted(vectors, key=lambda v: float(v @ v)):
        trial = np.stack(out + [v], axis=1)
        if np.linalg.matrix_rank(trial, tol=tol) == len(out) + 1:
            out.append(v)
        if len(out) == rank:
            break
    return out
