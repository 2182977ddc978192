"""Liouville form and its exterior derivative."""

__all__ = ["liouville_form", "liouville_integral", "exterior_derivative"]

from typing import Callable

import numpy as np
import numpy.typing as npt

from scipy.integrate import quad


def liouville_form(z: npt.ArrayLike) -> npt.NDArray[float]:
    """
    Liouville form ``Xi = sum_a p_a dq_a`` at ``z``.

    Parameters
    ----------
    z : ArrayLike
        Phase space point ``(q, p)``.

    Returns
    -------
    np.ndarray
        Covector with ``dq`` components ``p`` and zero ``dp`` components.

    """
    z = np.asarray(z, dtype=float)
    n = z.shape[-1] // 2
    out = np.zeros_like(z)
    out[..., :n] = z[..., n:]
    return out


def liouville_integral(
    curve: Callable | npt.ArrayLike,
    t0: float = 0.0,
    t1: float = 1.0,
    velocity: Callable | None = None,
    step: float = 1e-6,
    epsabs: float = 1e-12,
    epsrel: float = 1e-10,
) -> float:
    """
    Line integral of the Liouville form along a curve.

    Parameters
    ----------
    curve : Callable | ArrayLike
        Either a parametrized curve ``t -> z(t)`` or sampled points of
        shape ``(npoints, 2n)``, integrated exactly along the polygon
        through them.
    t0, t1 : float, optional
        Parameter range of a parametrized curve. The default is ``[0, 1]``.
    velocity : Callable, optional
        Derivative ``t -> z'(t)``. If omitted, central differences with
        relative step ``step`` are used.
    step : float, optional
        Finite-difference step. The default is ``1e-6``.
    epsabs, epsrel : float, optional
        Tolerances of the adaptive quadrature.

    Returns
    -------
    float
        ``int Xi``.

    Examples
    --------
    >>> import numpy as np
    >>> circle = lambda t: np.array([np.cos(t), -np.sin(t)])
    >>> round(liouville_integral(circle, 0.0, 2 * np.pi), 10)
    3.1415926536

    """
    if not callable(curve):
        points = np.asarray(curve, dtype=float)
        n = points.shape[-1] // 2
        dq = np.diff(points[:, :n], axis=0)
        p_mid = 0.5 * (points[1:, n:] + points[:-1, n:])
        return float(np.sum(p_mid * dq))

    if velocity is None:

        def velocity(t):
            h = step * max(1.0, abs(t))
            return (np.asarray(curve(t + h)) - np.asarray(curve(t - h))) / (2 * h)

    def integrand(t):
        return float(liouville_form(curve(t)) @ np.asarray(velocity(t), dtype=float))

    value, _ = quad(integrand, t0, t1, epsabs=epsabs, epsrel=epsrel, limit=200)
    return value


def exterior_derivative(
    form: Callable, z: npt.ArrayLike, step: float = 1e-6
) -> npt.NDArray[float]:
    """
    Exterior derivative of a one-form by central finite differences.

    Parameters
    ----------
    form : Callable
        One-form ``z -> alpha(z)`` (covector components).
    z : ArrayLike
        Evaluation point.
    step : float, optional
        Relative finite-difference step. The default is ``1e-6``.

    Returns
    -------
    np.ndarray
        Antisymmetric matrix ``(d alpha)_ij = d_i alpha_j - d_j alpha_i``.
        For ``alpha = Xi`` this is the canonical matrix ``Omega0``.

    """
    z = np.asarray(z, dtype=float)
    jac = np.empty((z.size, z.size))
    for i in range(z.size):
        h = step * max(1.0, abs(z[i]))
        dz = np.zeros_like(z)
        dz[i] = h
        jac[:, i] = (np.asarray(form(z + dz)) - np.asarray(form(z - dz))) / (2 * h)
    return jac.T - jac
