"""Tensor-product spline interpolation on rectangular grids."""

__all__ = ["TensorSpline"]

import numpy as np
import numpy.typing as npt

from scipy.interpolate import NdBSpline, make_interp_spline


class TensorSpline:
    """
    Interpolating tensor-product B-spline over a rectangular grid.

    Each axis uses degree ``min(3, nodes - 1)``, i.e. cubic
    interpolation when at least four nodes are available.

    Parameters
    ----------
    axes : list[npt.ArrayLike]
        Strictly increasing grid nodes along each of the ``d`` axes.
    values : npt.ArrayLike
        Data of shape ``(r_1, ..., r_d, *trailing)``.

    """

    def __init__(self, axes: list[npt.ArrayLike], values: npt.ArrayLike):
        self.axes = [np.asarray(x, dtype=float) for x in axes]
        values = np.asarray(values, dtype=float)
        d = len(self.axes)
        if values.shape[:d] != tuple(x.size for x in self.axes):
            raise ValueError(
                f"values of shape {values.shape} do not match the grid {[x.size for x in self.axes]}"
            )
        self.trailing = values.shape[d:]

        # separable interpolation: solve one axis at a time
        coeffs, knots, degrees = values, [], []
        for k, x in enumerate(self.axes):
            degree = min(3, x.size - 1)
            spline = make_interp_spline(x, np.moveaxis(coeffs, k, 0), k=degree)
            coeffs = np.moveaxis(spline.c, 0, k)
            knots.append(spline.t)
            degrees.append(degree)
        self._spline = NdBSpline(tuple(knots), np.ascontiguousarray(coeffs), tuple(degrees), extrapolate=True)

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def lower(self) -> npt.NDArray[float]:
        return np.array([x[0] for x in self.axes])

    @property
    def upper(self) -> npt.NDArray[float]:
        return np.array([x[-1] for x in self.axes])

    def __call__(self, x: npt.ArrayLike, nu: npt.ArrayLike | None = None) -> npt.NDArray[float]:
        """
        Evaluate the spline (or a partial derivative) at ``x``.

        Parameters
        ----------
        x : ArrayLike
            Points of shape ``(..., d)``.
        nu : ArrayLike, optional
            Derivative order along each axis.

        Returns
        -------
        np.ndarray
            Values of shape ``(..., *trailing)``.

        """
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        out = self._spline(np.atleast_2d(x), nu=None if nu is None else np.asarray(nu, dtype=int))
        return out[0] if single else out

    def gradient(self, x: npt.ArrayLike) -> npt.NDArray[float]:
        """
        Partial derivatives at ``x``.

        Returns
        -------
        np.ndarray
            Shape ``(..., *trailing, d)``.

        """
        eye = np.eye(self.ndim, dtype=int)
        return np.stack([self(x, nu=eye[k]) for k in range(self.ndim)], axis=-1)
