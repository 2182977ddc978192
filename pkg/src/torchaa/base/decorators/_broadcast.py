"""Automatic point batching"""

__all__ = ["broadcast"]

from functools import wraps
from typing import Callable

import torch


def broadcast(func: Callable) -> Callable:
    """
    Flatten the leading batch axes of a point array before calling ``func``.

    The decorated function receives its first tensor argument with shape
    ``(npoints, ndim)`` and must return tensors with ``npoints`` leading
    entries; outputs are reshaped back to the original batch shape. A single
    point of shape ``(ndim,)`` is treated as a batch of one and squeezed.
    """

    @wraps(func)
    def wrapper(points, *args, **kwargs):
        points = torch.as_tensor(points)
        single = points.ndim == 1
        shape = points.shape[:-1]

        # flatten
        points = torch.atleast_2d(points).reshape(-1, points.shape[-1])

        # run function
        output = func(points, *args, **kwargs)
        if isinstance(output, tuple):
            return tuple(_unflatten(out, shape, single) for out in output)
        return _unflatten(output, shape, single)

    return wrapper


# %% subroutines
def _unflatten(output: torch.Tensor, shape, single: bool) -> torch.Tensor:
    if single:
        return output[0]
    return output.reshape(*shape, *output.shape[1:])
