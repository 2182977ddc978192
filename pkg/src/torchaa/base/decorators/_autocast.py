"""Automatic torch converter."""

__all__ = ["autocast"]

import inspect

from functools import wraps
from typing import Callable

import numpy as np
import torch


def autocast(func: Callable) -> Callable:
    """
    Force all array-like inputs to be float64 torch tensors on the same device.

    Non-numeric arguments (expressions, systems, options) are passed through.
    """

    @wraps(func)
    def wrapper(*args, **kwargs):
        args, kwargs = _fill_kwargs(func, args, kwargs)

        # convert arrays to torch
        args, kwargs = _to_tensors(*args, **kwargs)

        # enforce float64 for floating point tensors
        args, kwargs = _enforce_precision(*args, **kwargs)

        # get device from first tensor argument
        device = _get_device(args, kwargs)

        # move everything to the leading argument device
        args, kwargs = _to_device(device, *args, **kwargs)

        # run function
        return func(*args, **kwargs)

    return wrapper


# %% subroutines
def _fill_kwargs(func, args, kwargs):
    """Fill missing keyword arguments with their default values."""
    signature = inspect.signature(func)
    n_args = len(args)

    _kwargs = {}
    for k, v in signature.parameters.items():
        if v.default is not inspect.Parameter.empty:
            _kwargs[k] = v.default
        else:
            _kwargs[k] = None

    for k in kwargs.keys():
        _kwargs[k] = kwargs[k]

    _keys = list(_kwargs.keys())[n_args:]
    _values = list(_kwargs.values())[n_args:]

    return args, dict(zip(_keys, _values))


def _is_array_like(value) -> bool:
    if isinstance(value, (np.ndarray, torch.Tensor)):
        return True
    if isinstance(value, (list, tuple)) and value:
        return all(isinstance(v, (int, float, np.number)) for v in np.ravel(value))
    return False


def _to_tensors(*args, **kwargs):
    """Convert numeric arrays and sequences to tensors."""
    args = list(args)
    for n in range(len(args)):
        if _is_array_like(args[n]):
            args[n] = torch.as_tensor(args[n])

    if kwargs:
        values, _ = _to_tensors(*kwargs.values())
        kwargs = dict(zip(kwargs.keys(), values))

    return args, kwargs


def _enforce_precision(*args, **kwargs):
    """Cast floating point and integer tensors to float64."""
    args = list(args)
    for n in range(len(args)):
        if isinstance(args[n], torch.Tensor) and not torch.is_complex(args[n]):
            args[n] = args[n].to(torch.float64)

    if kwargs:
        values, _ = _enforce_precision(*kwargs.values())
        kwargs = dict(zip(kwargs.keys(), values))

    return args, kwargs


def _get_device(args, kwargs):
    for arg in list(args) + list(kwargs.values()):
        if isinstance(arg, torch.Tensor):
            return arg.device
    return torch.device("cpu")


def _to_device(device, *args, **kwargs):
    """Enforce same device."""
    args = list(args)
    for n in range(len(args)):
        if isinstance(args[n], torch.Tensor):
            args[n] = args[n].to(device)

    if kwargs:
        values, _ = _to_device(device, *kwargs.values())
        kwargs = dict(zip(kwargs.keys(), values))

    return args, kwargs
