"""Wrapper for batched forward jacobian."""

__all__ = ["jacfwd"]

from functools import wraps

from typing import Callable
import torch


def jacfwd(argnums: int = 0, batched: bool = True) -> Callable:
    """
    Decorator returning the value of a function together with its Jacobian.

    Parameters
    ----------
    argnums : int, optional
        Index of the argument to differentiate with respect to.
        The default is ``0``.
    batched : bool, optional
        If ``True``, the differentiated argument carries a leading batch
        axis and the evaluation is vectorized with ``torch.vmap``.
        The default is ``True``.

    Returns
    -------
    Callable
        Decorated function returning ``(value, jacobian)``.

    """

    def decorator(fn: Callable) -> Callable:
        @wraps(fn)
        def wrapper(*args, **kwargs) -> tuple[torch.Tensor, torch.Tensor]:
            """
            Wrapper function for differentiation.

            Returns
            -------
            tuple[torch.Tensor, torch.Tensor]
                Original function output and its Jacobian.

            """

            # keep the primal output as auxiliary data
            def wrapped_fn(*wrapped_args):
                value = fn(*wrapped_args, **kwargs)
                return value, value

            grad_fn = torch.func.jacfwd(wrapped_fn, argnums=argnums, has_aux=True)
            if batched:
                in_dims = tuple(0 if n == argnums else None for n in range(len(args)))
                grad_fn = torch.func.vmap(grad_fn, in_dims=in_dims)

            jacobian, value = grad_fn(*args)

            return value, jacobian

        return wrapper

    return decorator
