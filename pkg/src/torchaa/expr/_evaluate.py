"""Expression evaluation with exact first derivatives."""

__all__ = ["evaluate", "eval_with_gradient", "batch_eval_with_gradient", "evaluate_torch"]

from types import SimpleNamespace

import numpy as np
import numpy.typing as npt
import torch

from ..base import autocast, broadcast, jacfwd
from ..base.errors import ExpressionDomainError
from . import _dual
from ._ast import Binary, Call, Constant, Expression, Node, Number, Unary, Variable
from ._dual import Dual


def evaluate(expression: Expression, point: npt.ArrayLike) -> float:
    """
    Evaluate an expression at a point.

    Parameters
    ----------
    expression : Expression
        Parsed expression.
    point : ArrayLike
        Evaluation point ``(q1..qn, p1..pn[, t])``.

    Returns
    -------
    float
        Expression value.

    """
    point = _check_point(expression, point)
    return float(_walk(expression.root, point.tolist(), _SCALAR))


def eval_with_gradient(
    expression: Expression, point: npt.ArrayLike
) -> tuple[float, npt.NDArray[float]]:
    """
    Evaluate an expression and its gradient at a point.

    All partial derivatives are obtained in one pass by seeding each
    coordinate with a unit dual tangent.

    Parameters
    ----------
    expression : Expression
        Parsed expression.
    point : ArrayLike
        Evaluation point ``(q1..qn, p1..pn[, t])``.

    Returns
    -------
    value : float
        Expression value.
    gradient : np.ndarray
        Partial derivatives with respect to the point coordinates.

    Raises
    ------
    ExpressionDomainError
        Elementary function evaluated outside of its domain.

    """
    point = _check_point(expression, point)
    seeds = np.eye(point.size)
    variables = [Dual(x, seeds[k]) for k, x in enumerate(point.tolist())]
    out = _walk(expression.root, variables, _SCALAR)
    if isinstance(out, Dual):
        return out.value, out.grad.copy()
    return float(out), np.zeros(point.size)


def batch_eval_with_gradient(
    expression: Expression, points: npt.ArrayLike
) -> tuple[torch.Tensor, torch.Tensor]:
    """
    Vectorized value and gradient over many points.

    Parameters
    ----------
    expression : Expression
        Parsed expression.
    points : ArrayLike
        Points of shape ``(..., ndim)``.

    Returns
    -------
    value : torch.Tensor
        Values of shape ``(...)``.
    gradient : torch.Tensor
        Gradients of shape ``(..., ndim)``.

    Raises
    ------
    ExpressionDomainError
        If any value or derivative is not finite.

    """
    return _batch_eval_with_gradient(points, expression)


def evaluate_torch(expression: Expression, z: torch.Tensor) -> torch.Tensor:
    """Evaluate an expression on a single point tensor (traceable by ``torch.func``)."""
    return _walk(expression.root, z, _TORCH)


# %% subroutines
@autocast
@broadcast
def _batch_eval_with_gradient(points, expression):
    if points.shape[-1] != expression.ndim:
        raise ValueError(
            f"points have {points.shape[-1]} coordinates, expected {expression.ndim}"
        )

    @jacfwd(argnums=0)
    def _value(z):
        return evaluate_torch(expression, z)

    value, grad = _value(points)
    if not (torch.isfinite(value).all() and torch.isfinite(grad).all()):
        raise ExpressionDomainError(
            f"{expression.to_source()} is not finite on some of the sampled points"
        )

    return value, grad


def _check_point(expression: Expression, point) -> npt.NDArray[float]:
    point = np.asarray(point, dtype=float).ravel()
    if point.size != expression.ndim:
        raise ValueError(f"point has {point.size} coordinates, expected {expression.ndim}")
    return point


def _integer_exponent(node: Node) -> int | None:
    sign = 1
    while isinstance(node, Unary):
        sign = -sign
        node = node.operand
    if isinstance(node, Number) and float(node.value).is_integer():
        return sign * int(node.value)
    return None


def _walk(node: Node, variables, ops: SimpleNamespace):
    if isinstance(node, Number):
        return ops.constant(node.value, variables)
    if isinstance(node, Constant):
        return ops.constant(node.value, variables)
    if isinstance(node, Variable):
        return variables[node.index]
    if isinstance(node, Unary):
        return -_walk(node.operand, variables, ops)
    if isinstance(node, Call):
        args = [_walk(arg, variables, ops) for arg in node.args]
        return ops.functions[node.name](*args)

    left = _walk(node.left, variables, ops)
    if node.op == "^":
        k = _integer_exponent(node.right)
        if k is not None:
            return ops.ipow(left, k)
        return ops.rpow(left, _walk(node.right, variables, ops))

    right = _walk(node.right, variables, ops)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    return ops.divide(left, right)


def _scalar_divide(left, right):
    if not isinstance(left, Dual) and not isinstance(right, Dual):
        _dual._check_nonzero(right)
    return left / right


_SCALAR = SimpleNamespace(
    constant=lambda value, variables: value,
    functions=_dual.FUNCTIONS,
    ipow=_dual.ipow,
    rpow=_dual.rpow,
    divide=_scalar_divide,
)

_TORCH = SimpleNamespace(
    constant=lambda value, variables: torch.as_tensor(value, dtype=torch.float64),
    functions={
        "sin": torch.sin,
        "cos": torch.cos,
        "tan": torch.tan,
        "exp": torch.exp,
        "log": torch.log,
        "sqrt": torch.sqrt,
        "atan2": torch.atan2,
    },
    ipow=lambda x, k: torch.pow(x, k),
    rpow=lambda x, y: torch.pow(x, y),
    divide=lambda x, y: x / y,
)
