"""Forward-mode dual numbers with vector tangents."""

__all__ = ["Dual"]

import math

import numpy as np
import numpy.typing as npt

from ..base.errors import ExpressionDomainError


class Dual:
    """
    Dual number ``value + grad * eps`` with a gradient vector.

    Seeding each variable with a unit tangent gives the full gradient
    of an expression in a single evaluation pass.

    Parameters
    ----------
    value : float
        Primal value.
    grad : np.ndarray
        Tangent (gradient with respect to the seeded variables).

    """

    __slots__ = ("value", "grad")

    def __init__(self, value: float, grad: npt.NDArray[float]):
        self.value = float(value)
        self.grad = grad

    def __repr__(self) -> str:
        return f"Dual({self.value!r}, {self.grad!r})"

    def __neg__(self):
        return Dual(-self.value, -self.grad)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value + other.value, self.grad + other.grad)
        return Dual(self.value + other, self.grad)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value - other.value, self.grad - other.grad)
        return Dual(self.value - other, self.grad)

    def __rsub__(self, other):
        return Dual(other - self.value, -self.grad)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(
                self.value * other.value, self.value * other.grad + other.value * self.grad
            )
        return Dual(self.value * other, self.grad * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            _check_nonzero(other.value)
            return Dual(
                self.value / other.value,
                (self.grad * other.value - self.value * other.grad) / other.value**2,
            )
        _check_nonzero(other)
        return Dual(self.value / other, self.grad / other)

    def __rtruediv__(self, other):
        _check_nonzero(self.value)
        return Dual(other / self.value, -other * self.grad / self.value**2)


# %% elementary functions
def _value(x) -> float:
    return x.value if isinstance(x, Dual) else float(x)


def _chain(x, value: float, derivative: float):
    if isinstance(x, Dual):
        return Dual(value, derivative * x.grad)
    return value


def _check_nonzero(x: float):
    if x == 0.0:
        raise ExpressionDomainError("division by zero")


def sin(x):
    v = _value(x)
    return _chain(x, math.sin(v), math.cos(v))


def cos(x):
    v = _value(x)
    return _chain(x, math.cos(v), -math.sin(v))


def tan(x):
    v = _value(x)
    c = math.cos(v)
    _check_nonzero(c)
    return _chain(x, math.tan(v), 1.0 / c**2)


def exp(x):
    try:
        e = math.exp(_value(x))
    except OverflowError as err:
        raise ExpressionDomainError("exp overflow") from err
    return _chain(x, e, e)


def log(x):
    v = _value(x)
    if v <= 0.0:
        raise ExpressionDomainError(f"log of nonpositive argument {v:.6g}")
    return _chain(x, math.log(v), 1.0 / v)


def sqrt(x):
    v = _value(x)
    if v < 0.0 or (v == 0.0 and isinstance(x, Dual)):
        raise ExpressionDomainError(f"sqrt of nonpositive argument {v:.6g}")
    r = math.sqrt(v)
    if not isinstance(x, Dual):
        return r
    return Dual(r, x.grad / (2.0 * r))


def atan2(y, x):
    vy, vx = _value(y), _value(x)
    if vy == 0.0 and vx == 0.0:
        raise ExpressionDomainError("atan2(0, 0) is undefined")
    value = math.atan2(vy, vx)
    if not isinstance(y, Dual) and not isinstance(x, Dual):
        return value
    r2 = vx * vx + vy * vy
    grad = 0.0
    if isinstance(y, Dual):
        grad = grad + (vx / r2) * y.grad
    if isinstance(x, Dual):
        grad = grad - (vy / r2) * x.grad
    return Dual(value, grad)


def ipow(x, k: int):
    """Integer power, exact at negative bases."""
    v = _value(x)
    if k < 0:
        _check_nonzero(v)
    if k == 0:
        return _chain(x, 1.0, 0.0)
    return _chain(x, v**k, k * v ** (k - 1))


def rpow(x, y):
    """Real power ``x^y``, defined for positive bases only."""
    vx = _value(x)
    if vx <= 0.0:
        raise ExpressionDomainError(
            f"non-integer power of nonpositive base {vx:.6g}"
        )
    if not isinstance(y, Dual):
        return _chain(x, vx ** float(y), float(y) * vx ** (float(y) - 1.0))
    return exp(y * log(x))


FUNCTIONS = {
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
    "atan2": atan2,
}
