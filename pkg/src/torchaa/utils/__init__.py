"""Utilities subroutines."""

__all__ = []

from . import _interp  # noqa
from ._interp import *  # noqa

__all__.extend(_interp.__all__)


from . import _formatting
from ._formatting import *  # noqa

__all__.extend(_formatting.__all__)
