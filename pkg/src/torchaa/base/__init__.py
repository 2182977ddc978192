"""Shared infrastructure: options, decorators and errors."""

__all__ = []

from .config import *  # noqa
from .decorators import *  # noqa
from .errors import *  # noqa

from . import config  # noqa
from . import decorators  # noqa
from . import errors  # noqa

__all__.extend(config.__all__)
__all__.extend(decorators.__all__)
__all__.extend(errors.__all__)
