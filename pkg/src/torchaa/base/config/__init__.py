"""Pipeline configuration helpers"""

__all__ = []

from .options import *  # noqa
from . import options as _options

__all__.extend(_options.__all__)
