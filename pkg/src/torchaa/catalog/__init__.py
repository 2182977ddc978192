"""Reference integrable systems with known action-angle data."""

__all__ = []

from . import _catalog  # noqa
from ._catalog import *  # noqa

__all__.extend(_catalog.__all__)
