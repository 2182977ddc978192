"""Helper decorators to reduce boilerplate."""

__all__ = []

from ._autocast import autocast  # noqa
from ._broadcast import broadcast  # noqa
from ._jacfwd import jacfwd  # noqa

__all__.extend(["autocast", "broadcast", "jacfwd"])
