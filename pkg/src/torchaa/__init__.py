"""Main torchaa API."""

__all__ = []

from . import base  # noqa
from . import expr  # noqa
from . import symplectic  # noqa
from . import flow  # noqa
from . import lattice  # noqa
from . import chart  # noqa
from . import catalog  # noqa
from . import utils  # noqa
from . import cli  # noqa

from . import _functional  # noqa
from ._functional import *  # noqa

__all__.extend(_functional.__all__)
