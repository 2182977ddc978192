"""Period lattice detection, reduction and continuation."""

__all__ = []

from . import _lattice  # noqa
from . import _newton  # noqa
from . import _reduce  # noqa

from ._lattice import *  # noqa
from ._newton import *  # noqa
from ._reduce import *  # noqa

__all__.extend(_lattice.__all__)
__all__.extend(_newton.__all__)
__all__.extend(_reduce.__all__)
