"""Hamiltonian flows, joint flows and completeness probing."""

__all__ = []

from . import _completeness  # noqa
from . import _flow  # noqa
from . import _integrator  # noqa

from ._completeness import *  # noqa
from ._flow import *  # noqa
from ._integrator import *  # noqa

__all__.extend(_integrator.__all__)
__all__.extend(_flow.__all__)
__all__.extend(_completeness.__all__)
