"""Symplectic geometry kernel on R^{2n}."""

__all__ = []

from . import _checks  # noqa
from . import _liouville  # noqa
from . import _phase_space  # noqa
from . import _vector_field  # noqa

from ._checks import *  # noqa
from ._liouville import *  # noqa
from ._phase_space import *  # noqa
from ._vector_field import *  # noqa

__all__.extend(_phase_space.__all__)
__all__.extend(_vector_field.__all__)
__all__.extend(_checks.__all__)
__all__.extend(_liouville.__all__)
