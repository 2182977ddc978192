"""Action-angle charts: section, actions, gauge and verification."""

__all__ = []

from . import _section  # noqa
from . import _family  # noqa
from . import _actions  # noqa
from . import _chart  # noqa
from . import _gauge  # noqa
from . import _verify  # noqa
from . import _io  # noqa

from ._section import *  # noqa
from ._family import *  # noqa
from ._actions import *  # noqa
from ._chart import *  # noqa
from ._gauge import *  # noqa
from ._verify import *  # noqa
from ._io import *  # noqa

__all__.extend(_section.__all__)
__all__.extend(_family.__all__)
__all__.extend(_actions.__all__)
__all__.extend(_chart.__all__)
__all__.extend(_gauge.__all__)
__all__.extend(_verify.__all__)
__all__.extend(_io.__all__)
