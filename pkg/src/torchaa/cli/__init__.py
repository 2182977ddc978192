"""Batch command-line front end."""

__all__ = []

from ._config import *  # noqa
from . import _config

__all__.extend(_config.__all__)


from ._commands import *  # noqa
from . import _commands

__all__.extend(_commands.__all__)


from ._emit import *  # noqa
from . import _emit

__all__.extend(_emit.__all__)


from ._main import *  # noqa
from . import _main

__all__.extend(_main.__all__)
