"""Phase-space expressions with forward-mode derivatives."""

__all__ = []

from . import _ast  # noqa
from . import _evaluate  # noqa
from . import _parser  # noqa

from ._ast import *  # noqa
from ._evaluate import *  # noqa
from ._parser import parse, remap_variables  # noqa
from ._dual import Dual  # noqa

__all__.extend(_ast.__all__)
__all__.extend(_evaluate.__all__)
__all__.extend(["parse", "remap_variables", "Dual"])
