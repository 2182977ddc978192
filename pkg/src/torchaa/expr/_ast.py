"""Expression tree nodes and printing."""

__all__ = [
    "Node",
    "Number",
    "Variable",
    "Constant",
    "Unary",
    "Binary",
    "Call",
    "Expression",
    "walk",
    "to_source",
]

from dataclasses import dataclass, field

# binding strength used by the printer
_ADDITIVE = 1
_MULTIPLICATIVE = 2
_UNARY = 3
_POWER = 4
_ATOM = 5


@dataclass(frozen=True)
class Node:
    """Base class of expression tree nodes."""


@dataclass(frozen=True)
class Number(Node):
    value: float


@dataclass(frozen=True)
class Variable(Node):
    name: str
    index: int


@dataclass(frozen=True)
class Constant(Node):
    name: str
    value: float


@dataclass(frozen=True)
class Unary(Node):
    op: str
    operand: Node


@dataclass(frozen=True)
class Binary(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: tuple[Node, ...]


@dataclass(frozen=True)
class Expression:
    """
    Parsed scalar expression on the phase space ``R^{2n}``.

    Attributes
    ----------
    root : Node
        Root of the syntax tree.
    dimension : int
        Number of degrees of freedom ``n``.
    time : bool
        Whether the time variable ``t`` is declared. If so, it is
        the last coordinate of the evaluation point, of length ``2n + 1``.
    source : str
        Source text the expression was parsed from.

    """

    root: Node
    dimension: int
    time: bool = False
    source: str = field(default="", compare=False)

    @property
    def ndim(self) -> int:
        """Length of the evaluation point."""
        return 2 * self.dimension + int(self.time)

    @property
    def variables(self) -> frozenset[str]:
        """Names of the variables referenced by the expression."""
        return frozenset(node.name for node in walk(self.root) if isinstance(node, Variable))

    def to_source(self) -> str:
        """Print the expression with the minimal set of parentheses."""
        return to_source(self.root)

    def __str__(self) -> str:
        return self.to_source()


def walk(node: Node):
    """Yield ``node`` and all of its descendants, depth first."""
    yield node
    if isinstance(node, Unary):
        yield from walk(node.operand)
    elif isinstance(node, Binary):
        yield from walk(node.left)
        yield from walk(node.right)
    elif isinstance(node, Call):
        for arg in node.args:
            yield from walk(arg)


def to_source(node: Node) -> str:
    """Print a syntax tree such that parsing the result gives the same tree."""
    return _print(node, 0)


# %% subroutines
def _print(node: Node, required: int) -> str:
    if isinstance(node, Number):
        text = repr(float(node.value))
        return text[:-2] if text.endswith(".0") else text
    if isinstance(node, (Variable, Constant)):
        return node.name
    if isinstance(node, Call):
        return f"{node.name}({', '.join(_print(arg, 0) for arg in node.args)})"
    if isinstance(node, Unary):
        text, strength = node.op + _print(node.operand, _UNARY), _UNARY
    elif node.op in "+-":
        text = f"{_print(node.left, _ADDITIVE)} {node.op} {_print(node.right, _MULTIPLICATIVE)}"
        strength = _ADDITIVE
    elif node.op in "*/":
        text = f"{_print(node.left, _MULTIPLICATIVE)}{node.op}{_print(node.right, _UNARY)}"
        strength = _MULTIPLICATIVE
    else:
        text = f"{_print(node.left, _ATOM)}^{_print(node.right, _UNARY)}"
        strength = _POWER
    if strength < required:
        return f"({text})"
    return text
