"""Recursive-descent parser for phase-space expressions."""

__all__ = ["parse", "remap_variables", "FUNCTIONS", "CONSTANTS"]

import math
import re

from ..base.errors import ArityError, ExpressionSyntaxError, UnknownIdentifierError
from ._ast import Binary, Call, Constant, Expression, Node, Number, Unary, Variable, to_source
from ._lexer import Token, tokenize

# name -> arity
FUNCTIONS = {
    "sin": 1,
    "cos": 1,
    "tan": 1,
    "exp": 1,
    "log": 1,
    "sqrt": 1,
    "atan2": 2,
}
CONSTANTS = {"pi": math.pi}

_COORDINATE = re.compile(r"([qp])([1-9]\d*)")


def parse(source: str | bytes, dimension: int, time: bool = False) -> Expression:
    """
    Parse a scalar expression in the phase-space variables.

    Variables are ``q1..qn`` and ``p1..pn`` (plus ``t`` if ``time`` is set).
    Operators are ``+ - * / ^`` with the usual precedence: ``^`` binds
    tightest and is right-associative, then unary minus, then ``* /``,
    then ``+ -``. Implicit multiplication is not supported.

    Parameters
    ----------
    source : str | bytes
        Expression text (UTF-8).
    dimension : int
        Number of degrees of freedom ``n >= 1``.
    time : bool, optional
        Declare the time variable ``t``. The default is ``False``.

    Returns
    -------
    Expression
        Parsed expression.

    Raises
    ------
    ExpressionSyntaxError
        Malformed input, with the byte offset of the offending token.
    UnknownIdentifierError
        Identifier that is not a declared variable, function or constant.
    ArityError
        Function called with the wrong number of arguments.

    Examples
    --------
    >>> import torchaa
    >>> expr = torchaa.expr.parse("(p1^2 + q1^2)/2", 1)
    >>> torchaa.expr.evaluate(expr, [0.0, 2.0])
    2.0

    """
    if int(dimension) < 1:
        raise ValueError(f"dimension must be >= 1, got {dimension}")
    dimension = int(dimension)
    parser = _Parser(tokenize(source), dimension, time)
    root = parser.parse()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    return Expression(root, dimension, time, source)


def remap_variables(
    expression: Expression, mapping: dict[str, str], dimension: int, time: bool = False
) -> Expression:
    """
    Rename the variables of an expression and re-declare its dimension.

    Parameters
    ----------
    expression : Expression
        Input expression.
    mapping : dict[str, str]
        Old variable name to new variable name. Unmapped variables keep
        their name.
    dimension : int
        Number of degrees of freedom of the new expression.
    time : bool, optional
        Whether the new expression declares ``t``. The default is ``False``.

    Returns
    -------
    Expression
        Expression on the new phase space.

    """
    source = to_source(_rename(expression.root, mapping))
    return parse(source, dimension, time)


# %% subroutines
def _rename(node: Node, mapping: dict[str, str]) -> Node:
    if isinstance(node, Variable):
        return Variable(mapping.get(node.name, node.name), node.index)
    if isinstance(node, Unary):
        return Unary(node.op, _rename(node.operand, mapping))
    if isinstance(node, Binary):
        return Binary(node.op, _rename(node.left, mapping), _rename(node.right, mapping))
    if isinstance(node, Call):
        return Call(node.name, tuple(_rename(arg, mapping) for arg in node.args))
    return node


class _Parser:
    def __init__(self, tokens: list[Token], dimension: int, time: bool):
        self.tokens = tokens
        self.pos = 0
        self.dimension = dimension
        self.time = time

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.current
        if token.kind != "op" or token.text != text:
            raise ExpressionSyntaxError(f"expected {text!r}, found {_describe(token)}", token.offset)
        return self.advance()

    def parse(self) -> Node:
        node = self.expression()
        if self.current.kind != "end":
            raise ExpressionSyntaxError(
                f"unexpected {_describe(self.current)}", self.current.offset
            )
        return node

    def expression(self) -> Node:
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self.advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.current.kind == "op" and self.current.text == "-":
            self.advance()
            return Unary("-", self.unary())
        if self.current.kind == "op" and self.current.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            return Binary("^", base, self.unary())
        return base

    def primary(self) -> Node:
        token = self.current
        if token.kind == "number":
            self.advance()
            return Number(float(token.text))
        if token.kind == "name":
            self.advance()
            if self.current.kind == "op" and self.current.text == "(":
                return self.call(token)
            return self.identifier(token)
        if token.kind == "op" and token.text == "(":
            self.advance()
            node = self.expression()
            self.expect(")")
            return node
        raise ExpressionSyntaxError(f"unexpected {_describe(token)}", token.offset)

    def call(self, name: Token) -> Node:
        if name.text not in FUNCTIONS:
            raise UnknownIdentifierError(f"unknown function {name.text!r}", name.offset)
        self.expect("(")
        args = []
        if not (self.current.kind == "op" and self.current.text == ")"):
            args.append(self.expression())
            while self.current.kind == "op" and self.current.text == ",":
                self.advance()
                args.append(self.expression())
        self.expect(")")
        if len(args) != FUNCTIONS[name.text]:
            raise ArityError(
                f"{name.text} takes {FUNCTIONS[name.text]} argument(s), got {len(args)}",
                name.offset,
            )
        return Call(name.text, tuple(args))

    def identifier(self, token: Token) -> Node:
        name = token.text
        if name in CONSTANTS:
            return Constant(name, CONSTANTS[name])
        if name in FUNCTIONS:
            raise ExpressionSyntaxError(f"function {name!r} requires arguments", token.offset)
        if name == "t" and self.time:
            return Variable(name, 2 * self.dimension)
        match = _COORDINATE.fullmatch(name)
        if match is not None and int(match.group(2)) <= self.dimension:
            k = int(match.group(2)) - 1
            return Variable(name, k if match.group(1) == "q" else self.dimension + k)
        raise UnknownIdentifierError(f"undeclared identifier {name!r}", token.offset)


def _describe(token: Token) -> str:
    if token.kind == "end":
        return "end of input"
    return repr(token.text)
