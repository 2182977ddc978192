"""Tokenizer for phase-space expressions."""

__all__ = ["Token", "tokenize"]

import re

from typing import NamedTuple

from ..base.errors import ExpressionSyntaxError

_TOKEN = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str  # "number", "name", "op" or "end"
    text: str
    offset: int  # UTF-8 byte offset


def tokenize(source: str | bytes) -> list[Token]:
    """
    Split an expression into tokens.

    Parameters
    ----------
    source : str | bytes
        Expression text. Bytes are decoded as UTF-8.

    Returns
    -------
    list[Token]
        Tokens terminated by an ``"end"`` token.

    Raises
    ------
    ExpressionSyntaxError
        On invalid UTF-8 or on a character that starts no token.

    """
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as err:
            raise ExpressionSyntaxError("invalid UTF-8", err.start) from err

    tokens = []
    pos, offset = 0, 0
    while pos < len(source):
        match = _TOKEN.match(source, pos)
        if match is None:
            raise ExpressionSyntaxError(f"unexpected character {source[pos]!r}", offset)
        text = match.group()
        if match.lastgroup != "space":
            tokens.append(Token(match.lastgroup, text, offset))
        offset += len(text.encode("utf-8"))
        pos = match.end()
    tokens.append(Token("end", "", offset))

    return tokens
