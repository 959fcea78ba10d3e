from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction


class Kind(enum.Enum):
    NUMBER = "number"
    IDENT = "identifier"
    PLUS = "'+'"
    MINUS = "'-'"
    STAR = "'*'"
    LPAREN = "'('"
    RPAREN = "')'"
    EQUALS = "'='"
    COLON = "':'"
    COMMA = "','"
    COMMENT = "comment"
    EOL = "end of line"


@dataclass(frozen=True)
class Token:
    kind: Kind
    lexeme: str
    line: int
    column: int

    @property
    def value(self) -> Fraction:
        if self.kind is not Kind.NUMBER:
            raise TypeError(f"{self.kind.name} token has no numeric value")
        return Fraction(self.lexeme)

    def __repr__(self) -> str:
        return f"{self.kind.name}({self.lexeme})" if self.kind in (Kind.NUMBER, Kind.IDENT) else self.kind.name


class ScriptError(Exception):
    """A lexical or syntax error at a 1-based (line, column) position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class LexError(ScriptError):
    pass


_SINGLE = {
    "+": Kind.PLUS,
    "-": Kind.MINUS,
    "*": Kind.STAR,
    "(": Kind.LPAREN,
    ")": Kind.RPAREN,
    "=": Kind.EQUALS,
    ":": Kind.COLON,
    ",": Kind.COMMA,
}
_NUMBER = re.compile(r"\d+(?:/\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def tokenize(text: str, first_line: int = 1) -> list[Token]:
    """Split ``text`` into tokens; every line ends with an EOL token.

    ``#`` starts a comment running to the end of the line.  Columns are
    1-based; LF and CRLF line endings are both accepted.
    """
    tokens: list[Token] = []
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for lineno, line in enumerate(lines, start=first_line):
        line = line.removesuffix("\r")
        pos = 0
        while pos < len(line):
            ch = line[pos]
            col = pos + 1
            if ch in " \t":
                pos += 1
            elif ch == "#":
                tokens.append(Token(Kind.COMMENT, line[pos:], lineno, col))
                pos = len(line)
            elif ch in _SINGLE:
                tokens.append(Token(_SINGLE[ch], ch, lineno, col))
                pos += 1
            elif m := _NUMBER.match(line, pos):
                lexeme = m.group()
                if "/" in lexeme and int(lexeme.split("/")[1]) == 0:
                    raise LexError(f"zero denominator in {lexeme!r}", lineno, col)
                tokens.append(Token(Kind.NUMBER, lexeme, lineno, col))
                pos = m.end()
            elif m := _IDENT.match(line, pos):
                tokens.append(Token(Kind.IDENT, m.group(), lineno, col))
                pos = m.end()
            else:
                raise LexError(f"illegal character {ch!r}", lineno, col)
        tokens.append(Token(Kind.EOL, "", lineno, len(line) + 1))
    return tokens
