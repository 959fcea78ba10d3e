"""Recursive descent parser for ``.bvd`` statements.

    statement := label ":" expr "=" expr
    expr      := term (("+" | "-") term)*
    term      := factor (factor | "*" factor)*
    factor    := ["-"] atom
    atom      := NUMBER | "L" | "a" | "b" | "b1" | "b2" | "b3"
               | "B" "(" index "," "L" ")" | "(" expr ")"

Juxtaposition is multiplication.  Products are left-associative and never
reordered; ``x - y`` parses as ``Add(x, Neg(y))``.
"""

from __future__ import annotations

from .lexer import Kind, ScriptError, Token, tokenize
from .nodes import Add, Basis, Const, Expr, LambdaBasis, LambdaSym, Mul, Neg, Statement, VecA, VecB


class ParseError(ScriptError):
    pass


_NAMED = {
    "L": LambdaSym(),
    "a": VecA(),
    "b": VecB(),
    "b1": Basis(1),
    "b2": Basis(2),
    "b3": Basis(3),
}
_ATOM_START = (Kind.NUMBER, Kind.IDENT, Kind.LPAREN)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = [t for t in tokens if t.kind is not Kind.COMMENT]
        if not self.tokens or self.tokens[-1].kind is not Kind.EOL:
            last = self.tokens[-1] if self.tokens else None
            line, col = (last.line, last.column + len(last.lexeme)) if last else (1, 1)
            self.tokens.append(Token(Kind.EOL, "", line, col))
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tok
        if t.kind is not Kind.EOL:
            self.pos += 1
        return t

    def error(self, expected: str) -> ParseError:
        t = self.tok
        found = "end of line" if t.kind is Kind.EOL else repr(t.lexeme)
        return ParseError(f"expected {expected}, found {found}", t.line, t.column)

    def expect(self, kind: Kind, lexeme: str | None = None) -> Token:
        t = self.tok
        if t.kind is not kind or (lexeme is not None and t.lexeme != lexeme):
            raise self.error(repr(lexeme) if lexeme else kind.value)
        return self.advance()

    def statement(self) -> Statement:
        label = self.expect(Kind.IDENT).lexeme
        self.expect(Kind.COLON)
        lhs = self.expr()
        self.expect(Kind.EQUALS)
        rhs = self.expr()
        if self.tok.kind is not Kind.EOL:
            raise self.error("'+', '-', '*', a factor or end of line")
        return Statement(label, lhs, rhs)

    def expr(self) -> Expr:
        e = self.term()
        while self.tok.kind in (Kind.PLUS, Kind.MINUS):
            op = self.advance()
            rhs = self.term()
            e = Add(e, rhs if op.kind is Kind.PLUS else Neg(rhs))
        return e

    def term(self) -> Expr:
        e = self.factor()
        while True:
            if self.tok.kind is Kind.STAR:
                self.advance()
                e = Mul(e, self.factor())
            elif self.tok.kind in _ATOM_START:
                e = Mul(e, self.factor())
            else:
                return e

    def factor(self) -> Expr:
        if self.tok.kind is Kind.MINUS:
            self.advance()
            return Neg(self.atom())
        return self.atom()

    def atom(self) -> Expr:
        t = self.tok
        if t.kind is Kind.NUMBER:
            self.advance()
            return Const(t.value)
        if t.kind is Kind.LPAREN:
            self.advance()
            e = self.expr()
            self.expect(Kind.RPAREN)
            return e
        if t.kind is Kind.IDENT:
            if t.lexeme == "B":
                self.advance()
                return self.lambda_basis()
            if t.lexeme in _NAMED:
                self.advance()
                return _NAMED[t.lexeme]
            raise ParseError(f"unknown symbol {t.lexeme!r}", t.line, t.column)
        raise self.error("a number, symbol or '('")

    def lambda_basis(self) -> Expr:
        self.expect(Kind.LPAREN)
        idx = self.tok
        if idx.kind is not Kind.NUMBER or idx.lexeme not in ("1", "2", "3"):
            raise self.error("basis index 1, 2 or 3")
        self.advance()
        self.expect(Kind.COMMA)
        self.expect(Kind.IDENT, "L")
        self.expect(Kind.RPAREN)
        return LambdaBasis(int(idx.lexeme))


def parse(tokens: list[Token]) -> Statement:
    """Parse the tokens of one logical line into a :class:`Statement`."""
    return _Parser(tokens).statement()


def parse_statement(text: str, line: int = 1) -> Statement:
    return parse(tokenize(text, first_line=line))


def parse_expr(text: str) -> Expr:
    p = _Parser(tokenize(text))
    e = p.expr()
    if p.tok.kind is not Kind.EOL:
        raise p.error("end of expression")
    return e
