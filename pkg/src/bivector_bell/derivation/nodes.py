"""Expression trees for bivector-algebra scripts and their canonical printer."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Basis:
    index: int


@dataclass(frozen=True)
class LambdaSym:
    pass


@dataclass(frozen=True)
class LambdaBasis:
    """``b_j(lambda)``."""

    index: int


@dataclass(frozen=True)
class VecA:
    pass


@dataclass(frozen=True)
class VecB:
    pass


@dataclass(frozen=True)
class Neg:
    operand: Expr


@dataclass(frozen=True)
class Add:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul:
    left: Expr
    right: Expr


Expr = Union[Const, Basis, LambdaSym, LambdaBasis, VecA, VecB, Neg, Add, Mul]
ATOMS = (Const, Basis, LambdaSym, LambdaBasis, VecA, VecB)


@dataclass(frozen=True)
class Statement:
    label: str
    lhs: Expr
    rhs: Expr

    def __str__(self) -> str:
        return f"{self.label}: {to_text(self.lhs)} = {to_text(self.rhs)}"


def mentions_vectors(e: Expr) -> bool:
    if isinstance(e, (VecA, VecB)):
        return True
    if isinstance(e, Neg):
        return mentions_vectors(e.operand)
    if isinstance(e, (Add, Mul)):
        return mentions_vectors(e.left) or mentions_vectors(e.right)
    return False


def _atom(e: Expr) -> str:
    if isinstance(e, Const):
        v = e.value
        if v < 0:
            raise ValueError("negative constants are written as Neg(Const)")
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(e, Basis):
        return f"b{e.index}"
    if isinstance(e, LambdaSym):
        return "L"
    if isinstance(e, LambdaBasis):
        return f"B({e.index},L)"
    if isinstance(e, VecA):
        return "a"
    if isinstance(e, VecB):
        return "b"
    return f"({to_text(e)})"


def _factor(e: Expr) -> str:
    if isinstance(e, Neg):
        return "-" + _atom(e.operand)
    return _atom(e)


def _term(e: Expr) -> str:
    if isinstance(e, Mul):
        right = e.right
        # a leading '-' after juxtaposition would read as subtraction
        rtext = _atom(right) if isinstance(right, Neg) else _factor(right)
        return f"{_term(e.left)} {rtext}"
    return _factor(e)


def to_text(e: Expr) -> str:
    """Canonical text for ``e``; parsing it yields ``e`` back."""
    if isinstance(e, Add):
        right = e.right
        rtext = _atom(right) if isinstance(right, Add) else _term(right)
        return f"{to_text(e.left)} + {rtext}"
    return _term(e)
