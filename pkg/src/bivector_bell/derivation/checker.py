"""Evaluate and check equality statements over a fixed battery of bindings.

A statement is decided by evaluating both sides for ``L`` in ``{+1, -1}``
and, when it mentions ``a`` or ``b``, for every pair drawn from three exact
rational unit vectors followed by 50 seeded random float unit vector pairs.
Statements without ``a``/``b`` are polynomials in ``L`` with rational
coefficients, so the two exact sign bindings decide them completely.  For the
vector battery, agreement is only certain for expressions of degree at most
one in each of ``a`` and ``b``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from ..algebra import (
    Multivector,
    Sign,
    UnitVector3,
    Vector3,
    add,
    basis,
    embed,
    isclose,
    lambda_basis,
    mul,
    neg,
)
from .lexer import ScriptError, tokenize
from .nodes import (
    Add,
    Basis,
    Const,
    Expr,
    LambdaBasis,
    LambdaSym,
    Mul,
    Neg,
    Statement,
    VecA,
    VecB,
    mentions_vectors,
)
from .parser import parse

EXACT_VECTORS = (
    UnitVector3(1, 0, 0),
    UnitVector3(0, 1, 0),
    UnitVector3(Fraction(3, 5), Fraction(4, 5), 0),
)
RANDOM_PAIRS = 50
BATTERY_SEED = 20120330
TOLERANCE = 1e-12


@dataclass(frozen=True)
class Binding:
    lam: Sign
    a: Vector3
    b: Vector3

    @property
    def exact(self) -> bool:
        return not (self.a.is_float or self.b.is_float)


def evaluate(e: Expr, binding: Binding) -> Multivector:
    exact = binding.exact

    def lift(m: Multivector) -> Multivector:
        return m if exact else m.to_float()

    def ev(e: Expr) -> Multivector:
        if isinstance(e, Mul):
            return mul(ev(e.left), ev(e.right))
        if isinstance(e, Add):
            return add(ev(e.left), ev(e.right))
        if isinstance(e, Neg):
            return neg(ev(e.operand))
        if isinstance(e, Const):
            return Multivector.scalar(e.value if exact else float(e.value))
        if isinstance(e, Basis):
            return lift(basis(e.index))
        if isinstance(e, LambdaBasis):
            return lift(lambda_basis(e.index, binding.lam))
        if isinstance(e, LambdaSym):
            return lift(Multivector.scalar(int(binding.lam)))
        if isinstance(e, VecA):
            return embed(binding.a)
        if isinstance(e, VecB):
            return embed(binding.b)
        raise TypeError(f"not an expression node: {e!r}")

    return ev(e)


def _random_units(rng: np.random.Generator, count: int) -> list[UnitVector3]:
    out = []
    for v in rng.standard_normal((count, 3)):
        v = v / np.linalg.norm(v)
        out.append(UnitVector3(*(float(c) for c in v)))
    return out


@lru_cache(maxsize=2)
def battery(with_vectors: bool = True) -> tuple[Binding, ...]:
    """Bindings in checking order: exact ones first, then random floats."""
    rng = np.random.default_rng(BATTERY_SEED)
    ra = _random_units(rng, RANDOM_PAIRS)
    rb = _random_units(rng, RANDOM_PAIRS)
    out = []
    for lam in (Sign.PLUS, Sign.MINUS):
        if not with_vectors:
            out.append(Binding(lam, EXACT_VECTORS[0], EXACT_VECTORS[0]))
            continue
        out.extend(Binding(lam, a, b) for a in EXACT_VECTORS for b in EXACT_VECTORS)
    if with_vectors:
        for lam in (Sign.PLUS, Sign.MINUS):
            out.extend(Binding(lam, a, b) for a, b in zip(ra, rb))
    return tuple(out)


@dataclass(frozen=True)
class Witness:
    binding: Binding
    lhs: Multivector
    rhs: Multivector

    def to_dict(self) -> dict:
        return {
            "lambda": int(self.binding.lam),
            "a": [str(c) if isinstance(c, Fraction) else c for c in self.binding.a],
            "b": [str(c) if isinstance(c, Fraction) else c for c in self.binding.b],
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
        }

    def __str__(self) -> str:
        lam = "+1" if self.binding.lam is Sign.PLUS else "-1"
        return f"λ={lam} a={self.binding.a} b={self.binding.b} lhs={self.lhs} rhs={self.rhs}"


@dataclass(frozen=True)
class Result:
    """Outcome for one script line: PASS, FAIL (with witness) or ERROR."""

    line: int
    label: str | None
    status: str
    witness: Witness | None = None
    error: str | None = None

    def text(self) -> str:
        if self.status == "PASS":
            return f"{self.label} PASS"
        if self.status == "FAIL":
            return f"{self.label} FAIL {self.witness}"
        return f"line {self.line}: ERROR {self.error}"

    def to_dict(self) -> dict:
        return {
            "line": self.line,
            "label": self.label,
            "status": self.status,
            "witness": self.witness.to_dict() if self.witness else None,
            "error": self.error,
        }


def check_statement(st: Statement) -> Witness | None:
    """Return ``None`` when both sides agree on every binding, else a witness."""
    with_vectors = mentions_vectors(st.lhs) or mentions_vectors(st.rhs)
    for binding in battery(with_vectors):
        lhs = evaluate(st.lhs, binding)
        rhs = evaluate(st.rhs, binding)
        if not isclose(lhs, rhs, TOLERANCE):
            return Witness(binding, lhs, rhs)
    return None


@dataclass(frozen=True)
class CheckReport:
    source: str
    results: tuple[Result, ...]

    @property
    def ok(self) -> bool:
        return all(r.status == "PASS" for r in self.results)

    @property
    def failures(self) -> list[Result]:
        return [r for r in self.results if r.status != "PASS"]

    def text(self) -> str:
        return "".join(r.text() + "\n" for r in self.results)

    def to_json(self) -> str:
        return json.dumps(
            {"source": self.source, "all_pass": self.ok, "results": [r.to_dict() for r in self.results]},
            ensure_ascii=False,
            indent=2,
        )


def check_text(text: str, source: str = "<string>") -> CheckReport:
    results = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        try:
            tokens = tokenize(line, first_line=lineno)
            if all(t.kind.name in ("COMMENT", "EOL") for t in tokens):
                continue
            st = parse(tokens)
        except ScriptError as exc:
            results.append(Result(lineno, None, "ERROR", error=str(exc)))
            continue
        w = check_statement(st)
        results.append(Result(lineno, st.label, "PASS" if w is None else "FAIL", w))
    return CheckReport(source, tuple(results))


def check_script(path: str | Path) -> CheckReport:
    """Check every statement in a ``.bvd`` file; raises ``OSError`` if unreadable."""
    path = Path(path)
    text = path.read_bytes().decode("utf-8")
    return check_text(text, str(path))
