"""Measurement functions and correlation estimators of the bivector model.

The measurement functions are

    A(a, lam) = -a a(lam)        B(b, lam) = b(lam) b

with ``a(lam) = lam a``.  Since unit pure bivectors square to ``-1`` these
reduce to the reals ``lam`` and ``-lam``, so every product ``A B`` is ``-1``.
The normalized correlation divides the averaged products by ``-a`` on the
left and by ``b`` on the right.

Sums over a stream of hidden signs are grouped by sign value.  The summand
depends on ``lam`` only, so this is the same sum reordered; in exact mode the
result is identical, in float mode it avoids accumulating ``n`` roundings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import (
    DomainError,
    Multivector,
    Sign,
    TableMode,
    UnitVector3,
    Vector3,
    add,
    dot,
    embed,
    inverse,
    mul,
    neg,
    scale,
    table_product,
    wedge_coeffs,
)


@dataclass(frozen=True, eq=False)
class LambdaStream:
    """An ordered, nonempty sequence of hidden signs."""

    signs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.signs, dtype=np.int8).ravel()
        if arr.size == 0:
            raise DomainError("a lambda stream must be nonempty")
        if not np.all((arr == 1) | (arr == -1)):
            raise DomainError("lambda values must be +1 or -1")
        arr.flags.writeable = False
        object.__setattr__(self, "signs", arr)

    @classmethod
    def of(cls, values) -> LambdaStream:
        return cls(np.fromiter((int(Sign(v)) for v in values), dtype=np.int8))

    @classmethod
    def fair(cls, n: int, seed: int) -> LambdaStream:
        """``n`` independent fair coins from a seeded generator."""
        if n < 1:
            raise DomainError("stream length must be positive")
        rng = np.random.default_rng(seed)
        return cls(rng.integers(0, 2, size=n, dtype=np.int8) * 2 - 1)

    @classmethod
    def balanced(cls, n: int, seed: int | None = None) -> LambdaStream:
        """Exactly ``n/2`` of each sign; shuffled when a seed is given."""
        if n < 2 or n % 2:
            raise DomainError("a balanced stream needs a positive even length")
        arr = np.tile(np.array([1, -1], dtype=np.int8), n // 2)
        if seed is not None:
            np.random.default_rng(seed).shuffle(arr)
        return cls(arr)

    def __len__(self) -> int:
        return int(self.signs.size)

    def __iter__(self):
        return (Sign(int(v)) for v in self.signs)

    def counts(self) -> tuple[int, int]:
        """Number of ``+1`` and ``-1`` entries."""
        plus = int(np.count_nonzero(self.signs == 1))
        return plus, len(self) - plus

    def mean(self) -> Fraction:
        plus, minus = self.counts()
        return Fraction(plus - minus, len(self))


@dataclass(frozen=True)
class CorrelationEstimate:
    value: Multivector
    n: int
    mode: TableMode


def _unit(v) -> UnitVector3:
    return UnitVector3.of(v)


def _mean_over(ls: LambdaStream, term) -> Multivector:
    """``(1/n) sum_i term(lam_i)`` with the sum grouped by sign."""
    plus, minus = ls.counts()
    total = None
    for lam, count in ((Sign.PLUS, plus), (Sign.MINUS, minus)):
        if count:
            part = scale(count, term(lam))
            total = part if total is None else add(total, part)
    n = len(ls)
    if total.is_float:
        return scale(1.0 / n, total)
    return scale(Fraction(1, n), total)


def measure_A(a: Vector3, lam: int) -> Multivector:
    a = embed(_unit(a))
    return mul(neg(a), scale(int(Sign(lam)), a))


def measure_B(b: Vector3, lam: int) -> Multivector:
    b = embed(_unit(b))
    return mul(scale(int(Sign(lam)), b), b)


def raw_correlation(a: Vector3, b: Vector3, ls: LambdaStream) -> Multivector:
    a, b = _unit(a), _unit(b)
    return _mean_over(ls, lambda lam: mul(measure_A(a, lam), measure_B(b, lam)))


def normalized_correlation(a: Vector3, b: Vector3, ls: LambdaStream) -> CorrelationEstimate:
    """Raw correlation left-divided by ``-a`` and right-divided by ``b``."""
    a, b = _unit(a), _unit(b)
    raw = raw_correlation(a, b, ls)
    value = mul(mul(inverse(neg(embed(a))), raw), inverse(embed(b)))
    return CorrelationEstimate(value, len(ls), TableMode.CORRECT)


def table_pair_product(a: Vector3, b: Vector3, lam: int, mode: TableMode) -> Multivector:
    """``sum_jk a_j b_k b_j(lam) b_k(lam)`` expanded through the lam-table."""
    a, b = _unit(a), _unit(b)
    total = None
    for j in (1, 2, 3):
        for k in (1, 2, 3):
            term = scale(a[j - 1] * b[k - 1], table_product(j, k, lam, mode))
            total = term if total is None else add(total, term)
    return total


def estimator_by_table(
    a: Vector3, b: Vector3, ls: LambdaStream, mode: TableMode
) -> CorrelationEstimate:
    a, b = _unit(a), _unit(b)
    cache = {lam: table_pair_product(a, b, lam, mode) for lam in Sign}
    return CorrelationEstimate(_mean_over(ls, cache.__getitem__), len(ls), mode)


def christian_claim(a: Vector3, b: Vector3) -> Multivector:
    """The claimed correlation ``-a.b``."""
    return Multivector.scalar(-dot(_unit(a), _unit(b)))


def corrected_closed_form(a: Vector3, b: Vector3) -> Multivector:
    """``-a.b - a^b``, the value the estimators actually produce."""
    a, b = _unit(a), _unit(b)
    return neg(add(Multivector.scalar(dot(a, b)), embed(wedge_coeffs(a, b))))
