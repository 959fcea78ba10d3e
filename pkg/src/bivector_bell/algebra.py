"""Arithmetic in the even subalgebra of Cl(3,0).

An element is ``s + x1*b1 + x2*b2 + x3*b3`` where the basis bivectors obey

    b_j b_k = -delta_jk - sum_l eps_jkl b_l

so ``b1 b2 = -b3`` and every ``b_j`` squares to ``-1``.  This is the
quaternion algebra with ``b_j`` playing the role of ``-i, -j, -k``.

Coefficients live in one of two scalar modes, fixed per computation:

* exact: ``int`` or :class:`fractions.Fraction` (integral fractions are
  stored as ``int``);
* float: finite ``float``.

Mixing exact and float operands raises :class:`ModeError`.  Plain ``int``
operands are mode neutral and adopt the mode of the multivector.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

Scalar = Union[int, Fraction, float]

FLOAT_TOL = 1e-12


class ModeError(TypeError):
    """Exact and float scalars were combined in one operation."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class Sign(enum.IntEnum):
    PLUS = 1
    MINUS = -1

    def __str__(self) -> str:
        return "+1" if self is Sign.PLUS else "-1"


class TableMode(enum.Enum):
    CORRECT = "correct"
    ERRONEOUS = "erroneous"


def _exact(v: Scalar) -> bool:
    return type(v) is not float


def _canon(v: Scalar) -> Scalar:
    if type(v) is Fraction:
        return v.numerator if v.denominator == 1 else v
    if type(v) is float:
        if not math.isfinite(v):
            raise FloatingPointError(f"non-finite scalar {v!r}")
        return v
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return _canon(Fraction(v))
    if isinstance(v, float):
        return _canon(float(v))
    raise TypeError(f"unsupported scalar type {type(v).__name__}")


def _unify(values) -> tuple[Scalar, ...]:
    vals = [_canon(v) for v in values]
    has_float = any(type(v) is float for v in vals)
    if not has_float:
        return tuple(vals)
    if any(type(v) is Fraction for v in vals):
        raise ModeError("cannot mix exact fractions and floats")
    return tuple(float(v) for v in vals)


def format_scalar(v: Scalar) -> str:
    if type(v) is Fraction:
        return f"{v.numerator}/{v.denominator}"
    if type(v) is float:
        return repr(v + 0.0)
    return str(v)


@dataclass(frozen=True, slots=True)
class Multivector:
    """Real part ``s`` plus bivector coefficients ``x = (x1, x2, x3)``."""

    s: Scalar
    x: tuple[Scalar, Scalar, Scalar]

    def __init__(self, s: Scalar = 0, x=(0, 0, 0)) -> None:
        if len(x) != 3:
            raise ValueError("bivector part needs exactly three coefficients")
        s, *xs = _unify((s, *x))
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "x", tuple(xs))

    @classmethod
    def scalar(cls, c: Scalar) -> Multivector:
        return cls(c, (0, 0, 0))

    @property
    def components(self) -> tuple[Scalar, Scalar, Scalar, Scalar]:
        return (self.s, *self.x)

    @property
    def is_exact(self) -> bool:
        return all(_exact(c) for c in self.components)

    @property
    def is_float(self) -> bool:
        return any(type(c) is float for c in self.components)

    @property
    def is_real(self) -> bool:
        return all(c == 0 for c in self.x)

    @property
    def is_pure(self) -> bool:
        return self.s == 0

    def to_float(self) -> Multivector:
        return Multivector(float(self.s), tuple(float(c) for c in self.x))

    def norm2(self) -> Scalar:
        return sum(c * c for c in self.components)

    def __iter__(self) -> Iterator[Scalar]:
        return iter(self.components)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return add(self, neg(other))

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return add(other, neg(self))

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    def __rmul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return mul(other, self)

    def __neg__(self) -> Multivector:
        return neg(self)

    def __str__(self) -> str:
        s, x1, x2, x3 = (format_scalar(c) for c in self.components)
        return f"{s} + {x1}*b1 + {x2}*b2 + {x3}*b3"


def _coerce(v) -> Multivector:
    if isinstance(v, Multivector):
        return v
    if isinstance(v, (int, float, Fraction)):
        return Multivector.scalar(v)
    return NotImplemented


def _check_modes(p: Multivector, q: Multivector) -> None:
    if (p.is_float and _has_fraction(q)) or (q.is_float and _has_fraction(p)):
        raise ModeError("operands are in different scalar modes")


def _has_fraction(p: Multivector) -> bool:
    return any(type(c) is Fraction for c in p.components)


def _index(j: int) -> int:
    if isinstance(j, bool) or not isinstance(j, int) or not 1 <= j <= 3:
        raise DomainError(f"basis index must be 1, 2 or 3, got {j!r}")
    return j - 1


def basis(j: int) -> Multivector:
    x = [0, 0, 0]
    x[_index(j)] = 1
    return Multivector(0, x)


ONE = Multivector.scalar(1)
ZERO = Multivector.scalar(0)


def add(p: Multivector, q: Multivector) -> Multivector:
    _check_modes(p, q)
    return Multivector(p.s + q.s, tuple(a + b for a, b in zip(p.x, q.x)))


def neg(p: Multivector) -> Multivector:
    return Multivector(-p.s, tuple(-c for c in p.x))


def scale(c: Scalar, p: Multivector) -> Multivector:
    return mul(Multivector.scalar(c), p)


def mul(p: Multivector, q: Multivector) -> Multivector:
    """Bivector product ``p q``.

    With ``p = s + u`` and ``q = t + v`` (``u``, ``v`` pure), the table gives
    ``u v = -u.v - u x v``, hence

        p q = (s t - u.v) + (s v + t u - u x v)
    """
    _check_modes(p, q)
    s, (u1, u2, u3) = p.s, p.x
    t, (v1, v2, v3) = q.s, q.x
    return Multivector(
        s * t - u1 * v1 - u2 * v2 - u3 * v3,
        (
            s * v1 + t * u1 - (u2 * v3 - u3 * v2),
            s * v2 + t * u2 - (u3 * v1 - u1 * v3),
            s * v3 + t * u3 - (u1 * v2 - u2 * v1),
        ),
    )


def conj(p: Multivector) -> Multivector:
    return Multivector(p.s, tuple(-c for c in p.x))


def inverse(p: Multivector) -> Multivector:
    n2 = p.norm2()
    if n2 == 0:
        raise ZeroDivisionError("zero multivector has no inverse")
    c = conj(p)
    if p.is_float:
        return Multivector(c.s / n2, tuple(v / n2 for v in c.x))
    return Multivector(Fraction(c.s, n2), tuple(Fraction(v, n2) for v in c.x))


def isclose(p: Multivector, q: Multivector, tol: float = FLOAT_TOL) -> bool:
    """Componentwise absolute comparison; exact equality when both are exact."""
    if p.is_exact and q.is_exact:
        return p == q
    return all(abs(a - b) <= tol for a, b in zip(p.components, q.components))


# -- vectors ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Vector3:
    """A real 3-vector of direction components."""

    v: tuple[Scalar, Scalar, Scalar]

    def __init__(self, v1: Scalar, v2: Scalar, v3: Scalar) -> None:
        object.__setattr__(self, "v", _unify((v1, v2, v3)))

    def __iter__(self) -> Iterator[Scalar]:
        return iter(self.v)

    def __getitem__(self, i: int) -> Scalar:
        return self.v[i]

    @property
    def is_float(self) -> bool:
        return any(type(c) is float for c in self.v)

    def norm2(self) -> Scalar:
        return sum(c * c for c in self.v)

    def to_float(self) -> Vector3:
        return Vector3(*(float(c) for c in self.v))

    def __str__(self) -> str:
        return "(" + ",".join(format_scalar(c) for c in self.v) + ")"


class UnitVector3(Vector3):
    """A :class:`Vector3` of unit Euclidean norm.

    Exact components must have norm exactly 1.  Float components are accepted
    within ``FLOAT_TOL`` of unit norm and renormalized.
    """

    __slots__ = ()

    def __init__(self, v1: Scalar, v2: Scalar, v3: Scalar) -> None:
        super().__init__(v1, v2, v3)
        n2 = self.norm2()
        if self.is_float:
            n = math.sqrt(n2)
            if abs(n - 1.0) > FLOAT_TOL:
                raise DomainError(f"not a unit vector: {self} has norm {n!r}")
            object.__setattr__(self, "v", tuple(c / n for c in self.v))
        elif n2 != 1:
            raise DomainError(f"not a unit vector: {self} has squared norm {format_scalar(_canon(n2))}")

    @classmethod
    def of(cls, v: Vector3 | tuple) -> UnitVector3:
        if isinstance(v, UnitVector3):
            return v
        return cls(*v)

    @classmethod
    def from_angle(cls, degrees: float) -> UnitVector3:
        """Unit vector at ``degrees`` in the b1-b2 plane."""
        t = math.radians(degrees)
        return cls(math.cos(t), math.sin(t), 0.0)

    def to_float(self) -> UnitVector3:
        return UnitVector3(*(float(c) for c in self.v))


def embed(v: Vector3) -> Multivector:
    """The pure bivector ``v1 b1 + v2 b2 + v3 b3``."""
    return Multivector(0, tuple(v))


def dot(a: Vector3, b: Vector3) -> Scalar:
    a1, a2, a3, b1, b2, b3 = _unify((*a, *b))
    return _canon(a1 * b1 + a2 * b2 + a3 * b3)


def wedge_coeffs(a: Vector3, b: Vector3) -> Vector3:
    """Coefficients of ``a ^ b``, i.e. the Euclidean cross product."""
    a1, a2, a3, b1, b2, b3 = _unify((*a, *b))
    return Vector3(a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)


def decompose(p: Multivector) -> tuple[Scalar, Vector3]:
    return p.s, Vector3(*p.x)


def recompose(s: Scalar, v: Vector3) -> Multivector:
    return Multivector(s, tuple(v))


# -- lambda bases and multiplication tables --------------------------------


def levi_civita(j: int, k: int, l: int) -> int:
    return (j - k) * (k - l) * (l - j) // 2


def lambda_basis(j: int, lam: int) -> Multivector:
    """``b_j(lam) = lam * b_j``."""
    return scale(int(Sign(lam)), basis(j))


def table_product(j: int, k: int, lam: int, mode: TableMode) -> Multivector:
    """Product ``b_j(lam) b_k(lam)`` read off the lam-table.

    The table is ``-delta_jk - sum_l lam eps_jkl e_l``.  In CORRECT mode
    ``e_l = b_l(lam)``; in ERRONEOUS mode ``e_l`` is the fixed basis
    element ``b_l``, which drops one factor of ``lam``.
    """
    _index(j)
    _index(k)
    lam = int(Sign(lam))
    result = Multivector.scalar(-1 if j == k else 0)
    for l in (1, 2, 3):
        eps = levi_civita(j, k, l)
        if eps:
            e_l = lambda_basis(l, lam) if mode is TableMode.CORRECT else basis(l)
            result = add(result, scale(-lam * eps, e_l))
    return result
