"""Independent reference computations used by the tests.

The even subalgebra is represented faithfully by 2x2 complex matrices with
``b_j -> i sigma_j``; products are then plain matrix products.  Exact checks
use sympy matrices over the Gaussian rationals, float checks use numpy.
"""

import numpy as np
import sympy

_PAULI = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]
_PAULI_SYM = [
    sympy.Matrix([[0, 1], [1, 0]]),
    sympy.Matrix([[0, -sympy.I], [sympy.I, 0]]),
    sympy.Matrix([[1, 0], [0, -1]]),
]


def to_matrix(components):
    s, x1, x2, x3 = (float(c) for c in components)
    return s * np.eye(2) + 1j * (x1 * _PAULI[0] + x2 * _PAULI[1] + x3 * _PAULI[2])


def from_matrix(m):
    s = m.trace().real / 2
    x = [(-(1j) * np.trace(p @ m) / 2).real for p in _PAULI]
    return (s, *x)


def mul_float(p, q):
    return from_matrix(to_matrix(p) @ to_matrix(q))


def to_sym(components):
    s, x1, x2, x3 = (sympy.Rational(str(c)) for c in components)
    return s * sympy.eye(2) + sympy.I * (x1 * _PAULI_SYM[0] + x2 * _PAULI_SYM[1] + x3 * _PAULI_SYM[2])


def from_sym(m):
    # m = [[s + i x3, x2 + i x1], [-x2 + i x1, s - i x3]]
    m00 = sympy.expand(m[0, 0])
    m01 = sympy.expand(m[0, 1])
    return (sympy.re(m00), sympy.im(m01), sympy.re(m01), sympy.im(m00))


def mul_exact(p, q):
    """Exact product as a tuple of sympy Rationals."""
    return from_sym(to_sym(p) * to_sym(q))


def cross(a, b):
    return tuple(np.cross(np.asarray(a, float), np.asarray(b, float)))


def sign_model_correlation(theta, grid=200_000):
    """Midpoint quadrature of E[sign(a.h) * -sign(b.h)] over the in-plane angle of h.

    For a uniform direction on the sphere, the projection onto the plane of
    ``a`` and ``b`` has a uniform polar angle, so a 1-D average suffices.
    """
    phi = (np.arange(grid) + 0.5) * (2 * np.pi / grid)
    sa = np.where(np.cos(phi) >= 0, 1, -1)
    sb = -np.where(np.cos(phi - theta) >= 0, 1, -1)
    return float(np.mean(sa * sb))
