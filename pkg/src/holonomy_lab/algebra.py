"""SU(2) and su(2) primitives.

Group elements are stored as the complex pair ``(a, b)`` of the matrix

    [[ a,        b      ],
     [ -conj(b), conj(a)]]

with ``|a|**2 + |b|**2 == 1``.  Lie-algebra elements that occur as ODE
generators are written ``i * [[p, q], [conj(q), -p]]`` with real ``p`` and
complex ``q``; the array helpers at the bottom of this module work in that
``(p, q)`` coordinate system and broadcast over numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12

# The fixed basis of su(2) used by the homogeneous isotropic connection.
TAU1 = np.array([[0, -1j], [-1j, 0]], dtype=complex)
TAU2 = np.array([[0, -1], [1, 0]], dtype=complex)
TAU3 = np.array([[-1j, 0], [0, 1j]], dtype=complex)
TAU = (TAU1, TAU2, TAU3)


@dataclass(frozen=True)
class SU2Element:
    """Unit-determinant 2x2 unitary matrix stored as ``(a, b)``."""

    a: complex
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        drift = abs(self.norm2 - 1.0)
        if not drift <= NORM_TOL:
            raise ValueError(
                f"|a|^2 + |b|^2 = {self.norm2!r} deviates from 1 by {drift:.3e}"
            )

    @classmethod
    def unchecked(cls, a, b) -> "SU2Element":
        """Build an element without the norm check (results of arithmetic)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", complex(a))
        object.__setattr__(obj, "b", complex(b))
        return obj

    @classmethod
    def identity(cls) -> "SU2Element":
        return cls.unchecked(1.0, 0.0)

    @classmethod
    def from_matrix(cls, g) -> "SU2Element":
        g = np.asarray(g, dtype=complex)
        if g.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        if abs(g[1, 0] + np.conj(g[0, 1])) > 1e-9 or abs(g[1, 1] - np.conj(g[0, 0])) > 1e-9:
            raise ValueError("matrix is not of SU(2) form")
        return cls(g[0, 0], g[0, 1])

    @property
    def norm2(self) -> float:
        return self.a.real**2 + self.a.imag**2 + self.b.real**2 + self.b.imag**2

    def matrix(self) -> np.ndarray:
        a, b = self.a, self.b
        return np.array([[a, b], [-b.conjugate(), a.conjugate()]], dtype=complex)

    def renormalize(self) -> "SU2Element":
        s = 1.0 / np.sqrt(self.norm2)
        return SU2Element.unchecked(self.a * s, self.b * s)

    def inverse(self) -> "SU2Element":
        return su2_inverse(self)

    def __matmul__(self, other: "SU2Element") -> "SU2Element":
        return su2_mul(self, other)

    def __iter__(self):
        yield self.a
        yield self.b


def su2_mul(g: SU2Element, h: SU2Element) -> SU2Element:
    """Matrix product ``g @ h`` in ``(a, b)`` coordinates."""
    a1, b1 = g.a, g.b
    a2, b2 = h.a, h.b
    return SU2Element.unchecked(
        a1 * a2 - b1 * b2.conjugate(),
        a1 * b2 + b1 * a2.conjugate(),
    )


def su2_inverse(g: SU2Element) -> SU2Element:
    # g^{-1} = g^dagger for unitary g
    return SU2Element.unchecked(g.a.conjugate(), -g.b)


def su2_conjugate(h: SU2Element, X) -> np.ndarray:
    """Return ``h X h^{-1}`` for a 2x2 complex matrix ``X``."""
    H = h.matrix()
    return H @ np.asarray(X, dtype=complex) @ H.conj().T


def su2_distance(g: SU2Element, h: SU2Element) -> float:
    """Frobenius norm of ``g - h`` (equals ``sqrt(2) * |(da, db)|``)."""
    da = g.a - h.a
    db = g.b - h.b
    return float(np.sqrt(2.0 * (abs(da) ** 2 + abs(db) ** 2)))


# ---------------------------------------------------------------------------
# vectorized helpers in (a, b) and (p, q) coordinates


def mul_arrays(a1, b1, a2, b2):
    """Elementwise SU(2) product of ``(a1, b1)`` and ``(a2, b2)``."""
    return a1 * a2 - b1 * np.conj(b2), a1 * b2 + b1 * np.conj(a2)


def norm2_arrays(a, b):
    return a.real**2 + a.imag**2 + b.real**2 + b.imag**2


def exp_generator(p, q):
    """Exponential of ``i [[p, q], [conj(q), -p]]`` as ``(a, b)`` arrays.

    The result is exactly of SU(2) form; ``cos(theta)**2 + sinc**2 theta**2``
    is normalized once more to remove the rounding of the trigonometric pair.
    """
    theta = np.sqrt(p * p + q.real**2 + q.imag**2)
    s = np.sinc(theta / np.pi)
    a = np.cos(theta) + 1j * (s * p)
    b = 1j * (s * q)
    nrm = np.sqrt(norm2_arrays(a, b))
    return a / nrm, b / nrm


def commutator(p1, q1, p2, q2):
    """``[X1, X2]`` for ``Xj = i [[pj, qj], [conj(qj), -pj]]`` in ``(p, q)`` form."""
    return -2.0 * np.imag(q1 * np.conj(q2)), 2j * (p1 * q2 - p2 * q1)


def generator_matrix(p, q) -> np.ndarray:
    """Expand a single ``(p, q)`` generator to its 2x2 matrix."""
    return 1j * np.array([[p, q], [np.conj(q), -p]], dtype=complex)
