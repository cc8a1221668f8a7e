"""Closed-form transports for constant-coefficient curves.

With ``a'' + i lam a' + (c**2 - c varkappa) a = 0`` (see
:class:`~holonomy_lab.curve.SpiralParams`) and the initial data ``a(0) = 1``,
``a'(0) = i c n0``, ``b(0) = 0``, ``b'(0) = i c m0``:

    Delta = sqrt(lam**2/4 + c (c - varkappa))
    a(t)  = exp(-i lam t/2) (cos(Delta t) + i (c n0 + lam/2) sin(Delta t)/Delta)
    b(t)  = exp(-i lam t/2) i c m0 sin(Delta t)/Delta
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import SU2Element
from .curve import SpiralParams
from .errors import DegenerateLine, NonPositiveC

SINC_GUARD = 1e-4


def delta(c, p: SpiralParams):
    """Frequency ``sqrt((c - varkappa/2)**2 + (lam**2 - varkappa**2)/4)`` (>= 0)."""
    c = np.asarray(c, dtype=float)
    half = 0.5 * p.varkappa
    # completed-square form is non-negative whenever |varkappa| <= |lam|
    val = (c - half) ** 2 + 0.25 * (p.lam**2 - p.varkappa**2)
    out = np.sqrt(np.maximum(val, 0.0))
    return out if out.ndim else float(out)


def _sin_over(D, t):
    """``sin(D t)/D`` with the removable singularity at ``D = 0`` filled in."""
    D = np.asarray(D, dtype=float)
    x = D * t
    small = np.abs(x) < SINC_GUARD
    safe = np.where(small, 1.0, D)
    out = np.where(small, t - D * D * t**3 / 6.0, np.sin(x) / safe)
    return out


def line_solution(m0: complex, n0: float, c: float, t: float) -> SU2Element:
    """``(cos ct + i n0 sin ct, i m0 sin ct)``; periodic in ``c`` with period ``2 pi / t``."""
    s = math.sin(c * t)
    return SU2Element.unchecked(complex(math.cos(c * t), n0 * s), 1j * m0 * s)


def spiral_arrays(p: SpiralParams, c, t: float):
    """Vectorized ``(a, b)`` of the spiral closed form over an array of ``c``."""
    c = np.asarray(c, dtype=float)
    D = delta(c, p)
    so = _sin_over(D, t)
    phase = np.exp(-0.5j * p.lam * t)
    a = phase * (np.cos(D * t) + 1j * (c * p.n0 + 0.5 * p.lam) * so)
    b = phase * 1j * c * p.m0 * so
    return a, b


def spiral_solution(p: SpiralParams, c: float, t: float) -> SU2Element:
    a, b = spiral_arrays(p, float(c), float(t))
    return SU2Element.unchecked(complex(a), complex(b))


def f_function(c, p: SpiralParams, t: float):
    """``(c/Delta) sin(Delta t)``, equal to ``c t`` where ``Delta = 0``.

    ``|b|`` of :func:`spiral_solution` equals ``|m0| * |f|``.
    """
    c = np.asarray(c, dtype=float)
    out = c * _sin_over(delta(c, p), t)
    return out if out.ndim else float(out)


def envelope_phi(c, p: SpiralParams):
    """``c / Delta(c)`` for ``c > 0``; tends to 1.

    For ``varkappa <= 0`` it increases strictly on ``c > 0``.  For
    ``varkappa > 0`` it overshoots 1 and decreases for ``c > lam**2/(2 varkappa)``;
    the sign flip ``c -> -c`` maps that case onto the first.

    Raises
    ------
    NonPositiveC
    """
    c = np.asarray(c, dtype=float)
    if np.any(c <= 0):
        raise NonPositiveC("envelope is defined for c > 0")
    out = c / delta(c, p)
    return out if out.ndim else float(out)


@dataclass
class ZeroLattice:
    """Zeros ``c_{+-k}`` of ``f`` for ``k0 <= k <= k_max``."""

    lam: float
    varkappa: float
    t: float
    k0: int
    zeros: dict

    def positive(self) -> np.ndarray:
        return np.array([self.zeros[k][1] for k in sorted(self.zeros)])

    def negative(self) -> np.ndarray:
        return np.array([self.zeros[k][0] for k in sorted(self.zeros)])


def zero_lattice(p: SpiralParams, t: float, k_max: int) -> ZeroLattice:
    """Zeros ``varkappa/2 +- sqrt(pi^2 k^2/t^2 - (lam^2 - varkappa^2)/4)``.

    ``k0`` is the smallest positive ``k`` with a real square root.

    Raises
    ------
    DegenerateLine
        ``lam == 0``.
    """
    if p.lam == 0:
        raise DegenerateLine("the zero lattice needs lam != 0")
    if not t > 0:
        raise ValueError("t must be positive")
    gap2 = 0.25 * (p.lam**2 - p.varkappa**2)
    k0 = max(1, math.ceil(t / (2 * math.pi) * math.sqrt(p.lam**2 - p.varkappa**2)))
    # guard against ceil() overshooting an exact integer by rounding
    if k0 > 1 and (math.pi * (k0 - 1) / t) ** 2 - gap2 >= -1e-12 * max(gap2, 1.0):
        k0 -= 1
    ks = np.arange(k0, max(k0, k_max) + 1)
    root = np.sqrt(np.maximum((math.pi * ks / t) ** 2 - gap2, 0.0))
    half = 0.5 * p.varkappa
    zeros = {int(k): (float(half - r), float(half + r)) for k, r in zip(ks, root)}
    return ZeroLattice(p.lam, p.varkappa, t, k0, zeros)


@dataclass
class APDecomposition:
    c: np.ndarray
    periodic_a: np.ndarray
    periodic_b: np.ndarray
    residual_a: np.ndarray
    residual_b: np.ndarray
    residual_sup_tail: float

    @property
    def residual(self) -> np.ndarray:
        return np.sqrt(np.abs(self.residual_a) ** 2 + np.abs(self.residual_b) ** 2)


def periodic_part(p: SpiralParams, c, t: float):
    """Large-``c`` linearization: ``Delta -> c - varkappa/2`` and ``c/Delta -> 1``."""
    c = np.asarray(c, dtype=float)
    D = c - 0.5 * p.varkappa
    phase = np.exp(-0.5j * p.lam * t)
    s = np.sin(D * t)
    return phase * (np.cos(D * t) + 1j * p.n0 * s), phase * 1j * p.m0 * s


def ap_plus_decay_decompose(p: SpiralParams, t: float, c_grid) -> APDecomposition:
    """Split the spiral transport into a ``2 pi/t``-periodic part and a decaying rest.

    ``residual_sup_tail`` is the sup of the residual over the top decade
    ``|c| >= max|c| / 10`` of the grid.  For ``lam == 0`` the residual is 0.
    """
    c = np.asarray(c_grid, dtype=float)
    if p.lam == 0:
        pa, pb = periodic_part(p, c, t)
        zero = np.zeros_like(pa)
        return APDecomposition(c, pa, pb, zero, zero.copy(), 0.0)
    a, b = spiral_arrays(p, c, t)
    pa, pb = periodic_part(p, c, t)
    ra, rb = a - pa, b - pb
    res = np.sqrt(np.abs(ra) ** 2 + np.abs(rb) ** 2)
    cabs = np.abs(c)
    tail = cabs >= cabs.max() / 10.0
    return APDecomposition(c, pa, pb, ra, rb, float(res[tail].max()))
