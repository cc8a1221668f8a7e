"""Energy-like endpoint invariant of the transport and its decay in ``c``.

    E_a(c, t) = [conj(m) a**2 + 2 n a conj(b) - m conj(b)**2]_0^t

Along lines it vanishes identically; along bent analytic curves it decays
like ``1/c``.  The substitution ``a = sqrt(m) alpha`` gives the companion
quantity ``E_alpha = [alpha'**2/c**2 + alpha**2]_0^t`` and the exact bridge

    E_a = E_alpha + [M a (a' - M a / 4) / (m c**2)]_0^t,   M = m'/m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curve import M_FLOOR, Curve
from .errors import MVanishes, ZeroC
from .transport import DenseTrack, IntegratorOptions, holonomy, track_derivatives

ENVELOPE_SAMPLES = 17
LINE_FLOOR = 1e-9


def _require_m(curve: Curve, t0: float, t: float, n: int = 257):
    ts = np.linspace(t0, t, n)
    if np.min(np.abs(curve.frame_arrays(ts).m)) <= M_FLOOR:
        raise MVanishes("|m| falls below the floor on [t0, t]; conjugate the frame first")


def energy_from_endpoint(curve: Curve, t: float, a, b, t0: float | None = None):
    """``E_a`` from given transport values ``(a, b)`` at ``t``; broadcasts over arrays."""
    t0 = curve.domain[0] if t0 is None else float(t0)
    fa = curve.frame_arrays(np.array([t0, t], dtype=float))
    m, n = fa.m[1], fa.n[1]
    # at t0 the transport is the identity: the density is conj(m(t0))
    val = np.conj(m) * a * a + 2 * n * a * np.conj(b) - m * np.conj(b) ** 2 - np.conj(fa.m[0])
    return val if np.ndim(val) else complex(val)


def energy_a(curve: Curve, c: float, t: float, opts: IntegratorOptions | None = None,
             t0: float | None = None) -> complex:
    """``E_a(c, t)`` from the transport endpoint values (no quadrature).

    Raises
    ------
    MVanishes
    """
    t0 = curve.domain[0] if t0 is None else float(t0)
    if t == t0:
        return 0j
    _require_m(curve, t0, t)
    g = holonomy(curve, c, t, opts, t0=t0).g
    return energy_from_endpoint(curve, t, g.a, g.b, t0)


def energy_a_crosscheck(curve: Curve, c: float, t: float, opts: IntegratorOptions | None = None,
                        t0: float | None = None) -> complex:
    """The same invariant written as ``[(a'**2/c**2 + a**2)/m]_0^t``.

    Raises
    ------
    ZeroC, MVanishes
    """
    if c == 0:
        raise ZeroC("the a'/c form needs c != 0")
    t0 = curve.domain[0] if t0 is None else float(t0)
    if t == t0:
        return 0j
    _require_m(curve, t0, t)
    g = holonomy(curve, c, t, opts, t0=t0).g
    ts = np.array([t0, t], dtype=float)
    a = np.array([1.0 + 0j, g.a])
    b = np.array([0j, g.b])
    a, da, *_ = track_derivatives(curve, c, ts, a, b)
    m = curve.frame_arrays(ts).m
    q = (da * da / (c * c) + a * a) / m
    return complex(q[1] - q[0])


@dataclass
class AlphaTrack:
    t_grid: np.ndarray
    alpha: np.ndarray
    branch_flips: int
    sqrt_m: np.ndarray


def continuous_sqrt(m):
    """Square root of a sampled ``m`` continued along the samples.

    Starts from the principal root and at every step picks the sign nearer
    to the previous root.  Returns ``(roots, flips)`` where ``flips`` counts
    the steps at which the principal root jumps sides.
    """
    m = np.asarray(m, dtype=complex)
    r = np.sqrt(m)
    out = r.copy()
    sign = 1.0
    flips = 0
    for k in range(1, r.size):
        cand = sign * r[k]
        if abs(cand - out[k - 1]) > abs(cand + out[k - 1]):
            sign = -sign
            flips += 1
        out[k] = sign * r[k]
    return out, flips


def alpha_decompose(t_grid, a, m) -> AlphaTrack:
    """``alpha = a / sqrt(m)`` with the continued square root.

    Raises
    ------
    MVanishes
    """
    m = np.asarray(m, dtype=complex)
    if np.min(np.abs(m)) <= M_FLOOR:
        raise MVanishes("alpha needs m != 0 along the track")
    root, flips = continuous_sqrt(m)
    return AlphaTrack(np.asarray(t_grid, dtype=float), np.asarray(a) / root, flips, root)


def alpha_track(curve: Curve, c: float, t: float, opts: IntegratorOptions | None = None):
    """Dense transport track and its :class:`AlphaTrack`."""
    t0 = curve.domain[0]
    _require_m(curve, t0, t)
    tr = holonomy(curve, c, t, opts, dense=True).track
    m = curve.frame_arrays(tr.t).m
    return tr, alpha_decompose(tr.t, tr.a, m)


def _alpha_dot(curve, c, tr: DenseTrack, al: AlphaTrack):
    fa = curve.frame_arrays(tr.t)
    a, da, *_ = track_derivatives(curve, c, tr.t, tr.a, tr.b)
    M = fa.dm / fa.m
    return (da - 0.5 * M * a) / al.sqrt_m


def energy_alpha(curve: Curve, c: float, t: float, opts: IntegratorOptions | None = None) -> complex:
    """``[alpha'**2/c**2 + alpha**2]_0^t``; the result does not depend on the branch.

    Raises
    ------
    ZeroC, MVanishes
    """
    if c == 0:
        raise ZeroC("E_alpha needs c != 0")
    if t == curve.domain[0]:
        return 0j
    tr, al = alpha_track(curve, c, t, opts)
    dal = _alpha_dot(curve, c, tr, al)
    q = dal * dal / (c * c) + al.alpha**2
    return complex(q[-1] - q[0])


def bridge_term(curve: Curve, c: float, t: float, opts: IntegratorOptions | None = None) -> complex:
    """``[M a (a' - M a/4) / (m c**2)]_0^t``, the gap between ``E_a`` and ``E_alpha``."""
    if c == 0:
        raise ZeroC("the bridge term needs c != 0")
    t0 = curve.domain[0]
    if t == t0:
        return 0j
    _require_m(curve, t0, t)
    g = holonomy(curve, c, t, opts).g
    ts = np.array([t0, t], dtype=float)
    a, da, *_ = track_derivatives(curve, c, ts, np.array([1.0 + 0j, g.a]), np.array([0j, g.b]))
    fa = curve.frame_arrays(ts)
    M = fa.dm / fa.m
    q = M * a * (da - 0.25 * M * a) / (fa.m * c * c)
    return complex(q[1] - q[0])


def rho_sigma(curve: Curve, t):
    """``rho = M**2/4 - M'/2`` and ``sigma = i (n' - M n)`` on a grid of ``t``."""
    fa = curve.frame_arrays(np.asarray(t, dtype=float))
    if np.min(np.abs(fa.m)) <= M_FLOOR:
        raise MVanishes("rho and sigma need m != 0")
    M = fa.dm / fa.m
    dM = (fa.ddm * fa.m - fa.dm**2) / fa.m**2
    return 0.25 * M * M - 0.5 * dM, 1j * (fa.dn - M * fa.n)


def adot_bound(curve: Curve, c: float, track: DenseTrack):
    """``(sup|a'|, |c| (sup|n| + sup|m|))`` over a dense track."""
    fa = curve.frame_arrays(track.t)
    _, da, *_ = track_derivatives(curve, c, track.t, track.a, track.b)
    return float(np.max(np.abs(da))), abs(c) * (float(np.max(np.abs(fa.n))) + float(np.max(np.abs(fa.m))))


@dataclass
class EnergyTrace:
    t: float
    c_grid: np.ndarray
    values: np.ndarray
    fitted_exponent: float
    fit_residual: float
    envelope: np.ndarray | None = None


def energy_envelope(curve: Curve, c: float, t: float, opts=None, samples: int = ENVELOPE_SAMPLES) -> float:
    """``max |E_a|`` over one oscillation period ``[c, c + pi/t]``."""
    cs = np.linspace(c, c + math.pi / abs(t - curve.domain[0]), samples)
    return max(abs(energy_a(curve, x, t, opts)) for x in cs)


def decay_scan(curve: Curve, t: float, c_grid, opts: IntegratorOptions | None = None,
               envelope_samples: int = ENVELOPE_SAMPLES, mapper=map) -> EnergyTrace:
    """``E_a`` over a positive ascending grid and its fitted power-law decay.

    ``E_a(c)`` oscillates in ``c`` with period about ``pi/t`` and passes close
    to zero, so the slope is fitted to the period-resolved envelope
    ``max |E_a|`` over ``[c, c + pi/t]`` on the upper half of the grid,
    keeping only envelope values above ``1e-14``.  When every value is below
    ``1e-9`` (lines) the exponent and residual are NaN.

    ``mapper`` may be a parallel ``map`` such as ``ThreadPoolExecutor.map``.
    """
    c_grid = np.asarray(c_grid, dtype=float)
    if c_grid.size < 8:
        raise ValueError("decay_scan needs at least 8 grid points")
    if np.any(c_grid <= 0) or np.any(np.diff(c_grid) <= 0):
        raise ValueError("c_grid must be positive and strictly increasing")
    values = np.array(list(mapper(lambda c: energy_a(curve, c, t, opts), c_grid)), dtype=complex)
    if np.max(np.abs(values)) < LINE_FLOOR:
        return EnergyTrace(t, c_grid, values, math.nan, math.nan)
    upper = c_grid[c_grid.size // 2:]
    env = np.array(list(mapper(lambda c: energy_envelope(curve, c, t, opts, envelope_samples), upper)))
    slope, resid = fit_decay(upper, env)
    return EnergyTrace(t, c_grid, values, slope, resid, env)


def fit_decay(c, env):
    """Least-squares slope and RMS residual of ``log env`` against ``log c``.

    Only values above ``1e-14`` enter; fewer than two gives NaN.
    """
    c, env = np.asarray(c, dtype=float), np.asarray(env, dtype=float)
    keep = env > 1e-14
    if keep.sum() < 2:
        return math.nan, math.nan
    x, y = np.log(c[keep]), np.log(env[keep])
    slope, icpt = np.polyfit(x, y, 1)
    return float(slope), float(np.sqrt(np.mean((y - (slope * x + icpt)) ** 2)))


def derivative_identity_check(curve: Curve, c: float, t_grid, opts: IntegratorOptions | None = None) -> float:
    """``max |conj(m') a**2 + 2 n' a conj(b) - m' conj(b)**2|`` over ``t_grid``.

    Zero for lines.  For bent curves it is generically nonzero.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    fa = curve.frame_arrays(t_grid)
    a = np.empty(t_grid.shape, complex)
    b = np.empty(t_grid.shape, complex)
    for i, t in enumerate(t_grid):
        g = holonomy(curve, c, t, opts).g
        a[i], b[i] = g.a, g.b
    val = np.conj(fa.dm) * a * a + 2 * fa.dn * a * np.conj(b) - fa.dm * np.conj(b) ** 2
    return float(np.max(np.abs(val)))
