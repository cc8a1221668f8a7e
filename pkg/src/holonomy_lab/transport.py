"""Parallel transport of scaled homogeneous connections along a curve.

The transport ``g_c(t)`` solves ``g' = i c [[n, m], [conj(m), -n]] g`` with
``g(0) = 1``, i.e. in ``(a, b)`` coordinates

    a' = i c (n a - m conj(b))
    b' = i c (n b + m conj(a)).

The anisotropic connection ``c1 tau1 dx + c2 tau2 dy + c3 tau3 dz`` replaces
``c n`` by ``c3 n`` and ``c m`` by ``c1 Re(m) + i c2 Im(m)``; the isotropic
solver is literally the anisotropic one at ``(c, c, c)``.

Each step is the exponential of a sixth-order Magnus approximant built from
three Gauss-Legendre nodes, so every step propagator is exactly in SU(2).
The step is ``min(base_step, 2 pi / (oscillation_factor * max(1, |c|)))``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import SU2Element, commutator, exp_generator, mul_arrays, norm2_arrays
from .curve import M_FLOOR, Curve
from .errors import MVanishes, OutOfDomain, StepBudgetExceeded

C_LIMIT = 1e6
_G = math.sqrt(15.0) / 10.0
_NODES = (0.5 - _G, 0.5, 0.5 + _G)


@dataclass(frozen=True)
class IntegratorOptions:
    base_step: float = 0.01
    oscillation_factor: float = 40.0
    max_steps: int = 5_000_000
    renormalize_every: int = 1
    dense_samples: int = 4096

    def __post_init__(self):
        if not self.base_step > 0:
            raise ValueError("base_step must be positive")
        if not self.oscillation_factor >= 20:
            raise ValueError("oscillation_factor must be >= 20")
        if self.max_steps < 1 or self.renormalize_every < 1 or self.dense_samples < 2:
            raise ValueError("max_steps, renormalize_every must be >= 1, dense_samples >= 2")

    def step_size(self, c_abs: float) -> float:
        return min(self.base_step, 2 * math.pi / (self.oscillation_factor * max(1.0, c_abs)))

    def step_count(self, span: float, c_abs: float) -> int:
        n = max(1, math.ceil(abs(span) / self.step_size(c_abs) - 1e-9))
        if n > self.max_steps:
            raise StepBudgetExceeded(f"{n} steps needed, budget is {self.max_steps}")
        return n


DEFAULT_OPTIONS = IntegratorOptions()


@dataclass
class DenseTrack:
    """Transport sampled at step boundaries ``t[0] = t0, ..., t[-1] = t``."""

    t: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: object


@dataclass
class TransportResult:
    g: SU2Element
    c: object
    t: float
    steps: int
    unitarity_drift: float
    max_residual2: float | None = None
    track: DenseTrack | None = field(default=None, repr=False)
    t0: float = 0.0


@functools.lru_cache(maxsize=32)
def _node_coefficients(curve: Curve, t0: float, t1: float, steps: int):
    h = (t1 - t0) / steps
    k = np.arange(steps, dtype=float)
    nodes = np.concatenate([t0 + (k + x) * h for x in _NODES])
    lo, hi = curve.domain
    nodes = np.clip(nodes, min(lo, t0, t1), max(hi, t0, t1))
    m, n = curve.coefficients(nodes)
    return m.reshape(3, steps), n.reshape(3, steps)


def _step_propagators(curve, cvec, t0, t1, steps):
    """Exact-SU(2) one-step propagators ``E_k`` for all steps."""
    c1, c2, c3 = cvec
    m, n = _node_coefficients(curve, t0, t1, steps)
    p = c3 * n
    q = c1 * m.real + 1j * (c2 * m.imag)
    h = (t1 - t0) / steps
    (p1, p2, p3), (q1, q2, q3) = p, q
    # Magnus-6 in (p, q) coordinates
    s15 = math.sqrt(15.0) * h / 3.0
    a1p, a1q = h * p2, h * q2
    a2p, a2q = s15 * (p3 - p1), s15 * (q3 - q1)
    a3p, a3q = (10 * h / 3) * (p3 - 2 * p2 + p1), (10 * h / 3) * (q3 - 2 * q2 + q1)
    C1p, C1q = commutator(a1p, a1q, a2p, a2q)
    t_p, t_q = commutator(a1p, a1q, 2 * a3p + C1p, 2 * a3q + C1q)
    C2p, C2q = -t_p / 60.0, -t_q / 60.0
    Wp, Wq = commutator(-20 * a1p - a3p + C1p, -20 * a1q - a3q + C1q, a2p + C2p, a2q + C2q)
    P = a1p + a3p / 12.0 + Wp / 240.0
    Q = a1q + a3q / 12.0 + Wq / 240.0
    return exp_generator(P, Q)


def _reduce(ea, eb, renormalize_every=1):
    """Ordered product ``E_{N-1} ... E_0`` by pairwise reduction."""
    drift = 0.0
    level = 0
    while ea.size > 1:
        if ea.size % 2:
            ea = np.append(ea, 1.0 + 0j)
            eb = np.append(eb, 0j)
        ea, eb = mul_arrays(ea[1::2], eb[1::2], ea[0::2], eb[0::2])
        level += 1
        nrm = norm2_arrays(ea, eb)
        drift = max(drift, float(np.max(np.abs(nrm - 1.0))))
        if level % renormalize_every == 0 or ea.size == 1:
            s = 1.0 / np.sqrt(nrm)
            ea, eb = ea * s, eb * s
    return complex(ea[0]), complex(eb[0]), drift


def _scan(ea, eb, renormalize_every=1):
    """Prefix products ``P_k = E_k ... E_0`` (Hillis-Steele scan)."""
    drift = 0.0
    d = 1
    level = 0
    pa, pb = ea.copy(), eb.copy()
    while d < pa.size:
        na, nb = mul_arrays(pa[d:], pb[d:], pa[:-d], pb[:-d])
        pa = np.concatenate([pa[:d], na])
        pb = np.concatenate([pb[:d], nb])
        level += 1
        nrm = norm2_arrays(pa, pb)
        drift = max(drift, float(np.max(np.abs(nrm - 1.0))))
        if level % renormalize_every == 0 or 2 * d >= pa.size:
            s = 1.0 / np.sqrt(nrm)
            pa, pb = pa * s, pb * s
        d *= 2
    return pa, pb, drift


def _check_args(curve, cmax, t, t0):
    if not cmax < C_LIMIT:
        raise ValueError(f"|c| must be below {C_LIMIT:g}")
    curve.check_domain(np.array([t0, t]))
    if not (math.isfinite(t) and math.isfinite(t0)):
        raise OutOfDomain("non-finite arc length")


def holonomy_aniso(curve: Curve, cvec, t: float, opts: IntegratorOptions | None = None,
                   t0: float | None = None, dense: bool = False) -> TransportResult:
    """Transport for ``A_c = c1 tau1 dx + c2 tau2 dy + c3 tau3 dz`` from ``t0`` to ``t``.

    ``t < t0`` transports backwards.  With ``dense=True`` the result carries
    a :class:`DenseTrack` of at most ``opts.dense_samples`` (+1) samples.

    Raises
    ------
    OutOfDomain, StepBudgetExceeded
    """
    opts = opts or DEFAULT_OPTIONS
    cvec = tuple(float(x) for x in cvec)
    if len(cvec) != 3:
        raise ValueError("cvec needs three components")
    t = float(t)
    t0 = curve.domain[0] if t0 is None else float(t0)
    cmax = max(abs(x) for x in cvec)
    _check_args(curve, cmax, t, t0)
    label = cvec if len(set(cvec)) > 1 else cvec[0]
    if t == t0:
        g = SU2Element.identity()
        track = DenseTrack(np.array([t0]), np.array([1.0 + 0j]), np.array([0j]), label) if dense else None
        return TransportResult(g, label, t, 0, 0.0, track=track, t0=t0)
    steps = opts.step_count(t - t0, cmax)
    ea, eb = _step_propagators(curve, cvec, t0, t, steps)
    track = None
    if dense:
        pa, pb, drift = _scan(ea, eb, opts.renormalize_every)
        stride = max(1, math.ceil(steps / opts.dense_samples))
        idx = np.arange(0, steps + 1, stride)
        if idx[-1] != steps:
            idx = np.append(idx, steps)
        h = (t - t0) / steps
        ta = t0 + idx * h
        ta[-1] = t
        ta_a = np.where(idx == 0, 1.0 + 0j, pa[np.maximum(idx - 1, 0)])
        ta_b = np.where(idx == 0, 0j, pb[np.maximum(idx - 1, 0)])
        track = DenseTrack(ta, ta_a, ta_b, label)
        a, b = complex(pa[-1]), complex(pb[-1])
    else:
        a, b, drift = _reduce(ea, eb, opts.renormalize_every)
    return TransportResult(SU2Element.unchecked(a, b), label, t, steps, drift, track=track, t0=t0)


def holonomy(curve: Curve, c: float, t: float, opts: IntegratorOptions | None = None,
             t0: float | None = None, dense: bool = False) -> TransportResult:
    """Isotropic transport ``g_c`` along ``curve`` from ``t0`` (default start) to ``t``."""
    c = float(c)
    return holonomy_aniso(curve, (c, c, c), t, opts, t0=t0, dense=dense)


def holonomy_sweep(curve: Curve, c_grid, t: float, opts: IntegratorOptions | None = None):
    """Transport at every ``c`` of a grid; per-``c`` results equal :func:`holonomy`.

    Returns
    -------
    a, b : complex arrays
    drift : float array
    steps : int array
    """
    c_grid = np.asarray(c_grid, dtype=float)
    a = np.empty(c_grid.shape, complex)
    b = np.empty(c_grid.shape, complex)
    drift = np.empty(c_grid.shape)
    steps = np.empty(c_grid.shape, int)
    for i, c in enumerate(c_grid):
        r = holonomy(curve, c, t, opts)
        a[i], b[i], drift[i], steps[i] = r.g.a, r.g.b, r.unitarity_drift, r.steps
    return a, b, drift, steps


def track_derivatives(curve: Curve, c: float, t, a, b):
    """Values and first two derivatives of ``a, b`` via the first-order system.

    Returns ``(a, da, dda, b, db, ddb)``.
    """
    fa = curve.frame_arrays(np.asarray(t, dtype=float))
    m, n, dm, dn = fa.m, fa.n, fa.dm, fa.dn
    ic = 1j * c
    da = ic * (n * a - m * np.conj(b))
    db = ic * (n * b + m * np.conj(a))
    dda = ic * (dn * a + n * da - dm * np.conj(b) - m * np.conj(db))
    ddb = ic * (dn * b + n * db + dm * np.conj(a) + m * np.conj(da))
    return a, da, dda, b, db, ddb


def residual_second_order(curve: Curve, c: float, track: DenseTrack):
    """Max residuals of the second-order equations for ``a`` and ``b``.

    ``a'' - i c (n' - M n) a + c^2 a - M a'`` and the analogous ``b``
    residual, with ``M = m'/m``.

    Raises
    ------
    MVanishes
        ``|m|`` is below the floor somewhere on the track.
    """
    fa = curve.frame_arrays(track.t)
    if np.min(np.abs(fa.m)) <= M_FLOOR:
        raise MVanishes("second-order form needs m != 0 along the track")
    M = fa.dm / fa.m
    a, da, dda, b, db, ddb = track_derivatives(curve, c, track.t, track.a, track.b)
    k = 1j * c * (fa.dn - M * fa.n)
    ra = dda - k * a + c * c * a - M * da
    rb = ddb - k * b + c * c * b - M * db
    return float(np.max(np.abs(ra))), float(np.max(np.abs(rb)))
