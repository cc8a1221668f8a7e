"""Numerical almost-periodicity diagnostics for sampled functions of ``c``.

Every verdict is evidence over the sampled range only.  The reported range
and grid spacing travel with each verdict.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.ndimage import maximum_filter1d

from .errors import GridTooCoarse, RangeTooShort

AP_EVIDENCE = "AP_EVIDENCE"
NOT_AP_WITNESS = "NOT_AP_WITNESS"
INCONCLUSIVE = "INCONCLUSIVE"
UNIFORM_TOL = 1e-12
EPS_MIN_FRACTION = 1e-3
MIN_WINDOWS = 200
SCAN_POINTS = 4000


def default_spacing(t: float) -> float:
    """Grid spacing resolving oscillation frequency ``t`` in ``c``.

    ``min(pi/(100 t), 0.01)``.  The spline error grows like ``(h t)**4``;
    keeping ``h t <= pi/100`` holds it near ``3e-8``, below the
    ``epsilon/10`` required by :func:`find_almost_periods` at ``epsilon = 1e-6``.
    """
    return min(math.pi / (100 * abs(t)), 0.01) if t else 0.01


@dataclass
class SampledFunction:
    """Values of ``f(c)`` on a uniform ascending grid."""

    c_grid: np.ndarray
    values: np.ndarray
    source: str = ""

    def __post_init__(self):
        self.c_grid = np.asarray(self.c_grid, dtype=float)
        v = np.asarray(self.values)
        self.values = v.astype(complex) if np.iscomplexobj(v) else v.astype(float)
        if self.c_grid.ndim != 1 or self.c_grid.size < 2 or self.values.shape != self.c_grid.shape:
            raise ValueError("c_grid and values must be 1-d of equal length >= 2")
        d = np.diff(self.c_grid)
        scale = max(float(np.max(np.abs(self.c_grid[[0, -1]]))), float(d[0]))
        if not np.all(d > 0) or float(np.max(np.abs(d - self.spacing))) > UNIFORM_TOL * scale:
            raise ValueError("c_grid must be uniform and ascending")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")

    @classmethod
    def from_function(cls, fn, lo: float, hi: float, spacing: float, source: str = ""):
        n = int(round((hi - lo) / spacing)) + 1
        c = np.linspace(lo, hi, n)
        return cls(c, fn(c), source)

    @property
    def spacing(self) -> float:
        return (self.c_grid[-1] - self.c_grid[0]) / (self.c_grid.size - 1)

    @property
    def range(self) -> tuple[float, float]:
        return float(self.c_grid[0]), float(self.c_grid[-1])

    @property
    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    def spline(self) -> CubicSpline:
        return CubicSpline(self.c_grid, self.values)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)) and not isinstance(x, bool):
        return int(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


@dataclass
class APVerdict:
    verdict: str
    witness: dict | None
    range: tuple
    grid_spacing: float
    source: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return _jsonable({
            "verdict": self.verdict,
            "witness": self.witness,
            "range": list(self.range),
            "grid_spacing": self.grid_spacing,
            "source": self.source,
            "details": self.details,
        })

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "APVerdict":
        return cls(d["verdict"], d["witness"], tuple(d["range"]), d["grid_spacing"],
                   d.get("source", ""), d.get("details", {}))


# ---------------------------------------------------------------------------
# almost periods


def interpolation_error(f: SampledFunction) -> float:
    """Estimated cubic-spline error on the full grid.

    Fit on every other sample, measure on the rest, and scale by ``2**-4``
    (the spline error is fourth order in the spacing).
    """
    v = f.values
    if v.size < 9:
        return math.inf
    half = CubicSpline(f.c_grid[::2], v[::2])
    odd = f.c_grid[1::2]
    if odd[-1] > f.c_grid[::2][-1]:
        odd = odd[:-1]
    err = float(np.max(np.abs(half(odd) - v[1:1 + 2 * odd.size:2])))
    return err / 16.0


def _coarse_shift_errors(v, kmax):
    n = v.size
    stride = max(1, n // SCAN_POINTS)
    idx = np.arange(0, n, stride)
    base = v[idx]
    err = np.empty(kmax + 1)
    err[0] = 0.0
    chunk = max(1, 1_000_000 // idx.size)
    for k0 in range(1, kmax + 1, chunk):
        ks = np.arange(k0, min(kmax + 1, k0 + chunk))
        j = idx[None, :] + ks[:, None]
        ok = j < n
        d = np.abs(v[np.minimum(j, n - 1)] - base[None, :])
        err[ks] = np.max(np.where(ok, d, 0.0), axis=1)
    return err


def shift_error(f: SampledFunction, xi: float, spline: CubicSpline | None = None,
                stride: int = 1) -> float:
    """``sup_x |f(x + xi) - f(x)|`` over grid points ``x`` with ``x + xi`` in range.

    ``stride > 1`` uses every ``stride``-th grid point only.
    """
    spline = spline or f.spline()
    n = int(np.count_nonzero(f.c_grid + xi <= f.c_grid[-1]))
    if n == 0:
        return math.inf
    x = f.c_grid[:n:stride]
    return float(np.max(np.abs(spline(x + xi) - f.values[:n:stride])))


def _clusters(ks, max_len):
    """Split sorted shift indices into runs of neighbours, each at most ``max_len`` long."""
    out, cur = [], []
    for k in ks:
        if cur and (k - cur[-1] > 2 or k - cur[0] >= max_len):
            out.append(cur)
            cur = []
        cur.append(int(k))
    if cur:
        out.append(cur)
    return out


def _golden_min(fn, lo, hi, iters=64):
    """Golden-section minimizer; robust on the V-shaped shift error."""
    g = (math.sqrt(5.0) - 1) / 2
    x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(iters):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - g * (hi - lo)
            f1 = fn(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + g * (hi - lo)
            f2 = fn(x2)
    return x1 if f1 <= f2 else x2


def find_almost_periods(f: SampledFunction, epsilon: float, L: float,
                        max_tries: int = 3) -> APVerdict:
    """Search ``epsilon``-almost periods ``xi`` in ``(0, span/2]``.

    Grid shifts are scanned first; promising shifts are refined off-grid on
    a cubic spline.  The verdict is AP_EVIDENCE when every length-``L``
    interval of ``[0, span/2]`` contains a verified ``xi``, else INCONCLUSIVE.

    Raises
    ------
    GridTooCoarse
        The estimated interpolation error exceeds ``epsilon/10``.
    """
    h = f.spacing
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if L < 10 * h:
        raise ValueError("L must span at least 10 grid spacings")
    ierr = interpolation_error(f)
    if ierr > epsilon / 10:
        raise GridTooCoarse(f"interpolation error {ierr:.2e} exceeds epsilon/10 = {epsilon / 10:.2e}")
    v = f.values
    span = f.range[1] - f.range[0]
    kmax = int((span / 2) // h)
    coarse = _coarse_shift_errors(v, kmax)
    jump = float(np.max(np.abs(np.diff(v))))
    ks = np.nonzero(coarse[1:] <= epsilon + jump)[0] + 1
    spline = f.spline()
    sub = max(1, v.size // SCAN_POINTS)
    found, errs = [], []
    for group in _clusters(ks, max(1, int(L / 2 / h))):
        cand = sorted(group, key=lambda k: (coarse[k], k))
        for k in cand[:max_tries]:
            lo, hi = max((k - 1) * h, 0.5 * h), min((k + 1) * h, span / 2)
            xi = _golden_min(lambda x: shift_error(f, x, spline, sub), lo, hi)
            e = shift_error(f, xi, spline)
            grid_e = shift_error(f, k * h, spline)
            if grid_e < e:
                xi, e = k * h, grid_e
            if e <= epsilon:
                found.append(xi)
                errs.append(e)
                break
    found_a = np.array(found)
    edges = np.concatenate([[0.0], found_a, [span / 2]])
    covered = found_a.size > 0 and float(np.max(np.diff(edges))) <= L
    witness = {"almost_periods": found_a, "epsilon": epsilon, "L": L, "errors": np.array(errs)}
    verdict = AP_EVIDENCE if covered else INCONCLUSIVE
    details = {"shift_range": [0.0, span / 2], "interpolation_error": ierr}
    return APVerdict(verdict, witness, f.range, h, f.source, details)


# ---------------------------------------------------------------------------
# non-AP witness


def _first_zero_index(absf, tol):
    """Index of the first sampled zero of ``|f|`` (local minimum below ``tol``)."""
    if absf[0] <= tol and (absf.size == 1 or absf[0] <= absf[1]):
        return 0
    mins = np.nonzero((absf[1:-1] <= absf[:-2]) & (absf[1:-1] <= absf[2:]) & (absf[1:-1] <= tol))[0]
    return int(mins[0] + 1) if mins.size else 0


def _window_lower(absf, h, window_len):
    """Per-start lower estimate of ``sup_J |f|``.

    ``lower[j]`` is the max of ``|f|`` over the ``floor(window_len/h)``
    samples starting at ``j``, all of which lie inside ``[c_j, c_j + window_len]``.
    """
    w = max(1, int(math.floor(window_len / h + 1e-9)))
    # maximum_filter1d centres the window; shift so it starts at j
    full = maximum_filter1d(absf, size=w, origin=-(w // 2), mode="nearest")
    return full[: absf.size - w + 1]


def _interval_upper(c, values, I):
    """Upper estimate of ``sup_I |f|``: sampled max plus ``max|second difference|/8``.

    The second difference (taken on ``f``, not ``|f|``) bounds
    ``h**2 max|f''|``, and ``h**2 max|f''|/8`` bounds the excess of ``f``
    over its linear interpolant between samples.
    """
    i0 = max(0, int(np.searchsorted(c, I[0], side="right")) - 2)
    i1 = min(c.size, int(np.searchsorted(c, I[1], side="left")) + 2)
    seg = values[i0:i1]
    inside = (c[i0:i1] >= I[0] - 1e-12 * max(1.0, abs(I[0]))) & (c[i0:i1] <= I[1] + 1e-12 * max(1.0, abs(I[1])))
    slack = float(np.max(np.abs(np.diff(seg, 2)))) / 8.0 if seg.size > 2 else 0.0
    return float(np.max(np.abs(seg[inside]))) + slack


def evaluate_witness(f: SampledFunction, I, r: float):
    """``(epsilon, windows)`` of the witness condition for given ``I`` and ``r``.

    ``epsilon = min_J sup_J |f| - sup_I |f|`` over windows ``J`` of length
    ``|I|`` with ``inf J > r`` starting on grid points; sups are estimated
    conservatively (lower for ``J``, upper for ``I``).
    """
    c = f.c_grid
    h = f.spacing
    lower = _window_lower(np.abs(f.values), h, I[1] - I[0])
    sup_I = _interval_upper(c, f.values, I)
    starts = np.nonzero(c[: lower.size] > r)[0]
    if starts.size == 0:
        return -math.inf, 0
    return float(np.min(lower[starts])) - sup_I, int(starts.size)


def non_ap_witness(f: SampledFunction, window_len: float, eps_min: float | None = None) -> APVerdict:
    """Search an interval ``I`` and threshold ``r`` with ``sup_J|f| - sup_I|f| >= eps``.

    ``I`` starts at the first sampled zero of ``|f|``.  Because the minimum
    over later windows can only grow with ``r``, ``r`` is placed as late as
    possible while still testing at least ``max(200, half)`` of the
    available windows, which maximizes ``eps``.  NOT_AP_WITNESS is returned
    when ``eps > eps_min`` (default ``1e-3 * sup|f|``).

    Raises
    ------
    RangeTooShort
        The sampled range is shorter than ``20 * window_len``.
    """
    c = f.c_grid
    h = f.spacing
    lo, hi = f.range
    if hi - lo < 20 * window_len:
        raise RangeTooShort(f"range {hi - lo:g} is shorter than 20 windows of {window_len:g}")
    absf = np.abs(f.values)
    sup = float(np.max(absf))
    eps_min = EPS_MIN_FRACTION * sup if eps_min is None else eps_min
    jump = float(np.max(np.abs(np.diff(absf))))
    i0 = _first_zero_index(absf, jump)
    I = (float(c[i0]), float(c[i0]) + window_len)
    lower = _window_lower(absf, h, window_len)
    sup_I = _interval_upper(c, f.values, I)
    first = int(np.searchsorted(c, I[1], side="right"))
    avail = lower.size - first
    if avail < MIN_WINDOWS:
        raise RangeTooShort("fewer than 200 windows lie beyond the anchor interval")
    n_test = max(MIN_WINDOWS, (avail + 1) // 2)
    j_r = lower.size - n_test
    r = float(c[j_r - 1])
    eps = float(np.min(lower[j_r:])) - sup_I
    witness = {"I": list(I), "r": r, "epsilon": eps, "windows_tested": n_test,
               "sup_I": sup_I, "window_len": window_len}
    details = {"eps_min": eps_min, "sup_f": sup, "tested_range": [r, hi]}
    if eps > eps_min:
        return APVerdict(NOT_AP_WITNESS, witness, f.range, h, f.source, details)
    details["best"] = witness
    return APVerdict(INCONCLUSIVE, None, f.range, h, f.source, details)


def check_witness(fn, verdict: APVerdict, refine: int = 10):
    """Re-evaluate a NOT_AP_WITNESS on a grid ``refine`` times finer.

    ``fn`` evaluates ``f`` on an array of ``c``.  Returns ``(holds, epsilon)``
    where ``holds`` means the refined ``epsilon`` still reaches the
    witness's own ``epsilon_min``.
    """
    if verdict.verdict != NOT_AP_WITNESS:
        raise ValueError("only NOT_AP_WITNESS verdicts carry a witness")
    lo, hi = verdict.range
    fine = SampledFunction.from_function(fn, lo, hi, verdict.grid_spacing / refine, verdict.source)
    w = verdict.witness
    eps, n = evaluate_witness(fine, tuple(w["I"]), w["r"])
    return eps > verdict.details["eps_min"] and n >= MIN_WINDOWS, eps


# ---------------------------------------------------------------------------
# convergence and boundedness diagnostics


@dataclass
class LimitCheck:
    converges: bool
    limit: complex
    max_dev_from_limit: float
    tail_spread: float


def limit_constancy_check(f: SampledFunction, tail_fraction: float = 0.25, tol: float = 1e-2) -> LimitCheck:
    """Tail-mean limit estimate and deviation of the whole sample from it.

    Converged means the tail stays within ``tol * sup|f|`` of its mean.  A
    converged function with large ``max_dev_from_limit`` cannot be both
    almost periodic and convergent on this range.
    """
    if not 0 < tail_fraction <= 0.5:
        raise ValueError("tail_fraction must lie in (0, 1/2]")
    v = f.values
    k = max(1, int(round(tail_fraction * v.size)))
    tail = v[-k:]
    lim = complex(np.mean(tail))
    spread = float(np.max(np.abs(tail - lim)))
    sup = float(np.max(np.abs(v)))
    conv = spread <= tol * sup if sup > 0 else True
    return LimitCheck(bool(conv), lim, float(np.max(np.abs(v - lim))), spread)


@dataclass
class CTimesFCheck:
    flag_zero: bool
    sup_f_tail: float
    f_bounded: bool
    cf_bounded: bool


def _bounded(v, growth=1.5):
    n = v.size
    q2 = np.abs(v[n // 4: n // 2])
    q4 = np.abs(v[3 * n // 4:])
    return float(np.max(q4)) <= growth * float(np.max(q2)) + 1e-300


def c_times_f_check(f: SampledFunction) -> CTimesFCheck:
    """Screen ``f`` and ``c f`` for growth; both bounded means ``f`` should vanish.

    Bounded means the sup over the last quarter of the range is at most 1.5
    times the sup over the second quarter.  ``sup_f_tail`` is ``sup|f|``
    over the last tenth, the size of the contradiction.
    """
    v = f.values
    fb = _bounded(v)
    gb = _bounded(f.c_grid * v)
    tail = np.abs(v[-max(1, v.size // 10):])
    return CTimesFCheck(bool(fb and gb), float(np.max(tail)), bool(fb), bool(gb))


# ---------------------------------------------------------------------------
# diagonal restriction


def diag_restrict(f3, c_grid, source: str = "") -> SampledFunction:
    """Restriction ``x -> f3(x, x, x)`` of a function of three scales."""
    c_grid = np.asarray(c_grid, dtype=float)
    vals = np.array([f3(x, x, x) for x in c_grid])
    return SampledFunction(c_grid, vals, source or "diagonal")


@dataclass
class TrigPolynomial:
    """``sum_k coef[k] exp(i <k, x>)`` with real frequency tuples ``k``."""

    coef: dict

    @property
    def dim(self) -> int:
        return len(next(iter(self.coef))) if self.coef else 0

    def __call__(self, *x):
        x = [np.asarray(v, dtype=float) for v in x]
        out = 0j
        for k, a in self.coef.items():
            out = out + a * np.exp(1j * sum(ki * xi for ki, xi in zip(k, x)))
        return out

    def diag(self) -> "TrigPolynomial":
        """Restriction to the diagonal: frequencies add up, coefficients merge."""
        out: dict = {}
        for k, a in self.coef.items():
            s = (float(sum(k)),)
            out[s] = out.get(s, 0j) + a
        return TrigPolynomial({k: v for k, v in out.items() if v != 0})

    @classmethod
    def random(cls, rng, dim=3, nterms=5, kmax=3):
        coef = {}
        for _ in range(nterms):
            k = tuple(float(v) for v in rng.integers(-kmax, kmax + 1, dim))
            coef[k] = coef.get(k, 0j) + complex(rng.normal(), rng.normal())
        return cls(coef)


def frequency_grid(kmax: int, dim: int = 3):
    """All integer frequency tuples in ``[-kmax, kmax]**dim``."""
    return [tuple(float(v) for v in k) for k in product(range(-kmax, kmax + 1), repeat=dim)]
