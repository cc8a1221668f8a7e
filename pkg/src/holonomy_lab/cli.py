"""Command-line driver.

Subcommands: ``transport``, ``sweep``, ``classify``, ``apcheck`` and
``demo-embedding``.  Exit codes: 0 success, 2 unreadable curve spec or bad
arguments, 3 integrator or analysis failure, 4 ``m`` vanishes (use
``--conjugate``).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from . import apcheck as ap
from . import closedform as cf
from .curve import classify, conjugate_frame, curve_from_spec
from .energy import LINE_FLOOR, energy_envelope, energy_from_endpoint, fit_decay
from .errors import CurveSpecError, HolonomyLabError, MVanishes, RangeTooShort, GridTooCoarse
from .report import (options_hash, read_csv, run_metadata, sample_columns, svg_plot,
                     write_csv, write_json, write_svg)
from .transport import IntegratorOptions, holonomy, holonomy_aniso

OUTPUT_KINDS = ("transport", "energy", "apcheck", "closedform_compare")
AP_EPSILON = 1e-6
DEGENERATE = "DEGENERATE"


class SweepPointError(HolonomyLabError, RuntimeError):
    def __init__(self, c, exc):
        super().__init__(f"computation failed at c={c!r}: {exc}")
        self.c = c


# ---------------------------------------------------------------------------
# worker pool


_STATE: dict = {}


def _init_worker(spec, conjugate, osc):
    curve = curve_from_spec(spec)
    if conjugate:
        curve = conjugate_frame(curve)
    _STATE["curve"] = curve
    _STATE["opts"] = IntegratorOptions(oscillation_factor=osc)


def _transport_block(cs, t):
    curve, opts = _STATE["curve"], _STATE["opts"]
    a = np.empty(len(cs), complex)
    b = np.empty(len(cs), complex)
    drift = np.empty(len(cs))
    for i, c in enumerate(cs):
        try:
            r = holonomy(curve, c, t, opts)
        except Exception as exc:  # abort naming the point, no silent gaps
            raise SweepPointError(float(c), exc) from exc
        a[i], b[i], drift[i] = r.g.a, r.g.b, r.unitarity_drift
    return a, b, drift


def _envelope_block(cs, t):
    curve, opts = _STATE["curve"], _STATE["opts"]
    out = []
    for c in cs:
        try:
            out.append(energy_envelope(curve, c, t, opts))
        except Exception as exc:
            raise SweepPointError(float(c), exc) from exc
    return np.array(out)


def worker_count() -> int:
    n = os.cpu_count() or 1
    cap = os.environ.get("HOLONOMY_LAB_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def _fan_out(fn, spec, conjugate, osc, cs, t, workers):
    """Run ``fn`` on contiguous blocks of ``cs``; results come back in grid order."""
    cs = np.asarray(cs, dtype=float)
    if workers <= 1 or cs.size < 2 * workers:
        _init_worker(spec, conjugate, osc)
        return [fn(cs, t)]
    blocks = np.array_split(cs, 4 * workers)
    with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(spec, conjugate, osc)) as ex:
        return list(ex.map(fn, blocks, [t] * len(blocks)))


# ---------------------------------------------------------------------------
# pipelines


def make_grid(c_min, c_max, count, spacing):
    if count < 2 or not c_min < c_max:
        raise ValueError("need count >= 2 and c_min < c_max")
    if spacing == "linear":
        return np.linspace(c_min, c_max, count)
    if spacing == "log":
        if c_min <= 0:
            raise ValueError("log spacing needs c_min > 0")
        return np.geomspace(c_min, c_max, count)
    raise ValueError(f"unknown spacing {spacing!r}")


def transport_samples(spec, t, c_grid, conjugate=False, osc=40.0, workers=1):
    """``(a, b, E_a, drift)`` over ``c_grid``; identical for any worker count."""
    parts = _fan_out(_transport_block, spec, conjugate, osc, c_grid, t, workers)
    a = np.concatenate([p[0] for p in parts])
    b = np.concatenate([p[1] for p in parts])
    drift = np.concatenate([p[2] for p in parts])
    _init_worker(spec, conjugate, osc)
    ea = energy_from_endpoint(_STATE["curve"], t, a, b)
    return a, b, np.asarray(ea, dtype=complex), drift


def analyze_samples(c, a, b, t, source="") -> dict:
    """AP analysis of sampled transports.

    ``a`` is searched for almost periods; ``|b|`` is searched for a non-AP
    witness with window ``3 pi/t``.  Combined verdict: NOT_AP_WITNESS if a
    witness exists, AP_EVIDENCE if both ``a`` and ``b`` show it, else
    INCONCLUSIVE.
    """
    fa = ap.SampledFunction(c, a, source + ":a")
    fb = ap.SampledFunction(c, b, source + ":b")
    span = fa.range[1] - fa.range[0]
    L = 4 * math.pi / abs(t)
    out = {}
    for key, f in (("a_periods", fa), ("b_periods", fb)):
        try:
            if L > span / 2:
                raise RangeTooShort("range shorter than two search windows")
            out[key] = ap.find_almost_periods(f, AP_EPSILON, L).to_dict()
        except (GridTooCoarse, RangeTooShort, ValueError) as exc:
            out[key] = {"verdict": ap.INCONCLUSIVE, "reason": str(exc)}
    try:
        out["b_witness"] = ap.non_ap_witness(fb, 3 * math.pi / abs(t)).to_dict()
    except RangeTooShort as exc:
        out["b_witness"] = {"verdict": ap.INCONCLUSIVE, "reason": str(exc)}
    if out["b_witness"]["verdict"] == ap.NOT_AP_WITNESS:
        verdict = ap.NOT_AP_WITNESS
    elif out["a_periods"]["verdict"] == out["b_periods"]["verdict"] == ap.AP_EVIDENCE:
        verdict = ap.AP_EVIDENCE
    else:
        verdict = ap.INCONCLUSIVE
    return {"verdict": verdict, "range": list(fa.range), "grid_spacing": fa.spacing,
            "source": source, "checks": out}


def closedform_values(curve, c, t):
    """Closed-form ``(a, b)`` and the classification label, or ``None`` for general curves."""
    cls = classify(curve)
    if cls.kind == "General":
        return None, str(cls)
    p = cls.params
    a, b = cf.spiral_arrays(p, c, t)
    return (a, b), str(cls)


def run_sweep(spec, t, c_grid, outputs, out_dir, conjugate=False, osc=40.0, workers=1,
              options=None) -> dict:
    """Compute the requested outputs and write them to ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    options = options or {}
    meta = run_metadata(options)
    c_grid = np.asarray(c_grid, dtype=float)
    source = f"{spec.get('family', 'curve')} t={t!r}"
    a, b, ea, drift = transport_samples(spec, t, c_grid, conjugate, osc, workers)
    files = {"samples": str(write_csv(out_dir / "samples.csv", sample_columns(c_grid, a, b, ea, drift), meta))}
    result = {"files": files}
    if "energy" in outputs:
        summary = {"max_abs_Ea": float(np.max(np.abs(ea))),
                   "below_line_floor": bool(np.max(np.abs(ea)) < LINE_FLOOR),
                   "fitted_exponent": None, "fit_residual": None}
        if c_grid.size >= 8 and c_grid[0] > 0 and not summary["below_line_floor"]:
            upper = c_grid[c_grid.size // 2:]
            env = np.concatenate(_fan_out(_envelope_block, spec, conjugate, osc, upper, t, workers))
            summary["fitted_exponent"], summary["fit_residual"] = fit_decay(upper, env)
        files["energy"] = str(write_json(out_dir / "energy.json", summary, meta))
        result["energy"] = summary
    if "apcheck" in outputs:
        if options.get("spacing", "linear") != "linear" and not _uniform(c_grid):
            raise ValueError("apcheck needs a linear c grid")
        verdict = analyze_samples(c_grid, a, b, t, source)
        files["apcheck"] = str(write_json(out_dir / "apcheck.json", verdict, meta))
        result["apcheck"] = verdict
    if "closedform_compare" in outputs:
        curve = _STATE["curve"]
        vals, label = closedform_values(curve, c_grid, t)
        if vals is None:
            payload = {"classification": label, "compared": False}
        else:
            ca, cb = vals
            dist = np.sqrt(2 * (np.abs(ca - a) ** 2 + np.abs(cb - b) ** 2))
            files["closedform_csv"] = str(write_csv(out_dir / "closedform.csv", {
                "c": c_grid, "re_a_cf": ca.real, "im_a_cf": ca.imag,
                "re_b_cf": cb.real, "im_b_cf": cb.imag, "distance": dist}, meta))
            payload = {"classification": label, "compared": True, "max_distance": float(dist.max())}
        files["closedform"] = str(write_json(out_dir / "closedform.json", payload, meta))
        result["closedform"] = payload
    return result


def _uniform(c):
    d = np.diff(c)
    return bool(np.max(np.abs(d - d.mean())) <= 1e-12 * max(1.0, float(np.max(np.abs(c)))))


def demo_specs(t):
    T = max(float(t), 1.0)
    line = {"version": "curve_spec_v1", "family": "line", "params": {"direction": [1.0, 0.0, 0.0]},
            "domain": [0.0, T]}
    circle = {"version": "curve_spec_v1", "family": "circle", "params": {"radius": 1.0},
              "domain": [0.0, max(T, 2 * math.pi)]}
    return line, circle


def run_demo_embedding(t, out_dir, osc=40.0, workers=1) -> dict:
    """Line versus circle at arc length ``t``: AP evidence against a non-AP witness."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t = float(t)
    if t < 0:
        raise ValueError("t must be non-negative")
    line, circle = demo_specs(t)
    options = {"command": "demo-embedding", "t": t, "oscillation_factor": osc, "version": __version__}
    meta = run_metadata(options)
    if t == 0:
        c = np.linspace(0.0, 10.0, 11)
        zero = np.zeros_like(c)
        payload = {"t": t, "line": {"verdict": DEGENERATE}, "circle": {"verdict": DEGENERATE},
                   "note": "t = 0: every transport is the identity and |b| vanishes"}
        write_json(out_dir / "demo_embedding.json", payload, meta)
        write_svg(out_dir / "demo_embedding.svg",
                  svg_plot([("line |b|", c, zero), ("circle |b|", c, zero)],
                           "|b(c)| at t = 0", "c", "|b|", meta))
        return payload
    h = ap.default_spacing(t)
    c_max = 200.0 / t
    c = np.linspace(0.0, c_max, int(round(c_max / h)) + 1)
    payload = {"t": t, "c_range": [0.0, c_max], "grid_spacing": float(c[1] - c[0])}
    series = []
    for name, spec in (("line", line), ("circle", circle)):
        a, b, ea, drift = transport_samples(spec, t, c, False, osc, workers)
        write_csv(out_dir / f"{name}_samples.csv", sample_columns(c, a, b, ea, drift), meta)
        payload[name] = analyze_samples(c, a, b, t, f"{name} t={t!r}")
        series.append((f"{name} |b|", c, np.abs(b)))
    write_json(out_dir / "demo_embedding.json", payload, meta)
    write_svg(out_dir / "demo_embedding.svg",
              svg_plot(series, f"|b(c)| at t = {t:g}", "c", "|b|", meta))
    return payload


# ---------------------------------------------------------------------------
# argument handling


def _load_spec(path):
    try:
        spec = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CurveSpecError(f"cannot read curve spec {path}: {exc}") from exc
    if not isinstance(spec, dict):
        raise CurveSpecError("curve spec must be a JSON object")
    curve_from_spec(spec)  # validate early so parse failures exit with 2
    return spec


def _curve(spec, conjugate):
    curve = curve_from_spec(spec)
    return conjugate_frame(curve) if conjugate else curve


def cmd_transport(args) -> int:
    spec = _load_spec(args.curve)
    curve = _curve(spec, args.conjugate)
    t = curve.domain[1] if args.t is None else args.t
    opts = IntegratorOptions(oscillation_factor=args.oscillation_factor)
    if args.cvec is not None:
        r = holonomy_aniso(curve, args.cvec, t, opts)
        label = " ".join(f"{x:.15g}" for x in args.cvec)
    else:
        r = holonomy(curve, args.c, t, opts)
        label = f"{args.c:.15g}"
    g = r.g
    print(f"c = {label}")
    print(f"t = {t:.15g}")
    print(f"a = {g.a.real:.15g} {g.a.imag:+.15g}i")
    print(f"b = {g.b.real:.15g} {g.b.imag:+.15g}i")
    print(f"unitarity_drift = {r.unitarity_drift:.3e}")
    print(f"steps = {r.steps}")
    return 0


def cmd_sweep(args) -> int:
    spec = _load_spec(args.curve)
    outputs = [o.strip() for o in args.outputs.split(",") if o.strip()]
    bad = [o for o in outputs if o not in OUTPUT_KINDS]
    if bad:
        raise ValueError(f"unknown outputs {bad}; choose from {', '.join(OUTPUT_KINDS)}")
    curve = curve_from_spec(spec)
    t = curve.domain[1] if args.t is None else args.t
    grid = make_grid(args.c_min, args.c_max, args.count, args.spacing)
    options = {"command": "sweep", "curve": spec, "t": t, "c_min": args.c_min, "c_max": args.c_max,
               "count": args.count, "spacing": args.spacing, "outputs": sorted(outputs),
               "conjugate": bool(args.conjugate), "oscillation_factor": args.oscillation_factor,
               "version": __version__}
    res = run_sweep(spec, t, grid, outputs, args.out, args.conjugate, args.oscillation_factor,
                    worker_count(), options)
    print(f"options_hash = {options_hash(options)}")
    for k, v in res["files"].items():
        print(f"{k}: {v}")
    if "apcheck" in res:
        print(f"verdict = {res['apcheck']['verdict']}")
    return 0


def cmd_classify(args) -> int:
    spec = _load_spec(args.curve)
    print(classify(_curve(spec, args.conjugate)))
    return 0


def cmd_apcheck(args) -> int:
    meta, cols = read_csv(args.csv)
    c = cols["c"]
    a = cols["re_a"] + 1j * cols["im_a"]
    b = cols["re_b"] + 1j * cols["im_b"]
    print(json.dumps(analyze_samples(c, a, b, args.t, args.source), sort_keys=True, indent=2))
    return 0


def cmd_demo_embedding(args) -> int:
    payload = run_demo_embedding(args.t, args.out, args.oscillation_factor, worker_count())
    print(f"line: {payload['line']['verdict']}")
    print(f"circle: {payload['circle']['verdict']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="holonomy-lab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, curve=True):
        if curve:
            sp.add_argument("--curve", required=True, help="curve spec JSON file")
            sp.add_argument("--conjugate", action="store_true",
                            help="conjugate the frame first (needed when m vanishes)")
        sp.add_argument("--oscillation-factor", type=float, default=40.0)

    sp = sub.add_parser("transport", help="transport along a curve at one c or cvec")
    common(sp)
    sp.add_argument("--t", type=float, default=None)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--c", type=float)
    g.add_argument("--cvec", type=float, nargs=3, metavar=("C1", "C2", "C3"))
    sp.set_defaults(func=cmd_transport)

    sp = sub.add_parser("sweep", help="sweep c over a grid and write CSV/JSON")
    common(sp)
    sp.add_argument("--t", type=float, default=None)
    sp.add_argument("--c-min", type=float, required=True)
    sp.add_argument("--c-max", type=float, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--spacing", choices=("linear", "log"), default="linear")
    sp.add_argument("--outputs", default="transport", help=f"comma list of {', '.join(OUTPUT_KINDS)}")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("classify", help="constant-coefficient family of a curve")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("apcheck", help="AP analysis of a samples CSV")
    sp.add_argument("--csv", required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--source", default="")
    sp.set_defaults(func=cmd_apcheck)

    sp = sub.add_parser("demo-embedding", help="line versus circle AP contrast")
    common(sp, curve=False)
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_demo_embedding)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CurveSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MVanishes as exc:
        print(f"error: {exc}\nhint: rerun with --conjugate", file=sys.stderr)
        return 4
    except (HolonomyLabError, FloatingPointError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
