"""Deterministic CSV, JSON and SVG emission with embedded run metadata."""
from __future__ import annotations

import hashlib
import io
import json
import math
from pathlib import Path

import numpy as np

from . import __version__

TOOL = "holonomy_lab"
SAMPLE_COLUMNS = ("c", "re_a", "im_a", "re_b", "im_b", "re_Ea", "im_Ea", "drift")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=True)


def options_hash(options: dict) -> str:
    """sha256 of the canonical JSON of the run options."""
    return hashlib.sha256(canonical_json(options).encode("utf-8")).hexdigest()


def run_metadata(options: dict) -> dict:
    return {"tool": TOOL, "version": __version__, "options_hash": options_hash(options)}


def fmt(x: float) -> str:
    """Round-trip decimal for a binary64 value."""
    return format(float(x), ".17g")


def write_csv(path, columns: dict, meta: dict) -> Path:
    """Write equal-length columns with ``# key=value`` metadata lines on top."""
    names = list(columns)
    arrays = [np.asarray(columns[k], dtype=float) for k in names]
    n = {a.size for a in arrays}
    if len(n) != 1:
        raise ValueError("columns must have equal length")
    buf = io.StringIO()
    for k in sorted(meta):
        buf.write(f"# {k}={meta[k]}\n")
    buf.write(",".join(names) + "\n")
    for row in zip(*arrays):
        buf.write(",".join(fmt(x) for x in row) + "\n")
    path = Path(path)
    path.write_bytes(buf.getvalue().encode("utf-8"))
    return path


def read_csv(path):
    """Inverse of :func:`write_csv`: ``(meta, {name: array})``."""
    meta, rows, header = {}, [], None
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            k, _, v = line[1:].strip().partition("=")
            meta[k] = v
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([float(x) for x in line.split(",")])
    if header is None:
        raise ValueError(f"{path}: no header row")
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return meta, {name: data[:, i] for i, name in enumerate(header)}


def sample_columns(c, a, b, ea, drift) -> dict:
    a, b, ea = (np.asarray(x, dtype=complex) for x in (a, b, ea))
    return dict(zip(SAMPLE_COLUMNS, (np.asarray(c, float), a.real, a.imag, b.real, b.imag,
                                     ea.real, ea.imag, np.asarray(drift, float))))


def write_json(path, payload: dict, meta: dict) -> Path:
    doc = dict(payload)
    doc["metadata"] = meta
    text = json.dumps(doc, sort_keys=True, indent=2, allow_nan=True) + "\n"
    path = Path(path)
    path.write_bytes(text.encode("utf-8"))
    return path


# ---------------------------------------------------------------------------
# SVG


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def svg_plot(series, title: str, xlabel: str, ylabel: str, meta: dict,
             width: int = 720, height: int = 360) -> str:
    """Static polyline plot; ``series`` is a list of ``(label, x, y)``."""
    ml, mr, mt, mb = 60, 20, 30, 45
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = min(0.0, float(ys.min())), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pw, ph = width - ml - mr, height - mt - mb

    def px(x):
        return ml + (x - x0) / (x1 - x0) * pw

    def py(y):
        return mt + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "<metadata>" + " ".join(f"{k}={meta[k]}" for k in sorted(meta)) + "</metadata>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="14">{_esc(title)}</text>',
        f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="black"/>',
    ]
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        yv = y0 + (y1 - y0) * i / 4
        out.append(f'<text x="{px(xv):.1f}" y="{mt + ph + 15}" text-anchor="middle" '
                   f'font-size="10">{xv:.4g}</text>')
        out.append(f'<text x="{ml - 5}" y="{py(yv) + 3:.1f}" text-anchor="end" '
                   f'font-size="10">{yv:.4g}</text>')
    out.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 8}" text-anchor="middle" '
               f'font-size="12">{_esc(xlabel)}</text>')
    out.append(f'<text x="14" y="{mt + ph / 2:.1f}" text-anchor="middle" font-size="12" '
               f'transform="rotate(-90 14 {mt + ph / 2:.1f})">{_esc(ylabel)}</text>')
    for i, (label, x, y) in enumerate(series):
        x, y = _thin(np.asarray(x, float), np.asarray(y, float))
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y) if math.isfinite(b))
        color = _COLORS[i % len(_COLORS)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{pts}"/>')
        out.append(f'<text x="{ml + pw - 5}" y="{mt + 14 * (i + 1)}" text-anchor="end" '
                   f'font-size="11" fill="{color}">{_esc(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _thin(x, y, max_points=4000):
    """Keep min and max per bucket so oscillations stay visible."""
    if x.size <= max_points:
        return x, y
    k = int(math.ceil(x.size / (max_points // 2)))
    n = x.size // k * k
    xb, yb = x[:n].reshape(-1, k), y[:n].reshape(-1, k)
    lo, hi = np.argmin(yb, axis=1), np.argmax(yb, axis=1)
    first, second = np.minimum(lo, hi), np.maximum(lo, hi)
    rows = np.arange(xb.shape[0])
    xs = np.stack([xb[rows, first], xb[rows, second]], axis=1).ravel()
    ys = np.stack([yb[rows, first], yb[rows, second]], axis=1).ravel()
    return np.append(xs, x[n:]), np.append(ys, y[n:])


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def write_svg(path, text: str) -> Path:
    path = Path(path)
    path.write_bytes(text.encode("utf-8"))
    return path
