"""CSV and SVG output for sweep results.

The CSV has one header line (``power_dbm``, the model names, then
``flags``) and values with 9 significant digits, so parsing and re-emitting
a file reproduces it byte for byte.  Run metadata goes to a JSON sidecar
``<path>.meta.json`` to keep the CSV itself to a single header line.
"""

from __future__ import annotations

import csv
import io
import json
import math
from xml.sax.saxutils import escape

from .sweep import BoundCurve

SIG_DIGITS = 9
FLAG_SEP = "; "
SVG_ELEMENTS = ("svg", "line", "polyline", "text", "path")
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22")


def format_value(v) -> str:
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return ""
    return format(float(v), f".{SIG_DIGITS}g")


def csv_text(curve: BoundCurve) -> str:
    if not curve.powers_dbm:
        raise ValueError("curve has no rows")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["power_dbm", *curve.models, "flags"])
    for p, vals, flags in curve.rows():
        w.writerow([format_value(p), *(format_value(v) for v in vals), FLAG_SEP.join(flags)])
    return buf.getvalue()


def emit_csv(curve: BoundCurve, path: str, sidecar: bool = True) -> None:
    """Write the curve as RFC 4180 CSV and, optionally, its metadata sidecar."""
    text = csv_text(curve)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    if sidecar:
        with open(path + ".meta.json", "w", encoding="utf-8") as fh:
            json.dump(curve.header, fh, sort_keys=True, indent=2)
            fh.write("\n")


def parse_csv(path: str) -> BoundCurve:
    """Read a CSV written by :func:`emit_csv` (and its sidecar if present)."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][0] != "power_dbm" or rows[0][-1] != "flags":
        raise ValueError(f"{path}: not a sweep CSV")
    models = tuple(rows[0][1:-1])
    powers, flags = [], []
    values = {m: [] for m in models}
    for r in rows[1:]:
        powers.append(float(r[0]))
        for m, cell in zip(models, r[1:-1]):
            values[m].append(float(cell) if cell else None)
        flags.append(r[-1].split(FLAG_SEP) if r[-1] else [])
    header = {}
    try:
        with open(path + ".meta.json", encoding="utf-8") as fh:
            header = json.load(fh)
    except FileNotFoundError:
        pass
    return BoundCurve(powers, models, values, flags, header)


def _flagged(curve: BoundCurve, model: str, i: int) -> bool:
    return any(f.startswith(model + ": ") for f in curve.flags[i])


def svg_text(curve: BoundCurve, width: int = 720, height: int = 480, title: str = "Capacity bounds") -> str:
    """Line chart of bits per channel use against power in dBm.

    Cells that are missing or flagged break their polyline.
    """
    if not curve.powers_dbm:
        raise ValueError("curve has no rows")
    left, right, top, bottom = 64, 180, 40, 52
    pw, ph = width - left - right, height - top - bottom
    xs = curve.powers_dbm
    ys = [v for m in curve.models for v in curve.values[m] if v is not None and math.isfinite(v)]
    x0, x1 = min(xs), max(xs)
    if x1 == x0:
        x0, x1 = x0 - 1.0, x1 + 1.0
    y0, y1 = (min(ys), max(ys)) if ys else (0.0, 1.0)
    y0 = min(0.0, y0)
    if y1 <= y0:
        y1 = y0 + 1.0

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<text x="{left + pw / 2:.1f}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{sx(t):.2f}" y1="{top + ph}" x2="{sx(t):.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{top + ph + 18}" text-anchor="middle" font-size="11">{t:g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{left - 5}" y1="{sy(t):.2f}" x2="{left}" y2="{sy(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{sy(t) + 4:.2f}" text-anchor="end" font-size="11">{t:g}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 12}" text-anchor="middle" font-size="13">power (dBm)</text>')
    out.append(
        f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 16 {top + ph / 2:.1f})">bits per channel use</text>'
    )
    for j, m in enumerate(curve.models):
        color = PALETTE[j % len(PALETTE)]
        for seg in _segments(curve, m):
            pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in seg)
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = top + 16 * j + 8
        out.append(f'<line x1="{left + pw + 12}" y1="{ly}" x2="{left + pw + 36}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 42}" y="{ly + 4}" font-size="12">{escape(m)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _segments(curve: BoundCurve, model: str):
    seg = []
    for i, x in enumerate(curve.powers_dbm):
        v = curve.values[model][i]
        if v is None or not math.isfinite(v) or _flagged(curve, model, i):
            if len(seg) > 1:
                yield seg
            seg = []
            continue
        seg.append((x, v))
    if len(seg) > 1:
        yield seg


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    n = int(math.floor((hi - first) / step + 1e-9)) + 1
    return [round(first + i * step, 12) for i in range(n)]


def emit_svg(curve: BoundCurve, path: str, title: str = "Capacity bounds") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg_text(curve, title=title))


__all__ = ["emit_csv", "emit_svg", "parse_csv", "csv_text", "svg_text"]
