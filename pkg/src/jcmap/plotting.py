"""Deterministic SVG figures: the journal map and the pairwise trend chart.

Output is plain text assembled here (no plotting backend), so identical
inputs give byte-identical files.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

SIZE = 800
MARGIN = 0.05 * SIZE

# glyph per factor index (1-based, cycled)
GLYPHS = ("circle", "square", "triangle", "diamond", "cross", "triangle-down")
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


def _num(x: float) -> str:
    s = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _glyph(kind: str, x: float, y: float, r: float = 6.0) -> str:
    if kind == "circle":
        return f'<circle cx="{_num(x)}" cy="{_num(y)}" r="{_num(r)}"/>'
    if kind == "square":
        return f'<rect x="{_num(x - r)}" y="{_num(y - r)}" width="{_num(2 * r)}" height="{_num(2 * r)}"/>'
    if kind == "triangle":
        pts = [(x, y - r), (x + r, y + r), (x - r, y + r)]
    elif kind == "triangle-down":
        pts = [(x, y + r), (x + r, y - r), (x - r, y - r)]
    elif kind == "diamond":
        pts = [(x, y - r), (x + r, y), (x, y + r), (x - r, y)]
    else:  # cross
        a, b = r, r / 3
        pts = [(x - b, y - a), (x + b, y - a), (x + b, y - b), (x + a, y - b), (x + a, y + b), (x + b, y + b),
               (x + b, y + a), (x - b, y + a), (x - b, y + b), (x - a, y + b), (x - a, y - b), (x - b, y - b)]
    return '<polygon points="{}"/>'.format(" ".join(f"{_num(px)},{_num(py)}" for px, py in pts))


def map_to_viewbox(coords) -> np.ndarray:
    """Uniformly scale 2-D coordinates into the square viewBox, y pointing up."""
    xy = np.asarray(coords, dtype=float)
    if xy.shape[1] == 1:
        xy = np.column_stack([xy[:, 0], np.zeros(len(xy))])
    lo = xy.min(axis=0)
    hi = xy.max(axis=0)
    span = float(np.max(hi - lo))
    inner = SIZE - 2 * MARGIN
    scale = inner / span if span > 0 else 0.0
    mid = (lo + hi) / 2.0
    px = SIZE / 2 + (xy[:, 0] - mid[0]) * scale
    py = SIZE / 2 - (xy[:, 1] - mid[1]) * scale
    return np.column_stack([px, py])


def emit_map_svg(layout, designations, title: str | None = None) -> str:
    """Render a MapLayout as an SVG scatter plot.

    One ``<g class="point">`` per journal holding its glyph and label; the
    glyph shape and colour follow the journal's factor designation.
    """
    labels = list(layout.labels)
    designations = [int(d) for d in designations]
    if len(designations) != len(labels):
        raise ValueError("need one designation per journal")
    pts = map_to_viewbox(layout.coords)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    if title:
        out.append(f'<text class="title" x="{SIZE // 2}" y="22" text-anchor="middle" font-family="sans-serif" font-size="16">{escape(title)}</text>')
    for label, f, (x, y) in zip(labels, designations, pts):
        glyph = GLYPHS[(f - 1) % len(GLYPHS)]
        color = COLORS[(f - 1) % len(COLORS)]
        out.append(f'<g class="point" data-journal="{escape(label, {chr(34): "&quot;"})}" data-factor="{f}" fill="{color}">')
        out.append(_glyph(glyph, x, y))
        out.append(f'<text x="{_num(x + 9)}" y="{_num(y + 4)}" font-family="sans-serif" font-size="11" fill="black">{escape(label)}</text>')
        out.append("</g>")
    legend_y = SIZE - 12
    factors = sorted(set(designations))
    for n, f in enumerate(factors):
        lx = 12 + 90 * n
        out.append(f'<g class="legend" fill="{COLORS[(f - 1) % len(COLORS)]}">')
        out.append(_glyph(GLYPHS[(f - 1) % len(GLYPHS)], lx, legend_y - 4, 5))
        out.append(f'<text x="{lx + 9}" y="{legend_y}" font-family="sans-serif" font-size="11" fill="black">factor {f}</text>')
        out.append("</g>")
    out.append(
        f'<text class="caption" x="{SIZE - 12}" y="{SIZE - 12}" text-anchor="end" font-family="sans-serif" '
        f'font-size="12">Kruskal stress-1 = {layout.stress:.4f}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_trend_svg(ab, ba, width: int = 800, height: int = 500) -> str:
    """Line chart of two TrendSeries: raw counts as dots, moving averages as lines."""
    a, b = ab.pair
    series = [(ab, "#1f77b4", f"{a} cites {b}"), (ba, "#d62728", f"{b} cites {a}")]
    years = sorted({y for s, _, _ in series for y, _ in s.points})
    values = [v for s, _, _ in series for _, v in s.points]
    left, right, top, bottom = 70, 20, 40, 60
    y0, y1 = years[0], years[-1]
    vmax = max(values) if values and max(values) > 0 else 1.0

    def sx(year):
        return left + (0.5 if y1 == y0 else (year - y0) / (y1 - y0)) * (width - left - right)

    def sy(v):
        return height - bottom - (v / vmax) * (height - top - bottom)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" width="{width}" height="{height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line class="axis" x1="{left}" y1="{height - bottom}" x2="{width - right}" y2="{height - bottom}" stroke="black"/>',
        f'<line class="axis" x1="{left}" y1="{top}" x2="{left}" y2="{height - bottom}" stroke="black"/>',
    ]
    for year in years:
        out.append(f'<text x="{_num(sx(year))}" y="{height - bottom + 18}" text-anchor="middle" font-family="sans-serif" font-size="11">{year}</text>')
    for frac in (0.0, 0.5, 1.0):
        v = vmax * frac
        out.append(f'<text x="{left - 6}" y="{_num(sy(v) + 4)}" text-anchor="end" font-family="sans-serif" font-size="11">{v:.4g}</text>')
    for n, (s, color, name) in enumerate(series):
        out.append(f'<g class="series" data-direction="{escape(name)}" stroke="{color}" fill="{color}">')
        for y, v in s.points:
            out.append(f'<circle cx="{_num(sx(y))}" cy="{_num(sy(v))}" r="3"/>')
        if s.smoothed:
            pts = " ".join(f"{_num(sx(y))},{_num(sy(v))}" for y, v in s.smoothed)
            out.append(f'<polyline points="{pts}" fill="none" stroke-width="2"/>')
        out.append("</g>")
        out.append(f'<text x="{left + 10}" y="{20 + 14 * n}" font-family="sans-serif" font-size="12" fill="{color}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
