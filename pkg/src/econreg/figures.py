"""Dependency-free SVG line and scatter charts.

Output is a standalone SVG 1.1 document. Coordinates are written with two
decimals and element order follows the input, so identical specs give
byte-identical documents.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .dataset import Dataset
from .errors import DegenerateRange

WIDTH, HEIGHT = 640, 420
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 24, 48, 56


class FigureKind(str, enum.Enum):
    LINE = "line"
    SCATTER = "scatter"


@dataclass(frozen=True)
class FigureSpec:
    kind: FigureKind
    x_name: str
    y_name: str
    points: tuple
    title: str

    def __post_init__(self):
        object.__setattr__(self, "kind", FigureKind(self.kind))
        pts = tuple((float(x), float(y)) for x, y in self.points)
        if not pts:
            raise DegenerateRange(f"{self.title or 'figure'}: no points to plot")
        if not all(math.isfinite(x) and math.isfinite(y) for x, y in pts):
            raise ValueError(f"{self.title}: points must be finite")
        object.__setattr__(self, "points", pts)


def scatter_spec(ds: Dataset, x: str, y: str, title: str = "") -> FigureSpec:
    pts = zip(ds.column(x).values, ds.column(y).values)
    return FigureSpec(FigureKind.SCATTER, x, y, tuple(pts), title or f"SCATTERPLOT OF {x} AND {y}")


def line_spec(ds: Dataset, name: str, title: str = "") -> FigureSpec:
    s = ds.column(name)
    years = f"{s.years[0]}-{s.years[-1]}"
    return FigureSpec(FigureKind.LINE, "YEAR", name, tuple(zip(s.years, s.values)), title or f"{name} {years}")


def _nice_step(span: float, target: int = 5) -> float:
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= m * mag:
            return m * mag
    return 10.0 * mag


def nice_ticks(lo: float, hi: float, target: int = 5):
    """Round axis limits outward and return ``(lo, hi, ticks)``.

    A zero-width range is padded by one unit (or 10% of the value).
    """
    if hi < lo:
        lo, hi = hi, lo
    if hi == lo:
        pad = abs(lo) * 0.1 or 1.0
        lo, hi = lo - pad, hi + pad
    step = _nice_step(hi - lo, target)
    start = math.floor(lo / step) * step
    stop = math.ceil(hi / step) * step
    count = int(round((stop - start) / step))
    ticks = [start + k * step for k in range(count + 1)]
    return start, stop, ticks


def _tick_label(v: float, step: float) -> str:
    decimals = next(d for d in range(12) if abs(round(step, d) - step) <= 1e-9 * step)
    text = f"{v:.{decimals}f}"
    return text.lstrip("-") if float(text) == 0 else text


def render_figure(spec: FigureSpec) -> str:
    """Render ``spec`` as SVG text with axes, tick labels, title and marks."""
    xs = [p[0] for p in spec.points]
    ys = [p[1] for p in spec.points]
    x0, x1, xt = nice_ticks(min(xs), max(xs))
    y0, y1, yt = nice_ticks(min(ys), max(ys))
    pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(v):
        return MARGIN_LEFT + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return MARGIN_TOP + ph - (v - y0) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text class="title" x="{WIDTH / 2:.2f}" y="24" text-anchor="middle" '
        f'font-size="14">{escape(spec.title)}</text>',
        '<g class="axes" stroke="black" stroke-width="1">',
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP + ph}" x2="{MARGIN_LEFT + pw}" y2="{MARGIN_TOP + ph}"/>',
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{MARGIN_TOP + ph}"/>',
        "</g>",
        '<g class="ticks">',
    ]
    xstep = xt[1] - xt[0] if len(xt) > 1 else 1.0
    ystep = yt[1] - yt[0] if len(yt) > 1 else 1.0
    for v in xt:
        px = sx(v)
        out.append(
            f'<line x1="{px:.2f}" y1="{MARGIN_TOP + ph}" x2="{px:.2f}" y2="{MARGIN_TOP + ph + 5}" stroke="black"/>'
            f'<text x="{px:.2f}" y="{MARGIN_TOP + ph + 18}" text-anchor="middle">{_tick_label(v, xstep)}</text>'
        )
    for v in yt:
        py = sy(v)
        out.append(
            f'<line x1="{MARGIN_LEFT - 5}" y1="{py:.2f}" x2="{MARGIN_LEFT}" y2="{py:.2f}" stroke="black"/>'
            f'<text x="{MARGIN_LEFT - 8}" y="{py + 4:.2f}" text-anchor="end">{_tick_label(v, ystep)}</text>'
        )
    out.append("</g>")
    out.append(
        f'<text class="xlabel" x="{MARGIN_LEFT + pw / 2:.2f}" y="{HEIGHT - 14}" '
        f'text-anchor="middle">{escape(spec.x_name)}</text>'
    )
    out.append(
        f'<text class="ylabel" x="18" y="{MARGIN_TOP + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_TOP + ph / 2:.2f})">{escape(spec.y_name)}</text>'
    )
    if spec.kind is FigureKind.SCATTER:
        out.append('<g class="marks" fill="none" stroke="navy">')
        for x, y in spec.points:
            out.append(f'<circle class="mark" cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3"/>')
        out.append("</g>")
    else:
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in spec.points)
        out.append(f'<polyline class="mark" fill="none" stroke="navy" stroke-width="1.5" points="{coords}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
