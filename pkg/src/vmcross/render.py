"""Deterministic SVG output for petal diagrams and multicrossing side views.

Coordinates use the SVG convention (y down), so increasing angle is
clockwise on screen, matching the clockwise numbering of segments.
Every number is printed with three decimals and elements are emitted in a
fixed order, so equal inputs give byte-identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .crossing import MulticrossingSpec, validate_crossing
from .petal import InvalidPetalError, PetalDiagram, direction_index, validate_petal


@dataclass(frozen=True)
class RenderOptions:
    width: float = 1000.0
    height: float = 1000.0
    stroke_width: float = 3.0
    font_size: float = 18.0
    legend: bool = True
    mark_start: bool = True
    label_both_ends: bool = False

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas dimensions must be positive")
        if self.stroke_width <= 0 or self.font_size <= 0:
            raise ValueError("stroke width and font size must be positive")


def _f(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def _header(opts: RenderOptions, title: str) -> list[str]:
    w, h = _f(opts.width), _f(opts.height)
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
    ]


def _point(cx, cy, r, theta):
    return cx + r * math.cos(theta), cy + r * math.sin(theta)


def render_petal_svg(diagram: PetalDiagram, options: RenderOptions | None = None) -> str:
    problems = validate_petal(diagram)
    if problems:
        raise InvalidPetalError(problems)
    opts = options or RenderOptions()
    m = diagram.m
    cx, cy = opts.width / 2, opts.height / 2
    radius = 0.28 * min(opts.width, opts.height)
    petal_r = 1.7 * radius
    sw = opts.stroke_width

    def angle(k):
        return direction_index(k, m) * math.pi / m

    out = _header(opts, f"petal diagram, {m} petals")
    out.append(f'<g fill="none" stroke="black" stroke-width="{_f(sw)}" stroke-linecap="round">')
    for k in range(1, m + 1):
        x1, y1 = _point(cx, cy, -radius, angle(k))
        x2, y2 = _point(cx, cy, radius, angle(k))
        out.append(
            f'<line class="segment" data-segment="{k}" x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}"/>'
        )
    start = None
    for k in range(1, m + 1):
        # the loop leaving segment k turns clockwise by pi/m into segment k+1
        a0 = angle(k)
        a1 = a0 + math.pi / m
        spread = 0.15 * (a1 - a0)
        p, c1, c2, q = (
            _point(cx, cy, radius, a0),
            _point(cx, cy, petal_r, a0 + spread),
            _point(cx, cy, petal_r, a1 - spread),
            _point(cx, cy, radius, a1),
        )
        coords = " ".join(f"{_f(x)} {_f(y)}" for x, y in (c1, c2, q))
        out.append(
            f'<path class="petal" data-from="{k}" data-to="{k % m + 1}" d="M {_f(p[0])} {_f(p[1])} C {coords}"/>'
        )
        if k == m:
            start = tuple((a + 3 * b + 3 * c + d) / 8 for a, b, c, d in zip(p, c1, c2, q))
    out.append("</g>")

    if opts.mark_start:
        # dot on the outer edge of the petal that feeds segment 1
        sx, sy = start
        out.append(f'<circle class="start" cx="{_f(sx)}" cy="{_f(sy)}" r="{_f(2.5 * sw)}" fill="black"/>')

    fs = opts.font_size
    out.append(
        f'<g font-family="sans-serif" font-size="{_f(fs)}" text-anchor="middle" dominant-baseline="middle">'
    )
    label_r = radius + 0.9 * fs
    for k in range(1, m + 1):
        ends = (-label_r, label_r) if opts.label_both_ends else (-label_r,)
        for r in ends:
            # offset sideways so labels do not sit on the stroke
            lx, ly = _point(cx, cy, r, angle(k))
            nx, ny = -math.sin(angle(k)), math.cos(angle(k))
            lx += 0.6 * fs * nx
            ly += 0.6 * fs * ny
            out.append(
                f'<text class="height" data-segment="{k}" x="{_f(lx)}" y="{_f(ly)}">{diagram.height(k)}</text>'
            )
    out.append("</g>")

    if opts.legend:
        out.extend(_petal_legend(diagram, opts))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _petal_legend(diagram: PetalDiagram, opts: RenderOptions) -> list[str]:
    fs = opts.font_size
    x, y = 0.02 * opts.width, 0.02 * opts.height + fs
    lines = [f'<g class="legend" font-family="sans-serif" font-size="{_f(fs)}">']
    lines.append(f'<text x="{_f(x)}" y="{_f(y)}">petals: {diagram.m}</text>')
    pairs = sorted(diagram.classical_pairs)
    if not pairs:
        y += 1.3 * fs
        lines.append(f'<text x="{_f(x)}" y="{_f(y)}">all crossings virtual</text>')
    for s, t in pairs:
        over, under = (s, t) if diagram.height(s) < diagram.height(t) else (t, s)
        y += 1.3 * fs
        lines.append(f'<text class="classical" x="{_f(x)}" y="{_f(y)}">segment {over} over segment {under}</text>')
    lines.append("</g>")
    return lines


def render_crossing_svg(spec: MulticrossingSpec, options: RenderOptions | None = None) -> str:
    """Side view: one horizontal strand per arc, top to bottom by height.

    Each virtual pair gets its own bracket-shaped arc on the right, joining
    the two strands.
    """
    verdict = validate_crossing(spec)
    if not verdict.valid:
        raise ValueError(f"invalid multicrossing, forbidden triples {list(verdict.offending_triples)}")
    opts = options or RenderOptions()
    n = spec.n
    fs = opts.font_size
    sw = opts.stroke_width
    top, bottom = 0.15 * opts.height, 0.85 * opts.height
    left, right = 0.12 * opts.width, 0.55 * opts.width
    strand_end = 0.95 * opts.width
    step = (bottom - top) / (n - 1)

    def y_of(pos):
        return top + (spec.height(pos) - 1) * step

    virtual = sorted(spec.virtual_pairs)
    out = _header(opts, f"virtual {n}-crossing side view")
    out.append(f'<g stroke="black" stroke-width="{_f(sw)}" fill="none">')
    for pos in range(1, n + 1):
        y = _f(y_of(pos))
        out.append(f'<line class="strand" data-position="{pos}" x1="{_f(left)}" y1="{y}" x2="{_f(strand_end)}" y2="{y}"/>')
    out.append("</g>")

    out.append(f'<g stroke="gray" stroke-width="{_f(0.7 * sw)}" fill="none">')
    col_w = (strand_end - right) / max(len(virtual), 1)
    for idx, (i, j) in enumerate(virtual):
        x0 = right + (idx + 0.5) * col_w
        y1, y2 = y_of(i), y_of(j)
        bulge = x0 + 0.4 * col_w
        out.append(
            f'<path class="virtual-arc" data-pair="{i},{j}" '
            f'd="M {_f(x0)} {_f(y1)} C {_f(bulge)} {_f(y1)} {_f(bulge)} {_f(y2)} {_f(x0)} {_f(y2)}"/>'
        )
    out.append("</g>")

    out.append(f'<g font-family="sans-serif" font-size="{_f(fs)}" dominant-baseline="middle">')
    for pos in range(1, n + 1):
        y = _f(y_of(pos))
        out.append(f'<text class="position" x="{_f(left - 1.5 * fs)}" y="{y}" text-anchor="end">{pos}</text>')
    out.append("</g>")
    out.append(
        f'<text class="notation" x="{_f(opts.width / 2)}" y="{_f(0.06 * opts.height)}" '
        f'font-family="sans-serif" font-size="{_f(fs)}" text-anchor="middle">{escape(str(spec))}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
