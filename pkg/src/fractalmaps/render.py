"""SVG output for curves, cell patterns, classified city maps and word clouds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .core import FeatureSet, Point
from .errors import EmptyGeometryError, StyleLevelMismatchError
from .fractalgen import HierarchicalFeature, make_rng
from .textmap import WordLevel

# level 1 (the many small things) lightest, top level darkest
DEFAULT_COLORS = ("#c6dbef", "#6baed6", "#2171b5", "#08306b")


def _hex(c):
    return tuple(int(c[i:i + 2], 16) for i in (1, 3, 5))


@dataclass(frozen=True)
class RenderStyle:
    colors: tuple[str, ...] = DEFAULT_COLORS
    stroke_widths: tuple[float, ...] = (0.5, 1.0, 1.5, 2.5)
    min_radius: float = 1.0
    max_radius: float = 12.0
    width: float = 600.0
    height: float = 600.0
    margin: float = 20.0
    word_attempts: int = 200

    @property
    def levels(self) -> int:
        return min(len(self.colors), len(self.stroke_widths))

    @classmethod
    def ramp(cls, levels: int, **kwargs) -> "RenderStyle":
        """Style with ``levels`` colors interpolated across the default ramp."""
        lo, hi = _hex(DEFAULT_COLORS[0]), _hex(DEFAULT_COLORS[-1])
        colors, widths = [], []
        for k in range(levels):
            t = k / (levels - 1) if levels > 1 else 1.0
            rgb = (round(a + t * (b - a)) for a, b in zip(lo, hi))
            colors.append("#%02x%02x%02x" % tuple(rgb))
            widths.append(0.5 + 2.0 * t)
        return cls(colors=tuple(colors), stroke_widths=tuple(widths), **kwargs)


def _num(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


def _open(width, height) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_num(width)}" '
        f'height="{_num(height)}" viewBox="0 0 {_num(width)} {_num(height)}">',
        f'<rect x="0" y="0" width="{_num(width)}" height="{_num(height)}" fill="#ffffff"/>',
    ]


def _check_levels(levels, style):
    top = max(levels)
    if top > style.levels:
        raise StyleLevelMismatchError(f"data has {top} levels but the style defines {style.levels}")


def level_radii(measures: Sequence[float], levels: Sequence[int], style: RenderStyle) -> dict[int, float]:
    """Symbol radius per level, proportional to sqrt of the level's mean measure."""
    sums: dict[int, list[float]] = {}
    for m, lvl in zip(measures, levels):
        sums.setdefault(lvl, []).append(m)
    means = {lvl: math.fsum(v) / len(v) for lvl, v in sums.items()}
    top = max(means.values())
    span = style.max_radius - style.min_radius
    return {lvl: style.min_radius + span * math.sqrt(mean / top) for lvl, mean in sorted(means.items())}


def _render_features(fs: FeatureSet, style: RenderStyle, levels: Optional[Sequence[int]]) -> str:
    if len(fs) == 0:
        raise EmptyGeometryError("nothing to render")
    classified = levels is not None
    if not classified:
        levels = [1] * len(fs)
    elif len(levels) != len(fs):
        raise StyleLevelMismatchError("one level per feature is required")
    _check_levels(levels, style)

    xs, ys = [], []
    for f in fs:
        pts = [f.geometry] if isinstance(f.geometry, Point) else f.geometry.vertices
        xs.extend(p.x for p in pts)
        ys.extend(p.y for p in pts)
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    pad = style.margin + style.max_radius
    span = max(x1 - x0, y1 - y0) or 1.0
    k = min(style.width, style.height) - 2 * pad
    k = k / span

    def tx(p):
        return _num(pad + (p.x - x0) * k), _num(style.height - pad - (p.y - y0) * k)

    radii = level_radii(fs.measures(), levels, style)
    lines = _open(style.width, style.height)
    # large symbols last so they sit on top
    for i in sorted(range(len(fs)), key=lambda i: levels[i]):
        f, lvl = fs[i], levels[i]
        color = style.colors[lvl - 1]
        if f.kind == "point":
            cx, cy = tx(f.geometry)
            lines.append(f'<circle cx="{cx}" cy="{cy}" r="{_num(radii[lvl])}" fill="{color}" '
                         f'data-level="{lvl}"/>')
            continue
        verts = f.geometry.vertices[:-1] if f.kind == "polygon" else f.geometry.vertices
        coords = [tx(p) for p in verts]
        d = "M " + " L ".join(f"{a} {b}" for a, b in coords)
        if f.kind == "polygon":
            lines.append(f'<path d="{d} Z" fill="{color}" stroke="none" data-level="{lvl}"/>')
        else:
            stroke = color if classified else "#000000"
            lines.append(f'<path d="{d}" fill="none" stroke="{stroke}" '
                         f'stroke-width="{_num(style.stroke_widths[lvl - 1])}" data-level="{lvl}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PlacedWord:
    word: WordLevel
    x: float
    y: float
    width: float
    height: float

    def overlaps(self, other: "PlacedWord") -> bool:
        return (self.x < other.x + other.width and other.x < self.x + self.width
                and self.y < other.y + other.height and other.y < self.y + self.height)


def layout_words(words: Sequence[WordLevel], style: RenderStyle, seed=None) -> list[PlacedWord]:
    """Greedy seeded placement, largest words first, with no box overlaps.

    Each word tries ``style.word_attempts`` random spots inside the canvas;
    a word that fits nowhere starts a new row below everything placed.
    """
    rng = make_rng(seed)
    placed: list[PlacedWord] = []
    boxes = np.empty((0, 4))  # x, y, width, height of placed words
    inner_w = style.width - 2 * style.margin
    inner_h = style.height - 2 * style.margin
    for w in sorted(words, key=lambda w: -w.size):
        width, height = 0.6 * w.size * len(w.token), w.size
        spot = None
        if width <= inner_w and height <= inner_h:
            xs = style.margin + rng.random(style.word_attempts) * (inner_w - width)
            ys = style.margin + rng.random(style.word_attempts) * (inner_h - height)
            hit = ((xs[:, None] < boxes[:, 0] + boxes[:, 2]) & (boxes[:, 0] < xs[:, None] + width)
                   & (ys[:, None] < boxes[:, 1] + boxes[:, 3]) & (boxes[:, 1] < ys[:, None] + height))
            free = np.nonzero(~hit.any(axis=1))[0]
            if len(free):
                spot = PlacedWord(w, float(xs[free[0]]), float(ys[free[0]]), width, height)
        if spot is None:
            bottom = max((p.y + p.height for p in placed), default=style.margin)
            spot = PlacedWord(w, style.margin, bottom, width, height)
        placed.append(spot)
        boxes = np.vstack((boxes, [spot.x, spot.y, width, height]))
    return placed


def _render_words(words: Sequence[WordLevel], style: RenderStyle, seed) -> str:
    if not words:
        raise EmptyGeometryError("no words to render")
    _check_levels([w.level for w in words], style)
    placed = layout_words(words, style, seed)
    width = max([style.width] + [p.x + p.width + style.margin for p in placed])
    height = max([style.height] + [p.y + p.height + style.margin for p in placed])
    lines = _open(width, height)
    for p in placed:
        color = style.colors[p.word.level - 1]
        lines.append(
            f'<text x="{_num(p.x)}" y="{_num(p.y + 0.8 * p.height)}" font-family="sans-serif" '
            f'font-size="{_num(p.word.size)}" fill="{color}" data-level="{p.word.level}">'
            f"{escape(p.word.token)}</text>"
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_svg(content, style: Optional[RenderStyle] = None, seed=None,
               levels: Optional[Sequence[int]] = None) -> str:
    """SVG text for a pattern, a (classified) feature set or a word-level table.

    ``levels`` gives each feature's class, 1 = least prominent; a
    :class:`HierarchicalFeature` renders its deepest level.
    """
    style = style or RenderStyle()
    if isinstance(content, HierarchicalFeature):
        content = content.base
    if isinstance(content, FeatureSet):
        return _render_features(content, style, levels)
    words = list(content)
    if words and not all(isinstance(w, WordLevel) for w in words):
        raise TypeError("render_svg expects a FeatureSet, HierarchicalFeature or WordLevel sequence")
    return _render_words(words, style, seed)
