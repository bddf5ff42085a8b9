"""Geometry carriers and map-scale arithmetic.

Coordinates are abstract map units; nothing here knows about projections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

from .errors import (
    FractalMapsError,
    InvalidOrderError,
    NonConstantRatioError,
    NonIntegerRatioError,
)


class Point(NamedTuple):
    x: float
    y: float


def _as_point(p) -> Point:
    pt = p if isinstance(p, Point) else Point(float(p[0]), float(p[1]))
    if not (math.isfinite(pt.x) and math.isfinite(pt.y)):
        raise FractalMapsError(f"non-finite coordinate {tuple(pt)}")
    return pt


@dataclass(frozen=True)
class Polyline:
    """Ordered vertex chain with at least one positive-length segment.

    A polyline whose first and last vertices coincide is a closed ring and
    stands for a polygon (e.g. a Sierpinski cell).
    """

    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(_as_point(v) for v in self.vertices)
        if len(verts) < 2:
            raise FractalMapsError("a polyline needs at least 2 vertices")
        for a, b in zip(verts, verts[1:]):
            if a == b:
                raise FractalMapsError(f"repeated consecutive vertex {tuple(a)}")
        object.__setattr__(self, "vertices", verts)

    @property
    def is_closed(self) -> bool:
        return len(self.vertices) >= 4 and self.vertices[0] == self.vertices[-1]

    @property
    def segment_count(self) -> int:
        return len(self.vertices) - 1

    def segments(self) -> Iterator[tuple[Point, Point]]:
        return zip(self.vertices, self.vertices[1:])

    def scaled(self, factor: float) -> "Polyline":
        return Polyline(tuple(Point(x * factor, y * factor) for x, y in self.vertices))

    def transformed(self, fn) -> "Polyline":
        return Polyline(tuple(Point(*fn(x, y)) for x, y in self.vertices))


Geometry = Union[Point, Polyline]


@dataclass(frozen=True)
class Feature:
    geometry: Geometry
    measure: float
    attributes: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        geom = self.geometry
        if not isinstance(geom, Polyline):
            geom = _as_point(geom)
            object.__setattr__(self, "geometry", geom)
        m = float(self.measure)
        if not (m > 0 and math.isfinite(m)):
            raise FractalMapsError(f"feature measure must be positive and finite, got {self.measure!r}")
        object.__setattr__(self, "measure", m)
        object.__setattr__(self, "attributes", dict(self.attributes))

    @property
    def kind(self) -> str:
        if isinstance(self.geometry, Point):
            return "point"
        return "polygon" if self.geometry.is_closed else "polyline"

    def scaled(self, factor: float) -> "Feature":
        g = self.geometry
        g = Point(g.x * factor, g.y * factor) if isinstance(g, Point) else g.scaled(factor)
        return Feature(g, self.measure, self.attributes)


@dataclass(frozen=True)
class FeatureSet:
    features: tuple[Feature, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))

    def __len__(self) -> int:
        return len(self.features)

    def __iter__(self) -> Iterator[Feature]:
        return iter(self.features)

    def __getitem__(self, i):
        return self.features[i]

    def measures(self) -> list[float]:
        return [f.measure for f in self.features]

    def element_count(self) -> int:
        """Segments for lone open polylines, features otherwise."""
        if len(self.features) == 1 and self.features[0].kind == "polyline":
            return self.features[0].geometry.segment_count
        return len(self.features)

    def scaled(self, factor: float) -> "FeatureSet":
        if factor == 1:
            return self
        return FeatureSet(tuple(f.scaled(factor) for f in self.features))


@dataclass(frozen=True, order=True)
class MapScale:
    """Representative fraction 1:denominator."""

    denominator: int

    def __post_init__(self):
        if int(self.denominator) != self.denominator or self.denominator < 1:
            raise FractalMapsError(f"map scale denominator must be a positive integer, got {self.denominator!r}")
        object.__setattr__(self, "denominator", int(self.denominator))

    def __str__(self):
        return f"1:{self.denominator}"


@dataclass(frozen=True)
class ScalingRatio:
    numerator: int
    denominator: int

    def __post_init__(self):
        if not (0 < self.numerator < self.denominator):
            raise FractalMapsError(f"scaling ratio must lie strictly in (0, 1), got {self.numerator}/{self.denominator}")

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self):
        return self.numerator / self.denominator

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"


def _as_scale(s) -> MapScale:
    return s if isinstance(s, MapScale) else MapScale(s)


def polyline_length(p: Polyline) -> float:
    return math.fsum(math.hypot(b.x - a.x, b.y - a.y) for a, b in p.segments())


def scale_step(source, derived) -> Fraction:
    """Exact ratio derived/source of two map-scale denominators."""
    source, derived = _as_scale(source), _as_scale(derived)
    if derived.denominator < source.denominator:
        raise InvalidOrderError(f"{derived} is larger-scale than {source}")
    return Fraction(derived.denominator, source.denominator)


def sheets_per_derived(source, derived) -> int:
    """Number of source sheets that tile one derived sheet."""
    r = scale_step(source, derived)
    if r.denominator != 1:
        raise NonIntegerRatioError(
            f"{_as_scale(source)} -> {_as_scale(derived)} has scaling ratio 1/{float(r):g}, "
            "which is not the reciprocal of an integer"
        )
    return r.numerator ** 2


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def topfer_select_count(n_source: int, source, derived, constant: float = 1.0) -> int:
    """Radical-law object count: n * sqrt(source/derived), rounded half up."""
    if n_source < 0:
        raise FractalMapsError("n_source must be non-negative")
    if not constant > 0:
        raise FractalMapsError("constant must be positive")
    r = scale_step(source, derived)
    return max(0, round_half_up(constant * n_source * math.sqrt(1 / r)))


def series_scaling_ratio(scales: Sequence) -> ScalingRatio:
    scales = [_as_scale(s) for s in scales]
    if len(scales) < 2:
        raise FractalMapsError("need at least two map scales")
    steps = []
    for a, b in zip(scales, scales[1:]):
        if b.denominator <= a.denominator:
            raise InvalidOrderError("map scales must be sorted by strictly increasing denominator")
        steps.append(Fraction(b.denominator, a.denominator))
    if any(s != steps[0] for s in steps[1:]):
        raise NonConstantRatioError(f"consecutive ratios differ: {', '.join(str(1 / s) for s in steps)}")
    r = steps[0]
    if r.denominator != 1:
        raise NonIntegerRatioError(f"scaling ratio 1/{float(r):g} is not the reciprocal of an integer")
    return ScalingRatio(1, r.numerator)


def as_feature_set(items: Iterable) -> FeatureSet:
    if isinstance(items, FeatureSet):
        return items
    return FeatureSet(tuple(items))
