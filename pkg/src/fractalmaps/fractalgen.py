"""Generators for Koch curves, Sierpinski patterns, Fibonacci rectangles and Zipf cities.

Randomness comes only from ``numpy.random.Generator(PCG64(seed))``; equal
seeds give bit-identical output on every platform numpy supports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Feature, FeatureSet, Point, Polyline, ScalingRatio
from .errors import FractalMapsError, InvalidApexHeightError, IterationCapError, OverflowGuardError
from .htb import zipf_series

KOCH_HEIGHT = math.sqrt(3) / 6
DEFAULT_SEED = 20150101

# 4**12 segments is ~16M vertices; beyond that memory, not math, is the limit
KOCH_MAX_ITERATIONS = 12
CARPET_MAX_DEPTH = 8
TRIANGLE_MAX_DEPTH = 12
# F(1476) is the largest Fibonacci number a double can hold
FIBONACCI_MAX_TERMS = 1476


@dataclass(frozen=True)
class HierarchicalFeature:
    """A constructed pattern with every construction level kept.

    ``levels[0]`` is the initiator, ``levels[k]`` the k-th iteration, all in
    construction units. ``scale`` is the exact reduction applied on output,
    so repeated generalization composes without floating-point drift.
    """

    levels: tuple[FeatureSet, ...]
    scaling_ratio: ScalingRatio
    kind: str
    scale: Fraction = Fraction(1)

    @property
    def iterations(self) -> int:
        return len(self.levels) - 1

    @property
    def base(self) -> FeatureSet:
        return self.level(self.iterations)

    def level(self, k: int) -> FeatureSet:
        return self.levels[k].scaled(float(self.scale))


def make_rng(seed) -> np.random.Generator:
    seed = DEFAULT_SEED if seed is None else int(seed)
    if not 0 <= seed < 2**64:
        raise FractalMapsError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.PCG64(seed))


def _check_cap(n, cap, what):
    if n < 0:
        raise IterationCapError(f"{what} must be >= 0")
    if n > cap:
        raise IterationCapError(f"{what} {n} exceeds the cap of {cap}")


def _koch_step(pts: np.ndarray, height: float, sides: np.ndarray) -> np.ndarray:
    a, b = pts[:-1], pts[1:]
    d = b - a
    normal = np.column_stack((-d[:, 1], d[:, 0]))
    p1 = a + d / 3
    p2 = a + 2 * d / 3
    apex = a + d / 2 + (height * sides)[:, None] * normal
    out = np.empty((4 * len(a) + 1, 2))
    out[0:-1:4] = a
    out[1::4] = p1
    out[2::4] = apex
    out[3::4] = p2
    out[-1] = pts[-1]
    return out


def _koch_levels(iterations, height, side_fn):
    pts = np.array([[0.0, 0.0], [1.0, 0.0]])
    levels = []
    for k in range(iterations + 1):
        line = Polyline(tuple(map(Point._make, pts.tolist())))
        levels.append(FeatureSet((Feature(line, _length(pts), {"level": str(k)}),)))
        if k < iterations:
            pts = _koch_step(pts, height, side_fn(len(pts) - 1))
    return tuple(levels)


def _length(pts):
    return math.fsum(np.hypot(*np.diff(pts, axis=0).T))


def koch_curve(iterations: int) -> HierarchicalFeature:
    """Koch curve on the unit segment with every bump on the left of travel."""
    _check_cap(iterations, KOCH_MAX_ITERATIONS, "iterations")
    levels = _koch_levels(iterations, KOCH_HEIGHT, lambda n: np.ones(n))
    return HierarchicalFeature(levels, ScalingRatio(1, 3), "koch")


def koch_random(iterations: int, apex_height: float = KOCH_HEIGHT, seed=None,
                left_probability: float = 0.5) -> HierarchicalFeature:
    """Statistical Koch curve: each bump flips side with a seeded coin.

    ``apex_height`` is the bump height relative to the replaced segment;
    lowering it lowers the similarity dimension. ``left_probability=1``
    reproduces :func:`koch_curve` exactly.
    """
    _check_cap(iterations, KOCH_MAX_ITERATIONS, "iterations")
    if not 0 < apex_height <= KOCH_HEIGHT:
        raise InvalidApexHeightError(f"apex_height must lie in (0, sqrt(3)/6], got {apex_height}")
    rng = make_rng(seed)

    def sides(n):
        return np.where(rng.random(n) < left_probability, 1.0, -1.0)

    levels = _koch_levels(iterations, apex_height, sides)
    return HierarchicalFeature(levels, ScalingRatio(1, 3), "koch")


def koch_similarity_dimension(apex_height: float) -> float:
    """Root D of 2*(1/3)**D + 2*s**D = 1 where s is the slanted segment length."""
    from scipy.optimize import brentq

    s = math.sqrt(1 / 36 + apex_height ** 2)
    return brentq(lambda d: 2 * (1 / 3) ** d + 2 * s ** d - 1, 1e-9, 2.0, xtol=1e-14)


def _square(x, y, side, level):
    ring = (Point(x, y), Point(x + side, y), Point(x + side, y + side), Point(x, y + side), Point(x, y))
    return Feature(Polyline(ring), side, {"level": str(level)})


def sierpinski_carpet(depth: int) -> HierarchicalFeature:
    """Unit square with the centre ninth removed recursively; 8**k cells at level k."""
    _check_cap(depth, CARPET_MAX_DEPTH, "depth")
    cells = [(0, 0)]  # integer corners in units of 3**-k
    levels = []
    for k in range(depth + 1):
        side = 3.0 ** -k
        levels.append(FeatureSet(tuple(_square(i * side, j * side, side, k) for i, j in cells)))
        if k < depth:
            cells = [(3 * i + di, 3 * j + dj) for i, j in cells
                     for dj in range(3) for di in range(3) if (di, dj) != (1, 1)]
    return HierarchicalFeature(tuple(levels), ScalingRatio(1, 3), "carpet")


def sierpinski_triangle(depth: int, shape: str = "right") -> HierarchicalFeature:
    """Sierpinski triangle with 3**k cells of side 2**-k at level k.

    ``shape="right"`` builds it on the right isosceles triangle with legs on
    the unit axes, so every cell fills half of one cell of a 2**-k grid.
    ``shape="equilateral"`` builds it on the unit equilateral triangle.
    """
    _check_cap(depth, TRIANGLE_MAX_DEPTH, "depth")
    if shape not in ("right", "equilateral"):
        raise FractalMapsError(f"unknown triangle shape {shape!r}")
    cells = [(0, 0)]  # lattice corners in units of 2**-k
    levels = []
    for k in range(depth + 1):
        side = 2.0 ** -k
        feats = []
        for i, j in cells:
            if shape == "right":
                x, y = i * side, j * side
                ring = (Point(x, y), Point(x + side, y), Point(x, y + side), Point(x, y))
            else:
                # (i, j) in the triangular lattice spanned by (1, 0) and (1/2, sqrt(3)/2)
                x, y = (i + j / 2) * side, j * side * math.sqrt(3) / 2
                ring = (Point(x, y), Point(x + side, y),
                        Point(x + side / 2, y + side * math.sqrt(3) / 2), Point(x, y))
            feats.append(Feature(Polyline(ring), side, {"level": str(k)}))
        levels.append(FeatureSet(tuple(feats)))
        if k < depth:
            cells = [(2 * i + di, 2 * j + dj) for i, j in cells for di, dj in ((0, 0), (1, 0), (0, 1))]
    return HierarchicalFeature(tuple(levels), ScalingRatio(1, 2), "triangle")


def fibonacci(n: int) -> list[int]:
    if n < 1:
        raise FractalMapsError("fibonacci needs n >= 1")
    if n > FIBONACCI_MAX_TERMS:
        raise OverflowGuardError(f"F({n}) exceeds double precision range (max n = {FIBONACCI_MAX_TERMS})")
    seq = [1, 1]
    while len(seq) < n:
        seq.append(seq[-1] + seq[-2])
    return seq[:n]


def golden_ratios(n: int) -> list[float]:
    """Ratios F(k+1)/F(k) for k = 1..n-1."""
    if n < 2:
        raise FractalMapsError("golden_ratios needs n >= 2")
    f = fibonacci(n)
    return [b / a for a, b in zip(f, f[1:])]


def golden_rectangles(n: int) -> FeatureSet:
    """Fibonacci squares packed in a counter-clockwise spiral.

    The last feature is the enclosing rectangle (attribute ``role=rectangle``);
    the others are the squares in construction order.
    """
    sides = fibonacci(n)
    x0, y0, x1, y1 = 0, 0, 1, 1
    squares = [(0, 0, 1)]
    # after the first square, grow right, up, left, down in turn
    for step, s in enumerate(sides[1:]):
        direction = step % 4
        if direction == 0:
            squares.append((x1, y0, s))
            x1 += s
        elif direction == 1:
            squares.append((x0, y1, s))
            y1 += s
        elif direction == 2:
            squares.append((x0 - s, y0, s))
            x0 -= s
        else:
            squares.append((x0, y0 - s, s))
            y0 -= s
    feats = []
    for k, (x, y, s) in enumerate(squares, start=1):
        ring = ((x, y), (x + s, y), (x + s, y + s), (x, y + s), (x, y))
        feats.append(Feature(Polyline(ring), s, {"role": "square", "index": str(k)}))
    rect = ((x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0))
    feats.append(Feature(Polyline(rect), (x1 - x0) * (y1 - y0), {"role": "rectangle"}))
    return FeatureSet(tuple(feats))


def zipf_cities(n: int, seed=None) -> FeatureSet:
    """``n`` point cities of size 1/k placed uniformly in the unit square."""
    sizes = zipf_series(n)
    xy = make_rng(seed).random((n, 2))
    return FeatureSet(tuple(
        Feature(Point(float(x), float(y)), m, {"rank": str(k)})
        for k, ((x, y), m) in enumerate(zip(xy, sizes), start=1)
    ))
