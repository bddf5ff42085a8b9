"""Scaling-exponent estimation: divider walks, box counting and log-log fits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .core import Feature, FeatureSet, Point, Polyline
from .errors import (
    DegenerateFitError,
    EmptyGeometryError,
    FractalMapsError,
    NonPositiveValueError,
    YardstickTooLargeError,
)

# parameter slack when a walk lands on (or a hair past) a vertex
_T_TOL = 1e-12
_SNAP = 1e-9


@dataclass(frozen=True)
class MeasurementRow:
    yardstick: float
    count: float

    @property
    def length(self) -> float:
        return self.count * self.yardstick


@dataclass(frozen=True)
class MeasurementTable:
    rows: tuple[MeasurementRow, ...]

    def __len__(self):
        return len(self.rows)

    @property
    def yardsticks(self) -> list[float]:
        return [r.yardstick for r in self.rows]

    @property
    def counts(self) -> list[float]:
        return [r.count for r in self.rows]

    @property
    def lengths(self) -> list[float]:
        return [r.length for r in self.rows]


@dataclass(frozen=True)
class PowerLawFit:
    slope: float
    intercept: float
    r_squared: float
    dimension: float


def fit_power_law(xs: Sequence[float], ys: Sequence[float]) -> PowerLawFit:
    """Ordinary least squares of log y on log x."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise DegenerateFitError("need two equal-length sequences with at least 2 points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise NonPositiveValueError("power-law fit needs strictly positive values")
    lx, ly = np.log(x), np.log(y)
    dx = lx - lx.mean()
    sxx = float(np.dot(dx, dx))
    if sxx == 0.0:
        raise DegenerateFitError("all x values are equal")
    dy = ly - ly.mean()
    slope = float(np.dot(dx, dy)) / sxx
    intercept = float(ly.mean() - slope * lx.mean())
    syy = float(np.dot(dy, dy))
    if syy == 0.0:
        r2 = 1.0
    else:
        resid = dy - slope * dx
        r2 = min(1.0, max(0.0, 1.0 - float(np.dot(resid, resid)) / syy))
    return PowerLawFit(slope, intercept, r2, slope)


def _vertices(p: Polyline) -> np.ndarray:
    return np.asarray(p.vertices, dtype=float)


def _exit_parameter(a, d, c, radius):
    """Largest t with |a + t d - c| = radius, or None if the line misses the circle."""
    fx, fy = a[0] - c[0], a[1] - c[1]
    qa = d[0] * d[0] + d[1] * d[1]
    qb = 2 * (fx * d[0] + fy * d[1])
    qc = fx * fx + fy * fy - radius * radius
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return None
    return (-qb + math.sqrt(disc)) / (2 * qa)


def divider_walk(p: Polyline, yardstick: float) -> float:
    """Number of fixed-length chords needed to walk ``p`` from its first vertex.

    Each step jumps to the first point further along the line at exactly
    ``yardstick`` from the current anchor. The leftover straight-line distance
    to the last vertex is added as a fraction of a step.
    """
    if not yardstick > 0:
        raise FractalMapsError("yardstick must be positive")
    v = _vertices(p)
    start = v[0]
    reach = float(np.max(np.hypot(v[:, 0] - start[0], v[:, 1] - start[1])))
    if reach < yardstick * (1 - _SNAP):
        raise YardstickTooLargeError(f"yardstick {yardstick} exceeds the curve's reach {reach}")

    anchor = start.copy()
    seg, t0 = 0, 0.0
    nseg = len(v) - 1
    steps = 0
    while True:
        found = False
        j, tstart = seg, t0
        while j < nseg:
            a, b = v[j], v[j + 1]
            d = b - a
            t = _exit_parameter(a, d, anchor, yardstick)
            if t is not None and tstart - _T_TOL <= t <= 1 + _T_TOL:
                found = True
                break
            j, tstart = j + 1, 0.0
        if not found:
            break
        steps += 1
        if t >= 1 - _SNAP:
            anchor = v[j + 1].copy()
            seg, t0 = j + 1, 0.0
        else:
            t = max(t, tstart)
            anchor = v[j] + t * (v[j + 1] - v[j])
            seg, t0 = j, t
        if seg >= nseg:
            break

    rest = math.hypot(v[-1][0] - anchor[0], v[-1][1] - anchor[1]) / yardstick
    if rest < _SNAP:
        rest = 0.0
    elif abs(rest - 1) < _SNAP:
        rest = 1.0
    return steps + rest


def _table(sizes, counts) -> MeasurementTable:
    return MeasurementTable(tuple(MeasurementRow(float(s), float(c)) for s, c in zip(sizes, counts)))


def _sorted_sizes(sizes) -> list[float]:
    sizes = [float(s) for s in sizes]
    if any(not s > 0 for s in sizes):
        raise FractalMapsError("yardsticks and box sizes must be positive")
    if len(set(sizes)) < 2:
        raise DegenerateFitError("need at least two distinct sizes")
    return sorted(set(sizes), reverse=True)


def richardson_fit(p: Polyline, yardsticks: Sequence[float]) -> tuple[MeasurementTable, PowerLawFit]:
    """Divider counts N for each yardstick and the slope of log N on log(1/yardstick)."""
    sizes = _sorted_sizes(yardsticks)
    counts = [divider_walk(p, s) for s in sizes]
    fit = fit_power_law([1 / s for s in sizes], counts)
    return _table(sizes, counts), fit


def default_yardsticks(p: Polyline, n: int = 5, ratio: float = 0.5) -> list[float]:
    """Geometric yardstick sequence starting at half the curve's start-to-end reach."""
    v = _vertices(p)
    reach = float(np.max(np.hypot(v[:, 0] - v[0, 0], v[:, 1] - v[0, 1])))
    return [reach / 2 * ratio ** k for k in range(n)]


# -- box counting ---------------------------------------------------------

def _collect(geometry):
    """Split geometry into point, segment and filled-ring primitives."""
    if isinstance(geometry, Polyline):
        items = [geometry]
    elif isinstance(geometry, Point):
        items = [geometry]
    elif isinstance(geometry, Feature):
        items = [geometry.geometry]
    else:
        items = [f.geometry if isinstance(f, Feature) else f for f in geometry]
    points, segs, rings = [], [], []
    for g in items:
        if isinstance(g, Point):
            points.append((g.x, g.y))
        elif g.is_closed:
            rings.append(np.asarray(g.vertices[:-1], dtype=float))
        else:
            arr = _vertices(g)
            segs.append(np.hstack((arr[:-1], arr[1:])))
    if not (points or segs or rings):
        raise EmptyGeometryError("nothing to box-count")
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    segs = np.vstack(segs) if segs else np.empty((0, 4))
    return points, segs, rings


def _bounds(points, segs, rings):
    chunks = [points, segs[:, :2], segs[:, 2:]] + rings
    allxy = np.vstack([c for c in chunks if len(c)])
    return allxy.min(axis=0), allxy.max(axis=0)


def _clip_area(ring: np.ndarray, x0, y0, x1, y1) -> float:
    """Area of ``ring`` clipped to the box (Sutherland-Hodgman)."""
    poly = [tuple(p) for p in ring]
    for axis, bound, keep_above in ((0, x0, True), (0, x1, False), (1, y0, True), (1, y1, False)):
        if not poly:
            return 0.0
        out = []
        n = len(poly)
        for i in range(n):
            cur, prev = poly[i], poly[i - 1]
            cin = cur[axis] >= bound if keep_above else cur[axis] <= bound
            pin = prev[axis] >= bound if keep_above else prev[axis] <= bound
            if cin != pin:
                t = (bound - prev[axis]) / (cur[axis] - prev[axis])
                out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
            if cin:
                out.append(cur)
        poly = out
    if len(poly) < 3:
        return 0.0
    xs = np.array([p[0] for p in poly])
    ys = np.array([p[1] for p in poly])
    return 0.5 * abs(float(np.dot(xs, np.roll(ys, -1)) - np.dot(ys, np.roll(xs, -1))))


def _occupied(points, segs, rings, origin, extent, size) -> set:
    eps = 1e-9
    nx = max(1, math.ceil(extent[0] / size - eps))
    ny = max(1, math.ceil(extent[1] / size - eps))

    def cell(u, n):
        return min(max(math.floor(u + eps), 0), n - 1)

    cells = set()
    for x, y in points:
        cells.add((cell((x - origin[0]) / size, nx), cell((y - origin[1]) / size, ny)))

    for x0, y0, x1, y1 in segs:
        u0, v0 = (x0 - origin[0]) / size, (y0 - origin[1]) / size
        u1, v1 = (x1 - origin[0]) / size, (y1 - origin[1]) / size
        ts = [0.0, 1.0]
        for a, b in ((u0, u1), (v0, v1)):
            if a != b:
                lo, hi = sorted((a, b))
                for line in range(math.ceil(lo), math.floor(hi) + 1):
                    t = (line - a) / (b - a)
                    if 0 < t < 1:
                        ts.append(t)
        ts.sort()
        for ta, tb in zip(ts, ts[1:]):
            if tb - ta <= 1e-12:
                continue
            tm = (ta + tb) / 2
            cells.add((cell(u0 + tm * (u1 - u0), nx), cell(v0 + tm * (v1 - v0), ny)))

    for ring in rings:
        umin = (ring.min(axis=0) - origin) / size
        umax = (ring.max(axis=0) - origin) / size
        i_lo, j_lo = (max(math.floor(c + eps), 0) for c in umin)
        i_hi = min(max(math.ceil(umax[0] - eps), i_lo + 1), nx)
        j_hi = min(max(math.ceil(umax[1] - eps), j_lo + 1), ny)
        for i in range(i_lo, i_hi):
            for j in range(j_lo, j_hi):
                if (i, j) in cells:
                    continue
                bx, by = origin[0] + i * size, origin[1] + j * size
                if _clip_area(ring, bx, by, bx + size, by + size) > 1e-9 * size * size:
                    cells.add((i, j))
    return cells


def box_count(geometry: Union[FeatureSet, Polyline, Point], box_sizes: Sequence[float]
              ) -> tuple[MeasurementTable, PowerLawFit]:
    """Occupied-cell counts on grids anchored at the bounding-box minimum corner.

    Open polylines occupy the cells their segments pass through; closed
    polylines are treated as filled and occupy cells they overlap with
    positive area. The fit is log count on log(1/size).
    """
    points, segs, rings = _collect(geometry)
    sizes = _sorted_sizes(box_sizes)
    lo, hi = _bounds(points, segs, rings)
    extent = hi - lo
    counts = [len(_occupied(points, segs, rings, lo, extent, s)) for s in sizes]
    fit = fit_power_law([1 / s for s in sizes], counts)
    return _table(sizes, counts), fit
