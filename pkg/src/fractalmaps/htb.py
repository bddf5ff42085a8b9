"""Head/tail breaks, rank-size tables and Jenks natural breaks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import EmptySeriesError, FractalMapsError, NonPositiveValueError, TooManyClassesError


def validate_series(values) -> list[float]:
    vals = [float(v) for v in values]
    if not vals:
        raise EmptySeriesError("value series is empty")
    for i, v in enumerate(vals):
        if not (v > 0 and math.isfinite(v)):
            raise NonPositiveValueError(f"value #{i} is {v!r}; values must be positive and finite")
    return vals


def zipf_series(n: int) -> list[float]:
    """Exact rank-size law 1, 1/2, ..., 1/n."""
    if n < 1:
        raise FractalMapsError("zipf_series needs n >= 1")
    return [1.0 / k for k in range(1, n + 1)]


@dataclass(frozen=True)
class HtbLevelStat:
    split_index: int
    count_before_split: int
    mean: float
    head_count: int
    tail_count: int

    @property
    def head_fraction(self) -> float:
        return self.head_count / self.count_before_split


@dataclass(frozen=True)
class HtbResult:
    assignments: tuple[int, ...]
    level_stats: tuple[HtbLevelStat, ...]
    ht_index: int

    def level_counts(self) -> list[int]:
        counts = [0] * self.ht_index
        for lvl in self.assignments:
            counts[lvl - 1] += 1
        return counts


def head_tail_breaks(
    values: Sequence[float],
    head_limit: float = 0.40,
    max_levels: Optional[int] = None,
    min_split_size: int = 2,
) -> HtbResult:
    """Classify ``values`` by recursive splitting around the mean.

    Items strictly above the mean form the head; the head is split again
    while it stays a minority (``head_count / count <= head_limit``).
    ``max_levels`` caps the number of resulting levels and
    ``min_split_size`` the smallest set that may still be split.

    Level 1 holds the smallest values, level ``ht_index`` the largest.
    """
    vals = validate_series(values)
    if not 0 < head_limit < 1:
        raise FractalMapsError(f"head_limit must lie in (0, 1), got {head_limit}")
    if max_levels is not None and max_levels < 1:
        raise FractalMapsError("max_levels must be >= 1")

    arr = np.asarray(vals)
    idx = np.arange(len(arr))
    assignments = np.ones(len(arr), dtype=int)
    stats: list[HtbLevelStat] = []
    while True:
        n = len(idx)
        if n < min_split_size:
            break
        if max_levels is not None and len(stats) >= max_levels - 1:
            break
        current = arr[idx]
        mean = math.fsum(current) / n
        head = idx[current > mean]
        h = len(head)
        if h == 0 or h / n > head_limit:
            break
        stats.append(HtbLevelStat(len(stats) + 1, n, mean, h, n - h))
        assignments[head] = len(stats) + 1
        idx = head
    return HtbResult(tuple(int(a) for a in assignments), tuple(stats), len(stats) + 1)


def ht_index(values, head_limit=0.40, max_levels=None, min_split_size=2) -> int:
    return head_tail_breaks(values, head_limit, max_levels, min_split_size).ht_index


@dataclass(frozen=True)
class RankSizeTable:
    rows: tuple[tuple[int, float], ...]

    def __len__(self):
        return len(self.rows)

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.rows]


def rank_size(values) -> RankSizeTable:
    vals = validate_series(values)
    # sorted() is stable, so ties keep input order
    ordered = sorted(vals, key=lambda v: -v)
    return RankSizeTable(tuple((r, v) for r, v in enumerate(ordered, start=1)))


def nested_rank_size(values, head_limit=0.40, max_levels=None, min_split_size=2) -> list[RankSizeTable]:
    """Rank-size table of the full series followed by one per committed head."""
    vals = validate_series(values)
    res = head_tail_breaks(vals, head_limit, max_levels, min_split_size)
    tables = [rank_size(vals)]
    for level in range(2, res.ht_index + 1):
        tables.append(rank_size([v for v, a in zip(vals, res.assignments) if a >= level]))
    return tables


def _class_costs(x: np.ndarray):
    s1 = np.concatenate(([0.0], np.cumsum(x)))
    s2 = np.concatenate(([0.0], np.cumsum(x * x)))

    def cost(a, b):
        # sum of squared deviations of x[a:b]; a may be an array
        n = b - a
        s = s1[b] - s1[a]
        return np.maximum(s2[b] - s2[a] - s * s / n, 0.0)

    return cost


def jenks_breaks(values, k: int) -> tuple[list[float], list[int]]:
    """Optimal variance-minimising partition into ``k`` contiguous classes.

    Returns ``(breaks, assignments)``: ``breaks`` has k+1 entries, the series
    minimum followed by each class maximum; ``assignments`` gives the 1-based
    class of every input item (class 1 = smallest values).

    Among partitions with equal cost the one with the lexicographically
    smallest break positions wins, so results are deterministic.
    """
    vals = validate_series(values)
    distinct = len(set(vals))
    if not 1 <= k <= distinct:
        raise TooManyClassesError(f"k={k} classes requested for {distinct} distinct values")
    order = sorted(range(len(vals)), key=lambda i: vals[i])
    x = np.asarray([vals[i] for i in order])
    n = len(x)
    cost = _class_costs(x)

    # tail[j][a]: optimal cost of x[a:] split into j classes
    tail = np.full((k + 1, n + 1), np.inf)
    tail[0, n] = 0.0
    for j in range(1, k + 1):
        for a in range(n - j, -1, -1):
            b = np.arange(a + 1, n - j + 2)
            tail[j, a] = np.min(cost(a, b) + tail[j - 1, b])

    tol = 1e-12 * max(1.0, float(np.sum((x - x.mean()) ** 2)))
    starts = [0]
    a = 0
    for j in range(k, 1, -1):
        b = np.arange(a + 1, n - j + 2)
        total = cost(a, b) + tail[j - 1, b]
        a = int(b[np.nonzero(total <= tail[j, a] + tol)[0][0]])
        starts.append(a)
    ends = starts[1:] + [n]

    breaks = [float(x[0])] + [float(x[e - 1]) for e in ends]
    assignments = [0] * n
    for cls, (s, e) in enumerate(zip(starts, ends), start=1):
        for pos in range(s, e):
            assignments[order[pos]] = cls
    return breaks, assignments
