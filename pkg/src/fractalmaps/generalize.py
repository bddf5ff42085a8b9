"""Map generalization as scale-driven selection of large things."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .core import FeatureSet, _as_scale, scale_step, topfer_select_count
from .errors import (
    EmptyInputError,
    InsufficientDepthError,
    RatioMismatchError,
    TooManyLevelsDroppedError,
)
from .fractalgen import HierarchicalFeature
from .htb import head_tail_breaks


@dataclass(frozen=True)
class GeneralizationResult:
    retained: FeatureSet
    dropped_count: int
    levels_dropped: Optional[int] = None
    cutoff_measure: Optional[float] = None
    # truncated construction, so a generalized pattern can be generalized again
    hierarchy: Optional[HierarchicalFeature] = None


def _pattern_steps(step: Fraction, ratio_inverse: int) -> Optional[int]:
    """m with step == ratio_inverse**m, or None."""
    if step.denominator != 1:
        return None
    n, m = step.numerator, 0
    while n % ratio_inverse == 0:
        n //= ratio_inverse
        m += 1
    return m if n == 1 else None


def generalize_hierarchical(h: HierarchicalFeature, source_scale, target_scale) -> GeneralizationResult:
    """Drop the finest construction levels the target scale can no longer show.

    The map-scale step must be a whole power m of the pattern's own scaling
    ratio; the result is construction level ``iterations - m`` reduced by
    source/target.
    """
    step = scale_step(source_scale, target_scale)
    inv = h.scaling_ratio.denominator // h.scaling_ratio.numerator
    m = _pattern_steps(step, inv)
    if m is None or h.scaling_ratio.numerator != 1:
        raise RatioMismatchError(
            f"{_as_scale(source_scale)} -> {_as_scale(target_scale)} is a 1/{float(step):g} reduction, "
            f"not a power of the pattern's scaling ratio {h.scaling_ratio}"
        )
    if m > h.iterations:
        raise InsufficientDepthError(f"need {m} construction levels to drop, pattern has {h.iterations}")
    keep = h.iterations - m
    truncated = replace(h, levels=h.levels[: keep + 1], scale=h.scale / step)
    retained = truncated.base
    return GeneralizationResult(
        retained=retained,
        dropped_count=h.levels[-1].element_count() - h.levels[keep].element_count(),
        levels_dropped=m,
        hierarchy=truncated,
    )


def generalize_htb(fs: FeatureSet, levels_to_drop: int, head_limit: float = 0.40,
                   scale_factor: float = 1.0, max_levels: Optional[int] = None,
                   min_split_size: int = 2) -> GeneralizationResult:
    """Keep features above the lowest ``levels_to_drop`` head/tail-breaks levels."""
    if len(fs) == 0:
        raise EmptyInputError("feature set is empty")
    res = head_tail_breaks(fs.measures(), head_limit, max_levels, min_split_size)
    if not 0 <= levels_to_drop < res.ht_index:
        raise TooManyLevelsDroppedError(
            f"cannot drop {levels_to_drop} levels from a hierarchy of {res.ht_index}")
    kept = [f for f, lvl in zip(fs, res.assignments) if lvl > levels_to_drop]
    retained = FeatureSet(tuple(kept)).scaled(scale_factor)
    return GeneralizationResult(
        retained=retained,
        dropped_count=len(fs) - len(kept),
        levels_dropped=levels_to_drop,
        cutoff_measure=min(f.measure for f in kept),
    )


def generalize_topfer(fs: FeatureSet, source_scale, target_scale, constant: float = 1.0) -> GeneralizationResult:
    """Keep the radical-law number of largest features (ties by input order).

    At least one feature always survives, even when the law rounds to zero.
    """
    if len(fs) == 0:
        raise EmptyInputError("feature set is empty")
    step = scale_step(source_scale, target_scale)
    n = min(len(fs), max(1, topfer_select_count(len(fs), source_scale, target_scale, constant)))
    ranked = sorted(range(len(fs)), key=lambda i: -fs[i].measure)[:n]
    kept = [fs[i] for i in sorted(ranked)]
    retained = FeatureSet(tuple(kept)).scaled(float(1 / step))
    return GeneralizationResult(
        retained=retained,
        dropped_count=len(fs) - n,
        cutoff_measure=min(f.measure for f in kept),
    )
