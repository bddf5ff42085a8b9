"""Fractal patterns, head/tail breaks classification and scale-driven map generalization."""

from .core import (
    Feature,
    FeatureSet,
    MapScale,
    Point,
    Polyline,
    ScalingRatio,
    polyline_length,
    series_scaling_ratio,
    sheets_per_derived,
    topfer_select_count,
)
from .dimension import MeasurementTable, PowerLawFit, box_count, divider_walk, fit_power_law, richardson_fit
from .fractalgen import (
    HierarchicalFeature,
    fibonacci,
    golden_ratios,
    golden_rectangles,
    koch_curve,
    koch_random,
    sierpinski_carpet,
    sierpinski_triangle,
    zipf_cities,
)
from .generalize import GeneralizationResult, generalize_hierarchical, generalize_htb, generalize_topfer
from .htb import HtbResult, head_tail_breaks, ht_index, jenks_breaks, nested_rank_size, rank_size, zipf_series
from .render import RenderStyle, render_svg
from .serialization import parse_features, read_series_csv, serialize_features, write_series_csv
from .textmap import structure_profile, tokenize, word_frequencies, word_levels

__version__ = "0.1.0"
