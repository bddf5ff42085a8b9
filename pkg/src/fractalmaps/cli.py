"""Command-line entry point: ``fractalmaps <command> ...``.

Exit status is 0 on success, 1 for usage errors and 2 for data or
validation errors (ratio mismatches, bad input files, ...).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import dimension, fractalgen, generalize, htb, serialization, textmap
from .core import (
    FeatureSet,
    MapScale,
    Polyline,
    polyline_length,
    series_scaling_ratio,
    sheets_per_derived,
    topfer_select_count,
)
from .errors import FractalMapsError
from .fractalgen import DEFAULT_SEED
from .render import RenderStyle, render_svg
from .serialization import fmt

# every public operation and the one subcommand that exposes it
OPERATIONS = {
    "core.polyline_length": "dimension length",
    "core.sheets_per_derived": "sheets",
    "core.topfer_select_count": "sheets --topfer",
    "core.series_scaling_ratio": "sheets --series",
    "htb.head_tail_breaks": "classify htb",
    "htb.ht_index": "classify htb --table ht-index",
    "htb.rank_size": "classify htb --table rank-size",
    "htb.nested_rank_size": "classify htb --table nested",
    "htb.jenks_breaks": "classify jenks",
    "htb.zipf_series": "classify htb --table series",
    "fractalgen.koch_curve": "generate koch",
    "fractalgen.koch_random": "generate koch-random",
    "fractalgen.sierpinski_carpet": "generate carpet",
    "fractalgen.sierpinski_triangle": "generate triangle",
    "fractalgen.fibonacci": "generate fib",
    "fractalgen.golden_ratios": "generate fib --ratios",
    "fractalgen.golden_rectangles": "generate golden-rect",
    "fractalgen.zipf_cities": "generate zipf-cities",
    "dimension.divider_walk": "dimension richardson",
    "dimension.richardson_fit": "dimension richardson --fit",
    "dimension.box_count": "dimension boxcount",
    "dimension.fit_power_law": "dimension fit",
    "generalize.generalize_hierarchical": "generalize hier",
    "generalize.generalize_htb": "generalize htb",
    "generalize.generalize_topfer": "generalize topfer",
    "textmap.tokenize": "textmap tokens",
    "textmap.word_frequencies": "textmap freq",
    "textmap.word_levels": "textmap levels",
    "textmap.structure_profile": "textmap profile",
    "serialization.serialize_features": "generate",
    "serialization.parse_features": "render",
    "serialization.write_series_csv": "classify htb --table series",
    "serialization.read_series_csv": "classify --input",
    "render.render_svg": "render",
}


class UsageError(Exception):
    def __init__(self, message, parser=None):
        super().__init__(message)
        self.parser = parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}", self)


def _sizes(text: str) -> list[float]:
    try:
        return [float(Fraction(tok.strip())) for tok in text.split(",") if tok.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers or fractions, got {text!r}")


def _read(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _pattern(args):
    if args.pattern == "koch":
        return fractalgen.koch_curve(args.iters)
    if args.pattern == "koch-random":
        return fractalgen.koch_random(args.iters, args.apex_height, args.seed)
    if args.pattern == "carpet":
        return fractalgen.sierpinski_carpet(args.depth)
    return fractalgen.sierpinski_triangle(args.depth, args.shape)


def _add_pattern_flags(p, patterns=("koch", "koch-random", "carpet", "triangle")):
    p.add_argument("--pattern", choices=patterns)
    p.add_argument("--iters", type=int, default=3, help="Koch iterations")
    p.add_argument("--depth", type=int, default=3, help="Sierpinski depth")
    p.add_argument("--shape", choices=("right", "equilateral"), default="right")
    p.add_argument("--apex-height", type=float, default=fractalgen.KOCH_HEIGHT)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


def _csv(header, rows) -> str:
    return "\n".join([",".join(header)] + [",".join(str(c) for c in row) for row in rows])


def _pretty(header, rows) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells)


def _table(args, header, rows, pretty_rows=None) -> str:
    if getattr(args, "pretty", False):
        return _pretty(header, pretty_rows if pretty_rows is not None else rows)
    return _csv(header, rows)


# -- generate ---------------------------------------------------------------

def cmd_generate(args) -> str:
    what = args.what
    if what == "fib":
        terms = fractalgen.fibonacci(args.n)
        if args.ratios:
            ratios = fractalgen.golden_ratios(args.n) if args.n >= 2 else []
            return _table(args, ["k", "ratio"], [(k, fmt(r)) for k, r in enumerate(ratios, start=1)],
                          [(k, f"{r:.3f}") for k, r in enumerate(ratios, start=1)])
        return _table(args, ["k", "fibonacci"], list(enumerate(terms, start=1)))
    if what == "golden-rect":
        fs = fractalgen.golden_rectangles(args.n)
    elif what == "zipf-cities":
        fs = fractalgen.zipf_cities(args.n, args.seed)
    else:
        args.pattern = what
        h = _pattern(args)
        fs = h.level(h.iterations if args.level is None else args.level)
    return serialization.serialize_features(fs).rstrip("\n")


# -- classify ---------------------------------------------------------------

def _series(args) -> list[float]:
    if args.n_zipf is not None:
        return htb.zipf_series(args.n_zipf)
    return serialization.read_series_csv(_read(args.input))


def cmd_classify(args) -> str:
    values = _series(args)
    if args.method == "jenks":
        breaks, assignments = htb.jenks_breaks(values, args.k)
        if args.table == "assignments":
            return _csv(["index", "value", "class"], [(i, fmt(v), c) for i, (v, c) in enumerate(zip(values, assignments))])
        classes = range(1, args.k + 1)
        counts = [assignments.count(c) for c in classes]
        rows = [(c, fmt(breaks[c - 1]), fmt(breaks[c]), counts[c - 1]) for c in classes]
        pretty = [(c, f"{breaks[c - 1]:.4g}", f"{breaks[c]:.4g}", counts[c - 1]) for c in classes]
        return _table(args, ["class", "lower", "upper", "count"], rows, pretty)

    kw = dict(head_limit=args.head_limit, max_levels=args.max_levels, min_split_size=args.min_split_size)
    table = args.table
    if table == "series":
        return serialization.write_series_csv(values)
    if table == "rank-size":
        return _csv(["rank", "value"], [(r, fmt(v)) for r, v in htb.rank_size(values).rows])
    if table == "nested":
        rows = [(t, r, fmt(v)) for t, tab in enumerate(htb.nested_rank_size(values, **kw), start=1) for r, v in tab.rows]
        return _csv(["table", "rank", "value"], rows)
    if table == "ht-index":
        return str(htb.ht_index(values, **kw))
    res = htb.head_tail_breaks(values, **kw)
    if table == "assignments":
        return _csv(["index", "value", "level"], [(i, fmt(v), a) for i, (v, a) in enumerate(zip(values, res.assignments))])
    header = ["split", "count_before_split", "mean", "head_count", "tail_count"]
    rows = [(s.split_index, s.count_before_split, fmt(s.mean), s.head_count, s.tail_count) for s in res.level_stats]
    pretty = [(s.split_index, s.count_before_split, f"{s.mean:.4f}", s.head_count, s.tail_count) for s in res.level_stats]
    out = _table(args, header, rows, pretty)
    if args.pretty:
        out += f"\nht-index: {res.ht_index}"
    return out


# -- dimension --------------------------------------------------------------

def _geometry(args) -> FeatureSet:
    if args.pattern:
        return _pattern(args).base
    return serialization.parse_features(_read(args.input))


def _first_polyline(fs: FeatureSet) -> Polyline:
    for f in fs:
        if isinstance(f.geometry, Polyline):
            return f.geometry
    raise FractalMapsError("input has no polyline feature")


def _fit_json(table, fit) -> str:
    doc = {
        "table": [{"yardstick": r.yardstick, "count": r.count, "length": r.length} for r in table.rows],
        "fit": {"slope": fit.slope, "intercept": fit.intercept, "r_squared": fit.r_squared, "dimension": fit.dimension},
    }
    return json.dumps(doc, indent=2)


def _default_box_sizes(args):
    if args.pattern == "carpet":
        return [3.0 ** -k for k in range(1, args.depth + 1)]
    if args.pattern == "triangle":
        return [2.0 ** -k for k in range(1, args.depth + 1)]
    if args.pattern in ("koch", "koch-random"):
        return [3.0 ** -k for k in range(2, min(args.iters, 6) + 1)] if args.iters >= 3 else [1 / 3, 1 / 9]
    return [2.0 ** -k for k in range(1, 6)]


def cmd_dimension(args) -> str:
    if args.method == "fit":
        rows = [line.split(",") for line in _read(args.input).splitlines() if line.strip()]
        if rows and not _is_number(rows[0][0]):
            rows = rows[1:]
        try:
            xs, ys = [float(r[0]) for r in rows], [float(r[1]) for r in rows]
        except (ValueError, IndexError):
            raise FractalMapsError("fit input must be two numeric columns x,y")
        fit = dimension.fit_power_law(xs, ys)
        return json.dumps({"slope": fit.slope, "intercept": fit.intercept, "r_squared": fit.r_squared}, indent=2)
    if args.method == "length":
        return fmt(polyline_length(_first_polyline(_geometry(args))))
    fs = _geometry(args)
    if args.method == "richardson":
        line = _first_polyline(fs)
        sizes = args.sizes or dimension.default_yardsticks(line)
        if not args.fit and len(sizes) == 1:
            return fmt(dimension.divider_walk(line, sizes[0]))
        table, fit = dimension.richardson_fit(line, sizes)
    else:
        table, fit = dimension.box_count(fs, args.sizes or _default_box_sizes(args))
    if args.format == "csv":
        return serialization.write_measurement_csv(table)
    return _fit_json(table, fit)


def _is_number(s) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


# -- generalize -------------------------------------------------------------

def _features(args) -> FeatureSet:
    if args.n_zipf_cities is not None:
        return fractalgen.zipf_cities(args.n_zipf_cities, args.seed)
    return serialization.parse_features(_read(args.input))


def _summary(res) -> str:
    return json.dumps({
        "retained": len(res.retained),
        "dropped_count": res.dropped_count,
        "levels_dropped": res.levels_dropped,
        "cutoff_measure": res.cutoff_measure,
    }, indent=2)


def cmd_generalize(args) -> str:
    if args.method == "hier":
        if not args.pattern:
            raise UsageError("generalize hier needs --pattern")
        res = generalize.generalize_hierarchical(_pattern(args), MapScale(args.from_scale), MapScale(args.to_scale))
    elif args.method == "htb":
        res = generalize.generalize_htb(_features(args), args.levels_to_drop, args.head_limit,
                                        args.scale_factor, args.max_levels)
    else:
        res = generalize.generalize_topfer(_features(args), MapScale(args.from_scale),
                                           MapScale(args.to_scale), args.constant)
    if args.summary:
        return _summary(res)
    return serialization.serialize_features(res.retained).rstrip("\n")


# -- sheets -----------------------------------------------------------------

def cmd_sheets(args) -> str:
    if args.series:
        return str(series_scaling_ratio([MapScale(int(s)) for s in args.series.split(",")]))
    if args.from_scale is None or args.to_scale is None:
        raise UsageError("sheets needs --from and --to (or --series)")
    src, dst = MapScale(args.from_scale), MapScale(args.to_scale)
    if args.topfer is not None:
        return str(topfer_select_count(args.topfer, src, dst, args.constant))
    return str(sheets_per_derived(src, dst))


# -- textmap ----------------------------------------------------------------

def cmd_textmap(args) -> str:
    text = _read(args.input)
    if args.what == "tokens":
        return "\n".join(textmap.tokenize(text))
    if args.what == "profile":
        p = textmap.structure_profile(text, args.section_marker)
        return _table(args, ["sections", "paragraphs", "sentences", "words"],
                      [(p.sections, p.paragraphs, p.sentences, p.words)])
    ft = textmap.word_frequencies(textmap.tokenize(text))
    if args.what == "freq":
        if args.pretty:
            return _pretty(["rank", "token", "frequency"], [(r.rank, r.token, r.frequency) for r in ft])
        return serialization.write_frequency_csv(ft)
    levels = textmap.word_levels(ft, args.head_limit, args.max_levels, args.base_size, args.growth)
    return _csv(["token", "frequency", "level", "size"], [(w.token, w.frequency, w.level, fmt(w.size)) for w in levels])


# -- render -----------------------------------------------------------------

def cmd_render(args) -> str:
    if args.words is not None:
        ft = textmap.word_frequencies(textmap.tokenize(_read(args.words)))
        words = textmap.word_levels(ft, args.head_limit, args.max_levels)
        top = max(w.level for w in words)
        style = RenderStyle.ramp(max(top, 4), width=args.width, height=args.height)
        return render_svg(words, style, seed=args.seed).rstrip("\n")
    if args.pattern:
        fs = _pattern(args).base
    elif args.n_zipf_cities is not None:
        fs = fractalgen.zipf_cities(args.n_zipf_cities, args.seed)
    else:
        fs = serialization.parse_features(_read(args.input))
    levels = None
    if args.classify == "htb":
        levels = htb.head_tail_breaks(fs.measures(), args.head_limit, args.max_levels).assignments
    elif args.classify == "jenks":
        levels = htb.jenks_breaks(fs.measures(), args.k)[1]
    top = max(levels) if levels else 1
    style = RenderStyle.ramp(max(top, 4), width=args.width, height=args.height)
    return render_svg(fs, style, seed=args.seed, levels=levels).rstrip("\n")


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fractalmaps", description="Fractal patterns, head/tail breaks and map generalization.")
    parser.add_argument("-o", "--output", help="write to this file instead of standard output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="generate a pattern as a feature document (fib: CSV)")
    g.add_argument("what", choices=("koch", "koch-random", "carpet", "triangle", "fib", "golden-rect", "zipf-cities"))
    g.add_argument("--iters", type=int, default=3)
    g.add_argument("--depth", type=int, default=3)
    g.add_argument("--shape", choices=("right", "equilateral"), default="right")
    g.add_argument("--apex-height", type=float, default=fractalgen.KOCH_HEIGHT)
    g.add_argument("--level", type=int, help="construction level to emit (default: deepest)")
    g.add_argument("--n", type=int, default=11)
    g.add_argument("--ratios", action="store_true", help="fib: emit successive ratios instead of terms")
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--pretty", action="store_true")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("classify", help="head/tail breaks or Jenks natural breaks of a value series")
    c.add_argument("method", choices=("htb", "jenks"))
    c.add_argument("--input", help="series CSV (default: standard input)")
    c.add_argument("--n-zipf", type=int, help="use the exact Zipf series 1, 1/2, ..., 1/N")
    c.add_argument("--head-limit", type=float, default=0.40)
    c.add_argument("--max-levels", type=int)
    c.add_argument("--min-split-size", type=int, default=2)
    c.add_argument("--k", type=int, default=4, help="jenks: number of classes")
    c.add_argument("--table", default="levels",
                   choices=("levels", "assignments", "ht-index", "rank-size", "nested", "series"))
    c.add_argument("--pretty", action="store_true")
    c.set_defaults(func=cmd_classify)

    d = sub.add_parser("dimension", help="divider or box-counting dimension, power-law fits, lengths")
    d.add_argument("method", choices=("richardson", "boxcount", "fit", "length"))
    d.add_argument("--input", help="feature document (fit: x,y CSV)")
    _add_pattern_flags(d)
    d.add_argument("--sizes", type=_sizes, help="comma-separated yardsticks/box sizes, fractions allowed")
    d.add_argument("--fit", action="store_true", help="richardson: always fit, even for one yardstick")
    d.add_argument("--format", choices=("json", "csv"), default="json")
    d.set_defaults(func=cmd_dimension)

    z = sub.add_parser("generalize", help="generalize a pattern or feature set to a smaller map scale")
    z.add_argument("method", choices=("hier", "htb", "topfer"))
    _add_pattern_flags(z, ("koch", "carpet", "triangle"))
    z.add_argument("--input", help="feature document (default: standard input)")
    z.add_argument("--n-zipf-cities", type=int)
    z.add_argument("--from", dest="from_scale", type=int, default=50000, help="source scale denominator")
    z.add_argument("--to", dest="to_scale", type=int, default=150000, help="target scale denominator")
    z.add_argument("--levels-to-drop", type=int, default=1)
    z.add_argument("--head-limit", type=float, default=0.40)
    z.add_argument("--max-levels", type=int)
    z.add_argument("--scale-factor", type=float, default=1.0)
    z.add_argument("--constant", type=float, default=1.0)
    z.add_argument("--summary", action="store_true", help="print counts instead of the retained features")
    z.set_defaults(func=cmd_generalize)

    s = sub.add_parser("sheets", help="series-map sheet counts, scaling ratios and radical-law counts")
    s.add_argument("--from", dest="from_scale", type=int)
    s.add_argument("--to", dest="to_scale", type=int)
    s.add_argument("--series", help="comma-separated denominators; prints their scaling ratio")
    s.add_argument("--topfer", type=int, metavar="N", help="print how many of N objects survive the reduction")
    s.add_argument("--constant", type=float, default=1.0)
    s.set_defaults(func=cmd_sheets)

    t = sub.add_parser("textmap", help="tokens, word frequencies, word levels and structure counts")
    t.add_argument("what", choices=("tokens", "freq", "levels", "profile"))
    t.add_argument("--input", help="text file (default: standard input)")
    t.add_argument("--head-limit", type=float, default=0.40)
    t.add_argument("--max-levels", type=int)
    t.add_argument("--base-size", type=float, default=10.0)
    t.add_argument("--growth", type=float, default=1.8)
    t.add_argument("--section-marker", help="regex counted (multiline) as section starts")
    t.add_argument("--pretty", action="store_true")
    t.set_defaults(func=cmd_textmap)

    r = sub.add_parser("render", help="render features, classified cities or a word cloud to SVG")
    r.add_argument("--input", help="feature document (default: standard input)")
    _add_pattern_flags(r)
    r.add_argument("--n-zipf-cities", type=int)
    r.add_argument("--words", metavar="TEXTFILE", help="render a word cloud of this text")
    r.add_argument("--classify", choices=("none", "htb", "jenks"), default="none")
    r.add_argument("--k", type=int, default=4)
    r.add_argument("--head-limit", type=float, default=0.40)
    r.add_argument("--max-levels", type=int)
    r.add_argument("--width", type=float, default=600.0)
    r.add_argument("--height", type=float, default=600.0)
    r.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out = args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        (exc.parser or parser).print_help(sys.stderr)
        return 1
    except (FractalMapsError, OSError) as exc:
        print(f"fractalmaps: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = out + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
