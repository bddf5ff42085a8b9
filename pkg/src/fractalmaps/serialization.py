"""Feature JSON documents and CSV tables.

Floats are written with 17 significant digits, which round-trips every
IEEE double exactly.

Feature document layout::

    {"version": "1.0",
     "features": [
       {"geometry_kind": "point" | "polyline" | "polygon",
        "coordinates": [[x, y], ...],
        "measure": <positive number>,
        "attributes": {"key": "value", ...}}]}

A point has one coordinate pair, a polyline at least two, and a polygon is a
closed ring (first pair repeated last, at least four pairs).  Mapping to
GeoJSON: ``point`` -> Point (single position), ``polyline`` -> LineString,
``polygon`` -> Polygon with one exterior ring; ``measure`` and
``attributes`` become ``properties``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Sequence

from .core import Feature, FeatureSet, Point, Polyline
from .dimension import MeasurementRow, MeasurementTable
from .errors import FractalMapsError, NonPositiveValueError, ParseError, UnsupportedVersionError
from .textmap import FrequencyRow, FrequencyTable

FORMAT_VERSION = "1.0"
_KINDS = ("point", "polyline", "polygon")


def fmt(x: float) -> str:
    return "%.17g" % x


def _pair(p) -> str:
    return f"[{fmt(p[0])}, {fmt(p[1])}]"


def _feature_json(f: Feature) -> str:
    g = f.geometry
    coords = [g] if isinstance(g, Point) else g.vertices
    attrs = json.dumps(dict(f.attributes), ensure_ascii=False, sort_keys=True)
    return (
        f'{{"geometry_kind": "{f.kind}", "coordinates": [{", ".join(_pair(p) for p in coords)}], '
        f'"measure": {fmt(f.measure)}, "attributes": {attrs}}}'
    )


def serialize_features(fs: FeatureSet) -> str:
    """One feature per line, so diffs of golden files stay readable."""
    body = ",\n  ".join(_feature_json(f) for f in fs)
    if body:
        body = f"\n  {body}\n"
    return f'{{"version": "{FORMAT_VERSION}", "features": [{body}]}}\n'


def _number(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"expected a number, got {v!r}", path=path)
    x = float(v)
    if not math.isfinite(x):
        raise ParseError("non-finite number", path=path)
    return x


def _parse_feature(rec, path) -> Feature:
    if not isinstance(rec, dict):
        raise ParseError("feature must be an object", path=path)
    kind = rec.get("geometry_kind")
    if kind not in _KINDS:
        raise ParseError(f"geometry_kind must be one of {_KINDS}, got {kind!r}", path=f"{path}.geometry_kind")
    coords = rec.get("coordinates")
    if not isinstance(coords, list):
        raise ParseError("coordinates must be an array of pairs", path=f"{path}.coordinates")
    pts = []
    for i, pair in enumerate(coords):
        cpath = f"{path}.coordinates[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError("coordinate must be an [x, y] pair", path=cpath)
        pts.append(Point(_number(pair[0], cpath), _number(pair[1], cpath)))
    try:
        if kind == "point":
            if len(pts) != 1:
                raise ParseError("a point has exactly one coordinate pair", path=f"{path}.coordinates")
            geom = pts[0]
        else:
            geom = Polyline(tuple(pts))
            if (kind == "polygon") != geom.is_closed:
                raise ParseError(f"{kind} ring closure mismatch", path=f"{path}.coordinates")
    except ParseError:
        raise
    except FractalMapsError as exc:
        raise ParseError(str(exc), path=f"{path}.coordinates") from None
    measure = _number(rec.get("measure"), f"{path}.measure")
    if not measure > 0:
        raise ParseError(f"measure must be positive, got {measure!r}", path=f"{path}.measure")
    attrs = rec.get("attributes", {})
    if not isinstance(attrs, dict) or not all(isinstance(k, str) and isinstance(v, str) for k, v in attrs.items()):
        raise ParseError("attributes must map strings to strings", path=f"{path}.attributes")
    return Feature(geom, measure, attrs)


def parse_features(text: str) -> FeatureSet:
    try:
        # integer literals as floats so "-0" keeps its sign
        doc = json.loads(text, parse_int=float)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object", line=1, column=1)
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(f"unsupported document version {version!r}", path="version")
    feats = doc.get("features")
    if not isinstance(feats, list):
        raise ParseError("features must be an array", path="features")
    return FeatureSet(tuple(_parse_feature(rec, f"features[{i}]") for i, rec in enumerate(feats)))


def write_series_csv(values: Sequence[float]) -> str:
    return "\n".join(["value"] + [fmt(float(v)) for v in values])


def read_series_csv(text: str) -> list[float]:
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or (lineno == 1 and line.lower() == "value"):
            continue
        try:
            v = float(line)
        except ValueError:
            raise ParseError(f"not a number: {line!r}", line=lineno, column=1) from None
        if not (v > 0 and math.isfinite(v)):
            raise NonPositiveValueError(f"line {lineno}: value {line} must be positive and finite")
        values.append(v)
    return values


def write_measurement_csv(table: MeasurementTable) -> str:
    lines = ["yardstick,count,length"]
    lines += [f"{fmt(r.yardstick)},{fmt(r.count)},{fmt(r.length)}" for r in table.rows]
    return "\n".join(lines)


def read_measurement_csv(text: str) -> MeasurementTable:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or (lineno == 1 and line.startswith("yardstick")):
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ParseError("expected yardstick,count,length", line=lineno, column=1)
        try:
            rows.append(MeasurementRow(float(parts[0]), float(parts[1])))
        except ValueError:
            raise ParseError(f"not a number in {line!r}", line=lineno, column=1) from None
    return MeasurementTable(tuple(rows))


def write_frequency_csv(ft: FrequencyTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["token", "frequency", "rank"])
    for r in ft:
        w.writerow([r.token, r.frequency, r.rank])
    return buf.getvalue().rstrip("\n")


def read_frequency_csv(text: str) -> FrequencyTable:
    rows = []
    reader = csv.reader(io.StringIO(text))
    for lineno, rec in enumerate(reader, start=1):
        if not rec or (lineno == 1 and rec == ["token", "frequency", "rank"]):
            continue
        try:
            token, freq, rank = rec
            rows.append(FrequencyRow(token, int(freq), int(rank)))
        except ValueError:
            raise ParseError(f"bad frequency row {rec!r}", line=lineno, column=1) from None
    return FrequencyTable(tuple(rows))
