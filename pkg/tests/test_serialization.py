import json
import math

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from fractalmaps.core import Feature, FeatureSet, Point, Polyline
from fractalmaps.dimension import MeasurementRow, MeasurementTable
from fractalmaps.errors import NonPositiveValueError, ParseError, UnsupportedVersionError
from fractalmaps.fractalgen import golden_rectangles, koch_curve, sierpinski_carpet, zipf_cities
from fractalmaps.htb import zipf_series
from fractalmaps.serialization import (
    parse_features,
    read_frequency_csv,
    read_measurement_csv,
    read_series_csv,
    serialize_features,
    write_frequency_csv,
    write_measurement_csv,
    write_series_csv,
)
from fractalmaps.textmap import tokenize, word_frequencies


def test_empty_feature_set():
    text = serialize_features(FeatureSet(()))
    assert json.loads(text) == {"version": "1.0", "features": []}
    assert len(parse_features(text)) == 0


def test_koch_round_trip_bit_exact():
    fs = koch_curve(2).base
    text = serialize_features(fs)
    doc = json.loads(text)
    assert len(doc["features"]) == 1
    assert len(doc["features"][0]["coordinates"]) == 17
    back = parse_features(text)
    assert back == fs
    assert back[0].geometry.segment_count == 16
    assert serialize_features(back) == text


@pytest.mark.parametrize("fs", [zipf_cities(50, seed=8), sierpinski_carpet(2).base, golden_rectangles(7)])
def test_round_trip_mixed_kinds(fs):
    text = serialize_features(fs)
    assert parse_features(text) == fs
    assert serialize_features(parse_features(text)) == text


def test_attributes_round_trip_unicode():
    fs = FeatureSet((Feature(Point(0.1, 0.2), 3.0, {"name": "Zürich \"old\"", "rank": "1"}),))
    assert parse_features(serialize_features(fs)) == fs


def _doc(**overrides):
    rec = {"geometry_kind": "point", "coordinates": [[0, 0]], "measure": 1, "attributes": {}}
    rec.update(overrides)
    return json.dumps({"version": "1.0", "features": [rec]})


@pytest.mark.parametrize("overrides,path", [
    ({"measure": -2}, "features[0].measure"),
    ({"measure": 0}, "features[0].measure"),
    ({"measure": "1"}, "features[0].measure"),
    ({"geometry_kind": "circle"}, "features[0].geometry_kind"),
    ({"coordinates": [[0, 0], [1, 1]]}, "features[0].coordinates"),
    ({"coordinates": [[0]]}, "features[0].coordinates[0]"),
    ({"geometry_kind": "polyline", "coordinates": [[0, 0]]}, "features[0].coordinates"),
    ({"geometry_kind": "polygon", "coordinates": [[0, 0], [1, 0], [1, 1]]}, "features[0].coordinates"),
    ({"attributes": {"a": 1}}, "features[0].attributes"),
])
def test_schema_violations_name_the_path(overrides, path):
    with pytest.raises(ParseError) as info:
        parse_features(_doc(**overrides))
    assert info.value.path == path


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_features('{"version": "1.0",\n  "features": [,]}')
    assert (info.value.line, info.value.column) == (2, 16)


def test_unsupported_version():
    with pytest.raises(UnsupportedVersionError):
        parse_features('{"version": "2.0", "features": []}')
    with pytest.raises(ParseError):
        parse_features("[]")


def test_series_csv_examples():
    assert write_series_csv([1, 0.5]) == "value\n1\n0.5"
    assert read_series_csv("value\n1\n0.5") == [1.0, 0.5]
    assert read_series_csv("3\n4\n") == [3.0, 4.0]
    series = zipf_series(3)
    assert read_series_csv(write_series_csv(series)) == series
    with pytest.raises(ParseError) as info:
        read_series_csv("value\n1\nabc")
    assert info.value.line == 3
    with pytest.raises(NonPositiveValueError):
        read_series_csv("value\n-1")


def test_measurement_csv_round_trip():
    table = MeasurementTable((MeasurementRow(1 / 3, 4.0), MeasurementRow(1 / 9, 16.0)))
    text = write_measurement_csv(table)
    assert text.splitlines()[0] == "yardstick,count,length"
    assert read_measurement_csv(text) == table
    with pytest.raises(ParseError):
        read_measurement_csv("yardstick,count,length\n1,2")


def test_frequency_csv_round_trip():
    ft = word_frequencies(tokenize('Maps, maps and "quoted, words" here'))
    text = write_frequency_csv(ft)
    assert text.splitlines()[0] == "token,frequency,rank"
    assert read_frequency_csv(text) == ft
    with pytest.raises(ParseError):
        read_frequency_csv("token,frequency,rank\nmap,x,1")


finite = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e300, max_value=1e300)
positive = st.floats(min_value=5e-324, max_value=1e300, allow_infinity=False)


@settings(max_examples=100)
@given(st.lists(positive, max_size=30))
def test_series_round_trip_property(values):
    assert read_series_csv(write_series_csv(values)) == values


@st.composite
def features(draw):
    kind = draw(st.sampled_from(["point", "polyline", "polygon"]))
    measure = draw(positive)
    attrs = draw(st.dictionaries(st.text(max_size=5), st.text(max_size=5), max_size=3))
    if kind == "point":
        return Feature(Point(draw(finite), draw(finite)), measure, attrs)
    pts = draw(st.lists(st.tuples(finite, finite), min_size=3, max_size=5, unique=True))
    if kind == "polygon":
        pts = pts + [pts[0]]
    return Feature(Polyline(tuple(pts)), measure, attrs)


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.lists(features(), max_size=4))
def test_feature_round_trip_property(feats):
    fs = FeatureSet(tuple(feats))
    text = serialize_features(fs)
    assert parse_features(text) == fs
    assert serialize_features(parse_features(text)) == text


def test_seventeen_digits_are_needed():
    x = 0.1 + 0.2
    fs = FeatureSet((Feature(Point(x, math.pi), x),))
    assert parse_features(serialize_features(fs))[0].measure == x
