import math

import pytest

from fractalmaps.core import polyline_length
from fractalmaps.errors import InvalidApexHeightError, IterationCapError, OverflowGuardError
from fractalmaps.fractalgen import (
    KOCH_HEIGHT,
    fibonacci,
    golden_ratios,
    golden_rectangles,
    koch_curve,
    koch_random,
    koch_similarity_dimension,
    sierpinski_carpet,
    sierpinski_triangle,
    zipf_cities,
)

from oracles import koch_complex, similarity_dimension


def _verts(h, k=None):
    fs = h.levels[h.iterations if k is None else k]
    return fs[0].geometry.vertices


def test_koch_initiator():
    assert _verts(koch_curve(0)) == ((0, 0), (1, 0))


def test_koch_first_iteration_apex():
    v = _verts(koch_curve(1))
    assert len(v) == 5
    assert v[2] == pytest.approx((0.5, math.sqrt(3) / 6))
    for a, b in zip(v, v[1:]):
        assert math.dist(a, b) == pytest.approx(1 / 3, rel=1e-12)


def test_koch_levels_segment_counts():
    h = koch_curve(3)
    assert [fs.element_count() for fs in h.levels] == [1, 4, 16, 64]


@pytest.mark.parametrize("n", range(0, 7))
def test_koch_matches_complex_oracle(n):
    got = _verts(koch_curve(n))
    want = koch_complex(n)
    assert len(got) == len(want)
    assert max(math.dist(a, b) for a, b in zip(got, want)) < 1e-12


@pytest.mark.parametrize("n", range(1, 8))
def test_koch_nesting_and_length(n):
    prev, cur = _verts(koch_curve(n - 1)), _verts(koch_curve(n))
    assert all(cur[4 * i] == p for i, p in enumerate(prev))
    assert polyline_length(koch_curve(n).base[0].geometry) == pytest.approx((4 / 3) ** n, rel=1e-12)


def test_koch_caps():
    with pytest.raises(IterationCapError):
        koch_curve(13)
    with pytest.raises(IterationCapError):
        koch_curve(-1)


def test_koch_random_determinism_and_limits():
    a = koch_random(5, 0.2, seed=11)
    b = koch_random(5, 0.2, seed=11)
    c = koch_random(5, 0.2, seed=12)
    assert _verts(a) == _verts(b)
    assert _verts(a) != _verts(c)
    assert _verts(koch_random(0, seed=3)) == ((0, 0), (1, 0))
    with pytest.raises(InvalidApexHeightError):
        koch_random(3, 0.3)
    with pytest.raises(InvalidApexHeightError):
        koch_random(3, 0.0)


def test_koch_random_all_left_equals_koch():
    for n in range(6):
        assert _verts(koch_random(n, KOCH_HEIGHT, seed=5, left_probability=1.0)) == _verts(koch_curve(n))


def test_koch_random_right_side_is_mirror():
    v = _verts(koch_random(3, seed=1, left_probability=0.0))
    want = koch_complex(3, left=False)
    assert max(math.dist(a, b) for a, b in zip(v, want)) < 1e-12


@pytest.mark.parametrize("h", [KOCH_HEIGHT, 0.2, 0.12, 0.05])
def test_similarity_dimension_against_bisection(h):
    assert koch_similarity_dimension(h) == pytest.approx(similarity_dimension(h), abs=1e-10)


def test_similarity_dimension_regular_koch():
    assert koch_similarity_dimension(KOCH_HEIGHT) == pytest.approx(math.log(4) / math.log(3), abs=1e-12)


def _cell_sides(fs):
    out = set()
    for f in fs:
        xs = [p.x for p in f.geometry.vertices]
        out.add(round(max(xs) - min(xs), 15))
    return out


def test_carpet_levels():
    h = sierpinski_carpet(3)
    assert [len(fs) for fs in h.levels] == [1, 8, 64, 512]
    for k, fs in enumerate(h.levels):
        assert _cell_sides(fs) == {round(3.0 ** -k, 15)}
    assert str(h.scaling_ratio) == "1/3"
    # the centre ninth is empty at level 1
    centres = {(round(f.geometry.vertices[0].x * 3), round(f.geometry.vertices[0].y * 3)) for f in h.levels[1]}
    assert (1, 1) not in centres and len(centres) == 8
    with pytest.raises(IterationCapError):
        sierpinski_carpet(9)


@pytest.mark.parametrize("shape", ["right", "equilateral"])
def test_triangle_levels(shape):
    h = sierpinski_triangle(3, shape)
    assert [len(fs) for fs in h.levels] == [1, 3, 9, 27]
    for k, fs in enumerate(h.levels):
        assert _cell_sides(fs) == {round(2.0 ** -k, 15)}
    assert str(h.scaling_ratio) == "1/2"


def test_equilateral_triangle_geometry():
    apex = sierpinski_triangle(0, "equilateral").levels[0][0].geometry.vertices[2]
    assert apex == pytest.approx((0.5, math.sqrt(3) / 2))
    with pytest.raises(IterationCapError):
        sierpinski_triangle(13)


def test_fibonacci():
    assert fibonacci(11) == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89]
    assert fibonacci(1) == [1]
    assert fibonacci(2) == [1, 1]
    assert float(fibonacci(1476)[-1]) < math.inf
    with pytest.raises(OverflowGuardError):
        fibonacci(1477)


def test_golden_ratios():
    r = golden_ratios(10)
    assert [round(x, 3) for x in r] == [1, 2, 1.5, 1.667, 1.6, 1.625, 1.615, 1.619, 1.618]
    assert golden_ratios(2) == [1.0]
    assert abs(golden_ratios(30)[-1] - (1 + math.sqrt(5)) / 2) < 1e-6


def _bbox(f):
    xs = [p.x for p in f.geometry.vertices]
    ys = [p.y for p in f.geometry.vertices]
    return min(xs), min(ys), max(xs), max(ys)


@pytest.mark.parametrize("n,w,h", [(1, 1, 1), (2, 2, 1), (6, 13, 8)])
def test_golden_rectangles(n, w, h):
    fs = golden_rectangles(n)
    assert len(fs) == n + 1
    x0, y0, x1, y1 = _bbox(fs[-1])
    assert (x1 - x0, y1 - y0) == (w, h)
    squares = fs.features[:-1]
    assert [f.measure for f in squares] == fibonacci(n)
    assert sum(f.measure ** 2 for f in squares) == w * h  # tiles without gaps
    for f in squares:
        a0, b0, a1, b1 = _bbox(f)
        assert x0 <= a0 and a1 <= x1 and y0 <= b0 and b1 <= y1


def test_golden_rectangle_aspect():
    x0, y0, x1, y1 = _bbox(golden_rectangles(12)[-1])
    w, h = x1 - x0, y1 - y0
    assert abs(max(w, h) / min(w, h) - 1.618) < 1e-3


def test_zipf_cities():
    cities = zipf_cities(3, seed=9)
    assert cities.measures() == [1, 1 / 2, 1 / 3]
    again = zipf_cities(3, seed=9)
    assert [f.geometry for f in cities] == [f.geometry for f in again]
    big = zipf_cities(1023)
    assert all(0 <= f.geometry.x <= 1 and 0 <= f.geometry.y <= 1 for f in big)
