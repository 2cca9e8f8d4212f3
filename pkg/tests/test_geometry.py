import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orbitstrength.geometry import BoxNeighborhood, Interval, IntervalSet, format_number

O = Interval.open
C = Interval.closed


def iset(*parts):
    return IntervalSet(parts)


def test_measure_examples():
    assert iset().measure() == 0
    assert iset(O(-0.5, 0.5)).measure() == 1
    assert iset(O(0, 1), C(2, 5)).measure() == 4
    assert iset(Interval(-math.inf, 0, True, True)).measure() == math.inf


def test_openness_does_not_change_measure():
    assert iset(O(0, 1)).measure() == iset(C(0, 1)).measure()
    assert iset(C(3, 3)).measure() == 0


def test_union_examples():
    assert iset(O(0, 1)) | iset(O(1, 2)) == iset(O(0, 1), O(1, 2))
    assert len(iset(O(0, 1)) | iset(O(1, 2))) == 2
    assert iset(Interval(0, 1, True, False)) | iset(O(1, 2)) == iset(O(0, 2))
    s = iset(O(0, 1), C(2, 5))
    assert s | IntervalSet.empty() == s


def test_intersect_examples():
    assert iset(O(0, 2)) & iset(O(1, 3)) == iset(O(1, 2))
    assert (iset(O(0, 1)) & iset(O(2, 3))).is_empty
    s = iset(O(0, 1), C(2, 5))
    assert s & s == s


def test_subtract_translates_examples():
    assert iset(O(0, 10)).subtract_translates([5], 1) == iset(O(0, 4), O(6, 10))
    s = iset(O(0, 10))
    assert s.subtract_translates([], 3) == s
    # [-2,2] and [1,5] cover (0,3)
    assert iset(O(0, 3)).subtract_translates([0, 3], 2).is_empty


def test_translate_examples():
    assert iset(O(0, 1)).translate(3) == iset(O(3, 4))
    assert IntervalSet.empty().translate(7).is_empty
    assert iset(Interval(-math.inf, 0, True, True)).translate(1) == iset(Interval(-math.inf, 1, True, True))


def test_infinite_endpoints_are_open():
    iv = Interval(-math.inf, 2, False, False)
    assert iv.lo_open and not iv.hi_open


def test_degenerate_and_empty_intervals():
    assert not C(1, 1).is_empty
    assert Interval(1, 1, True, False).is_empty
    assert iset(Interval(2, 1)).is_empty
    assert iset(C(1, 1)).contains(1)


def test_complement_and_difference():
    s = iset(C(0, 1))
    comp = s.complement()
    assert comp == iset(Interval(-math.inf, 0, True, True), Interval(1, math.inf, True, True))
    assert iset(C(0, 2)) - iset(O(0, 1)) == iset(C(0, 0), C(1, 2))


def test_text_round_trip():
    s = iset(O(-0.5, 0.5), Interval(2, 5, False, True), Interval(7, math.inf, True, True))
    assert str(s) == "(-0.5,0.5),[2,5),(7,inf)"
    assert IntervalSet.parse(str(s)) == s
    assert IntervalSet.parse("") == IntervalSet.empty()
    assert IntervalSet.parse("{}") == IntervalSet.empty()
    with pytest.raises(ValueError):
        IntervalSet.parse("(0,1) junk")


def test_format_number():
    assert format_number(2.0) == "2"
    assert format_number(0.1) == "0.1"
    assert format_number(-math.inf) == "-inf"


# dyadic endpoints keep every sum and difference exact
dyadic = st.integers(-64, 64).map(lambda v: v / 8)


@st.composite
def intervals(draw):
    a, b = draw(dyadic), draw(dyadic)
    return Interval(min(a, b), max(a, b), draw(st.booleans()), draw(st.booleans()))


interval_sets = st.lists(intervals(), max_size=6).map(IntervalSet)


@given(interval_sets)
def test_normalization_idempotent(s):
    assert s.normalize() == s
    parts = s.parts
    for a, b in zip(parts, parts[1:]):
        assert a.hi <= b.lo
        assert not (a.hi == b.lo and not (a.hi_open and b.lo_open))


@given(interval_sets, dyadic)
def test_translation_invariance(s, t):
    assert s.translate(t).measure() == s.measure()


@given(interval_sets, interval_sets)
def test_inclusion_exclusion(a, b):
    assert (a | b).measure() + (a & b).measure() == a.measure() + b.measure()


@given(interval_sets, interval_sets)
def test_set_algebra_pointwise(a, b):
    probes = np.arange(-9, 9.01, 1 / 16)
    u, i, d = a | b, a & b, a - b
    for t in probes:
        assert u.contains(t) == (a.contains(t) or b.contains(t))
        assert i.contains(t) == (a.contains(t) and b.contains(t))
        assert d.contains(t) == (a.contains(t) and not b.contains(t))


@given(interval_sets, st.lists(dyadic, max_size=4), st.integers(0, 16).map(lambda v: v / 8))
def test_subtract_translates_never_increases(s, centers, r):
    out = s.subtract_translates(centers, r)
    assert out.measure() <= s.measure()
    assert out.issubset(s)
    for c in centers:
        assert not any(out.contains(c + d) for d in (-r, 0.0, r))


@given(interval_sets)
def test_parse_round_trip(s):
    assert IntervalSet.parse(str(s)) == s


def test_box_membership_and_faces():
    V = BoxNeighborhood((0, -0.5, -0.5), (1, 0.5, 0.5), (False, True, True), (True, True, True))
    assert V.contains((0, 0, 0))
    assert not V.contains((1, 0, 0))
    assert not V.contains((0.5, 0.5, 0))
    assert not V.interior_contains((0, 0, 0))
    pts = np.array([[0, 0, 0], [1, 0, 0], [0.5, 0.49, -0.49]])
    assert V.contains_points(pts).tolist() == [True, False, True]


def test_box_subset_and_scaling():
    V = BoxNeighborhood((0, -0.5, -0.5), (1, 0.5, 0.5), (False, True, True), (True, True, True))
    V1 = V.scaled_about((0, 0, 0), 0.5)
    assert V1.closure().issubset(V)
    assert not V.closure().issubset(V)
    with pytest.raises(ValueError):
        BoxNeighborhood((0, 0), (0, 1))
