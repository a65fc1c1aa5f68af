from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noncross.geometry import (
    Orientation,
    Point,
    PointSet,
    Structure,
    convex_position_same_orientation,
    crossing_pairs,
    is_noncrossing,
    is_y_monotone,
    orientation,
    segments_cross,
    structure_length,
)


def P(x, y, label="_"):
    return Point(label, Fraction(x), Fraction(y))


SQUARE = PointSet.from_xy([(0, 0), (1, 0), (1, 1), (0, 1)], labels=["1", "2", "3", "4"])


def test_orientation_examples():
    assert orientation(P(0, 0), P(1, 0), P(0, 1)) is Orientation.COUNTERCLOCKWISE
    assert orientation(P(0, 0), P(1, 1), P(2, 2)) is Orientation.COLLINEAR
    assert orientation(P(0, 0), P(1, 0), P(1, -1)) is Orientation.CLOCKWISE


def test_segments_cross_examples():
    assert segments_cross((P(0, 0), P(1, 1)), (P(1, 0), P(0, 1)))
    assert not segments_cross((P(0, 0), P(1, 0)), (P(1, 0), P(1, 1)))
    # collinear overlap counts
    assert segments_cross((P(0, 0), P(3, 0)), (P(1, 0), P(2, 0)))
    # touching end to end on a line does not
    assert not segments_cross((P(0, 0), P(1, 0)), (P(1, 0), P(2, 0)))


def test_bowtie_has_one_crossing():
    bowtie = Structure.cycle(["1", "3", "2", "4"])
    assert len(crossing_pairs(bowtie, SQUARE)) == 1
    assert is_noncrossing(Structure.cycle(["1", "2", "3", "4"]), SQUARE)


def test_y_monotone():
    ps = PointSet.from_xy([(0, 3), (1, 2), (2, 1)], labels=["a", "b", "c"])
    assert is_y_monotone(Structure.path(["a", "b", "c"]), ps)
    assert not is_y_monotone(Structure.path(["c", "a", "b"]), ps)


def test_structure_lengths():
    assert structure_length(Structure.cycle(["1", "2", "3", "4"]), SQUARE).contains(4)
    ps = PointSet.from_xy([(0, 0), (3, 4)], labels=["a", "b"])
    L = structure_length(Structure.path(["a", "b"]), ps)
    assert L.lo == L.hi == 5
    line = PointSet.from_xy([(i, 0) for i in (1, 2, 3, 4)], labels=["1", "2", "3", "4"])
    assert structure_length(Structure.cycle(["1", "3", "2", "4"]), line).contains(8)


def test_convex_position_examples():
    assert convex_position_same_orientation((P(0, 0), P(1, 0)), (P(1, 1), P(0, 1)))
    assert not convex_position_same_orientation((P(0, 0), P(1, 0)), (P(0, 1), P(1, 1)))
    assert not convex_position_same_orientation(
        (P(0, 0), P(4, 0)), (P(1, Fraction(1, 10)), P(2, Fraction(1, 10))))


def test_coincident_points_rejected():
    with pytest.raises(ValueError):
        PointSet.from_xy([(0, 0), (0, 0)])


def test_canonical_structures():
    assert Structure.path(["a", "b", "c"]) == Structure.path(["c", "b", "a"])
    assert Structure.cycle(["a", "b", "c", "d"]) == Structure.cycle(["c", "b", "a", "d"])
    assert Structure.matching([("b", "a"), ("d", "c")]) == Structure.matching([("c", "d"), ("a", "b")])


def test_pointset_json_roundtrip():
    ps = PointSet.from_xy([(Fraction(1, 3), Fraction(-1, 2**90)), (2, 5)], labels=["u", "v"])
    assert PointSet.from_json(ps.to_json()) == ps


coord = st.fractions(min_value=-20, max_value=20, max_denominator=8)
pt = st.builds(lambda x, y: P(x, y), coord, coord)


@settings(max_examples=300, deadline=None)
@given(pt, pt, pt)
def test_orientation_antisymmetric(a, b, c):
    assert orientation(a, b, c) == -orientation(b, a, c)


@settings(max_examples=300, deadline=None)
@given(pt, pt, pt, pt)
def test_segments_cross_symmetric(a, b, c, d):
    if a.xy == b.xy or c.xy == d.xy:
        return
    s1, s2 = (a, b), (c, d)
    v = segments_cross(s1, s2)
    assert v == segments_cross(s2, s1) == segments_cross((b, a), (d, c))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(-50, 50), st.integers(-50, 50)), min_size=3, max_size=7, unique=True))
def test_length_intervals_nested(xy):
    ps = PointSet.from_xy(xy)
    s = Structure.cycle(ps.labels)
    lo, hi = structure_length(s, ps, 64), structure_length(s, ps, 256)
    assert lo.lo <= hi.lo and hi.hi <= lo.hi
