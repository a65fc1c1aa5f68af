from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noncross.exactnum import Cmp, compare_radical_sums
from noncross.geometry import PointSet, Structure, crossing_pairs, length_terms
from noncross.maxsolvers import SolveOptions, enumerate_optima, max_cycle
from noncross.structprops import (
    diametric_counterexample,
    diametric_pairs,
    find_flippable_pairs,
    flip,
    improve_by_flips,
    min_edge_rank,
    no_flip_polygons,
    random_simple_polygon,
    rank_bound,
)

SQUARE = PointSet.from_xy([(0, 0), (1, 0), (1, 1), (0, 1)], labels=["1", "2", "3", "4"])
HULL = Structure.cycle(["1", "2", "3", "4"], canonical=False)


def test_square_has_two_flippable_pairs():
    pairs = find_flippable_pairs(HULL, SQUARE)
    assert len(pairs) == 2
    assert all(p.gain.lo > 0 for p in pairs)


def test_bowtie_has_none():
    bowtie = Structure.cycle(["1", "3", "2", "4"], canonical=False)
    assert find_flippable_pairs(bowtie, SQUARE) == []


def test_flip_square_gives_bowtie():
    pair = find_flippable_pairs(HULL, SQUARE)[0]
    out = flip(HULL, pair, SQUARE)
    assert len(crossing_pairs(out, SQUARE)) == 1
    # 2 + 2*sqrt2
    assert compare_radical_sums(length_terms(out, SQUARE), [(2, 1), (2, 2)]) is Cmp.EQUAL


def test_flip_rejects_adjacent_edges():
    from noncross.structprops import FlipPair
    from noncross.exactnum import Interval

    bad = FlipPair(("1", "2"), ("2", "3"), Interval(Fraction(0), Fraction(0), 8))
    with pytest.raises(ValueError):
        flip(HULL, bad)


def test_improve_by_flips_terminates():
    ps = PointSet.from_xy([(0, 0), (4, 0), (5, 2), (3, 5), (0, 4), (-1, 2)])
    start = Structure.cycle(ps.labels, canonical=False)
    end, flips = improve_by_flips(start, ps)
    assert flips >= 1
    assert find_flippable_pairs(end, ps) == []
    assert find_flippable_pairs(end.reversed(), ps) == []


def test_diametric_n4():
    ps, pair = diametric_counterexample(4)
    assert diametric_pairs(ps) == [pair]
    res = max_cycle(ps)
    assert res.best == Structure.cycle(["a", "b1", "c", "b2"])
    assert ("a", "c") not in {tuple(sorted(e)) for e in res.best.edges()}


def test_diametric_n6_every_optimum_omits_pair():
    ps, pair = diametric_counterexample(6)
    for s in enumerate_optima(ps, "cycle", 0):
        assert set(pair) not in [set(e) for e in s.edges()]


def test_min_edge_rank_examples():
    assert min_edge_rank(Structure.cycle(["1", "2", "3", "4"]), SQUARE) == (1, Fraction(13, 2))
    # a regular hexagon has no rational coordinates; in this near-regular one
    # the six sides (2 or sqrt5) are still the six smallest distances
    hexagon = PointSet.from_xy([(2, 0), (1, 2), (-1, 2), (-2, 0), (-1, -2), (1, -2)],
                               labels=list("abcdef"))
    rank, bound = min_edge_rank(Structure.cycle(list("abcdef")), hexagon)
    assert rank == 1 and bound == Fraction(57, 4)


def test_min_edge_rank_rejects_crossing():
    with pytest.raises(ValueError):
        min_edge_rank(Structure.cycle(["1", "3", "2", "4"]), SQUARE)


def test_rank_bound():
    assert rank_bound(4) == Fraction(13, 2)
    assert rank_bound(6) == Fraction(57, 4)


def test_random_polygon_triangle():
    ps, poly = random_simple_polygon(3, seed=1)
    assert len(ps) == 3 and poly.kind.value == "cycle"


def test_random_polygon_deterministic():
    assert random_simple_polygon(9, seed=42) == random_simple_polygon(9, seed=42)


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 14), st.integers(0, 10**6))
def test_random_polygons_are_simple_and_within_bound(n, seed):
    ps, poly = random_simple_polygon(n, seed)
    assert crossing_pairs(poly, ps) == []
    rank, bound = min_edge_rank(poly, ps)
    assert rank <= bound


def test_no_flip_fixtures():
    polys = no_flip_polygons()
    assert [len(ps) for ps, _ in polys] == [6, 8]
    for ps, poly in polys:
        assert crossing_pairs(poly, ps) == []
        assert find_flippable_pairs(poly, ps) == []
        assert find_flippable_pairs(poly.reversed(), ps) == []


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 60), st.integers(0, 60)), min_size=5, max_size=7, unique=True))
def test_optimal_cycles_have_no_flips(xy):
    ps = PointSet.from_xy(xy)
    for s in enumerate_optima(ps, "cycle", 0, SolveOptions(method="brute")):
        directed = Structure.cycle(s.order, canonical=False)
        assert find_flippable_pairs(directed, ps) == []
        assert find_flippable_pairs(directed.reversed(), ps) == []
