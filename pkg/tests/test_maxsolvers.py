import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noncross import constructions as C
from noncross import kernels
from noncross.exactnum import Cmp, compare_radical_sums
from noncross.geometry import PointSet, Structure, length_terms
from noncross.line1d import (
    all_structures,
    is_longest_path_1d,
    line_from_values,
    longest_cycle_length_1d,
    longest_path_length_1d,
)
from noncross.maxsolvers import (
    CapacityError,
    SolveOptions,
    Uniqueness,
    enumerate_optima,
    max_cycle,
    max_matching,
    max_path,
    solve,
)

BRUTE = SolveOptions(method="brute")
DP = SolveOptions(method="dp")


def line_points(vals):
    ls = line_from_values(vals)
    return ls, ls.to_pointset()


def test_collinear_path_co_optima_are_characterized():
    ls, ps = line_points([1, 2, 3, 4])
    res = max_path(ps, BRUTE)
    assert res.best_length.contains(7)
    assert res.unique is Uniqueness.PROVEN
    conforming = {s for _, s in all_structures(ls, "path") if is_longest_path_1d(s, ls)}
    assert set(enumerate_optima(ps, "path", 0)) == conforming


def test_two_points_unique():
    ps = PointSet.from_xy([(0, 0), (1, 0)])
    res = max_path(ps, BRUTE)
    assert res.unique is Uniqueness.PROVEN
    assert res.best == Structure.path(["q0", "q1"])


def test_collinear_cycle():
    _, ps = line_points([1, 2, 3, 4])
    res = max_cycle(ps, BRUTE)
    assert res.best_length.contains(8)
    assert res.best == Structure.cycle(["1", "3", "2", "4"])
    assert res.unique is Uniqueness.PROVEN


def test_triangle():
    ps = PointSet.from_xy([(0, 0), (3, 0), (0, 4)])
    res = max_cycle(ps)
    assert res.unique is Uniqueness.PROVEN
    assert res.best_length.contains(12)
    assert enumerate_optima(ps, "cycle", 0) == [res.best]


def test_matching_examples():
    assert max_matching(PointSet.from_xy([(-1, 0), (1, 0)])).unique is Uniqueness.PROVEN
    _, ps = line_points([-2, -1, 1, 2])
    res = max_matching(ps, BRUTE)
    assert res.unique is Uniqueness.REFUTED
    want = {Structure.matching([("-2", "1"), ("-1", "2")]), Structure.matching([("-2", "2"), ("-1", "1")])}
    assert set(res.co_optimal) == want
    assert set(enumerate_optima(ps, "matching", 0)) == want


def test_constructed_path_k3():
    ps, _ = C.construct_path_even(3)
    res = max_path(ps, BRUTE)
    assert res.unique is Uniqueness.PROVEN
    assert res.best == Structure.path(["p1", "p-2", "p2", "p-3", "p3", "p-1"])
    assert res.best_length.lo > res.second_best_length.hi


def test_constructed_cycle_n6():
    ps, _ = C.construct_cycle_even(6)
    res = max_cycle(ps, BRUTE)
    assert res.unique is Uniqueness.PROVEN
    assert res.best == Structure.cycle(["p1", "p-1", "p2", "p-2", "p'2", "p'-1"])


def test_constructed_matching_k3():
    ps, _ = C.construct_matching(3)
    res = max_matching(ps, BRUTE)
    assert res.unique is Uniqueness.PROVEN
    assert res.best == Structure.matching([("p-1", "p1"), ("p-2", "p2"), ("p-3", "p3")])


def test_flat_path_set_optima_all_conform():
    ls = line_from_values([-3, -2, -1, 1, 2, 3])
    ps = ls.to_pointset()
    opts = enumerate_optima(ps, "path", 0)
    assert opts and all(is_longest_path_1d(s, ls) for s in opts)


def test_slack_widens_window():
    _, ps = line_points([1, 2, 3, 4])
    # lengths range from 3 (1-2-3-4) to 7
    assert len(enumerate_optima(ps, "path", 3)) == 11
    assert len(enumerate_optima(ps, "path", 4)) == 12


def test_capacity_errors():
    ps = PointSet.from_xy([(i, i * i) for i in range(25)])
    with pytest.raises(CapacityError):
        max_path(ps, DP)
    with pytest.raises(CapacityError):
        max_path(PointSet.from_xy([(i, i * i) for i in range(11)]), BRUTE)


def test_gap_soundness():
    rng = random.Random(11)
    for _ in range(10):
        ps = PointSet.from_xy({(rng.randrange(50), rng.randrange(50)) for _ in range(7)})
        res = max_cycle(ps, BRUTE)
        if res.proven:
            assert enumerate_optima(ps, "cycle", 0) == [res.best]


def test_result_json_shape():
    ps, _ = C.construct_matching(2)
    d = max_matching(ps).to_json()
    assert d["unique"] == "proven" and d["kind"] == "matching"
    assert set(d["best_length"]) >= {"approx", "error_bound", "lo", "hi"}


@pytest.mark.skipif(kernels.BACKEND != "compiled", reason="compiled core not built")
@pytest.mark.parametrize("kind", ["path", "cycle", "matching"])
def test_backends_agree(kind):
    rng = random.Random(3)
    for _ in range(5):
        n = 8
        ps = PointSet.from_xy({(rng.randrange(1000), rng.randrange(1000)) for _ in range(n)})
        if len(ps) % 2 and kind == "matching":
            continue
        for method in ("brute", "dp"):
            a = solve(ps, kind, SolveOptions(method=method, backend="compiled"))
            b = solve(ps, kind, SolveOptions(method=method, backend="python"))
            assert a.best == b.best and a.unique == b.unique


pts = st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30)), min_size=4, max_size=8, unique=True)


@settings(max_examples=40, deadline=None)
@given(pts, st.sampled_from(["path", "cycle", "matching"]))
def test_dp_matches_brute_force(xy, kind):
    if kind == "matching" and len(xy) % 2:
        xy = xy[:-1]
    ps = PointSet.from_xy(xy)
    a, b = solve(ps, kind, BRUTE), solve(ps, kind, DP)
    assert compare_radical_sums(length_terms(a.best, ps), length_terms(b.best, ps)) is Cmp.EQUAL
    assert a.unique == b.unique
    if a.proven:
        assert a.best == b.best


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=4, max_size=8, unique=True))
def test_collinear_agrees_with_closed_forms(vals):
    ls = line_from_values(vals)
    ps = ls.to_pointset()
    if len(ls) % 2 == 0:
        assert max_path(ps).best_length.contains(longest_path_length_1d(ls))
    assert max_cycle(ps).best_length.contains(longest_cycle_length_1d(ls))
