import json
from fractions import Fraction

import pytest

from noncross import constructions as C
from noncross.exactnum import Cmp, compare_radical_sums
from noncross.geometry import (
    Point,
    PointSet,
    Structure,
    crossing_pairs,
    is_noncrossing,
    is_y_monotone,
)
from noncross.line1d import line_from_values
from noncross.maxsolvers import SolveOptions, Uniqueness, max_cycle, max_matching, max_path

BRUTE = SolveOptions(method="brute")


def test_path_delta_k3_is_certified_lower_bound():
    ps, _ = C.construct_path_even(3)
    d = C.compute_delta_path(ps["p1"], [ps["p-2"], ps["p-3"]], 6)
    a, b = 4 + Fraction(1, 576), 9 + Fraction(1, 576)
    # true value: (sqrt(a) - 2 - sqrt(b) + 3) / 5
    assert compare_radical_sums([(1, a), (1, 1)], [(1, b), (5 * d, 1)]) is Cmp.GREATER
    assert compare_radical_sums([(1, a), (1, 1)], [(1, b), (5 * d * 64 / 63, 1)]) is Cmp.LESS
    assert Fraction(289, 10**7) < d < Fraction(290, 10**7)


def test_path_delta_zero_height_is_error():
    anchor = Point("a", 1, 0)
    with pytest.raises(C.ConstructionError):
        C.compute_delta_path(anchor, [Point("b", -2, 0), Point("c", -3, 0)], 6)


def test_path_even_k3():
    ps, cert = C.construct_path_even(3)
    assert len(ps) == 6
    assert ps["p1"].y == Fraction(1, 24)
    assert ps["p-1"].y == 0
    assert cert.claimed_optimum == Structure.path(["p1", "p-2", "p2", "p-3", "p3", "p-1"])
    assert len(cert.steps) == 4
    res = max_path(ps, BRUTE)
    assert res.unique is Uniqueness.PROVEN and res.best == cert.claimed_optimum
    assert is_noncrossing(res.best, ps) and is_y_monotone(res.best, ps)


def test_path_even_rejects_small_k():
    with pytest.raises(ValueError):
        C.construct_path_even(2)


def test_path_odd_k3():
    ps, cert = C.construct_path_odd(3)
    assert len(ps) == 5 and "p1" not in ps.labels
    assert cert.claimed_optimum == Structure.path(["p-2", "p2", "p-3", "p3", "p-1"])
    res = max_path(ps, BRUTE)
    assert res.unique is Uniqueness.PROVEN and res.best == cert.claimed_optimum


def test_cycle_even_n6():
    ps, cert = C.construct_cycle_even(6)
    assert sorted(ps.labels) == sorted(["p1", "p-1", "p2", "p-2", "p'-1", "p'2"])
    assert ps["p1"].y == Fraction(1, 32)
    assert cert.claimed_optimum == Structure.cycle(["p1", "p-1", "p2", "p-2", "p'2", "p'-1"])
    assert all(row["verdict"] == "greater" for row in cert.checks["exchange_inequality"])
    res = max_cycle(ps, BRUTE)
    assert res.unique is Uniqueness.PROVEN and res.best == cert.claimed_optimum
    assert is_noncrossing(res.best, ps)


def test_cycle_even_rejects_odd_n():
    with pytest.raises(ValueError):
        C.construct_cycle_even(7)


def test_cycle_odd_k2():
    ps, cert = C.construct_cycle_odd(2)
    assert ps["p-2"].xy == (-2, Fraction(-1, 32))
    eps = -ps["p-eps"].x
    assert 0 < eps < Fraction(1, 64)
    assert cert.claimed_optimum == Structure.cycle(["p-2", "p0", "p2", "p-eps", "p1"])
    assert cert.checks["cluster_below_segment"]
    res = max_cycle(ps, BRUTE)
    assert res.unique is Uniqueness.PROVEN and res.best == cert.claimed_optimum
    assert is_noncrossing(res.best, ps)


def test_general_path_example():
    xs = [-3, -2, -1, 1, 2, 3]
    delta = Fraction(1, 48)
    ps, cert = C.construct_path_general(xs, delta)
    checks = C.check_general_path(ps, cert, line_from_values(xs), delta)
    assert all(checks.values()), checks


def test_general_path_endpoint_heights():
    ps, cert = C.construct_path_general([Fraction(-1, 100), 0, 1, 2], Fraction(1, 1000))
    order = cert.claimed_optimum.order
    ends = (order[0], order[-1])
    ys = {ps[l].x: ps[l].y for l in ends}
    assert ys == {0: Fraction(1, 1000), 1: 0}


def test_general_path_two_points():
    ps, cert = C.construct_path_general([-1, 1], Fraction(1, 4))
    assert len(ps) == 2 and len(cert.claimed_optimum.edges()) == 1


def test_general_path_hypothesis_violation():
    with pytest.raises(ValueError):
        C.construct_path_general([-1, 0, 1, 2], Fraction(1))  # median 1/2 within delta of 0 and 1
    with pytest.raises(ValueError):
        C.construct_path_general([-1, 0, 1], Fraction(1, 100))


def test_matching_examples():
    ps, cert = C.construct_matching(1)
    assert len(ps) == 2
    ps, cert = C.construct_matching(3)
    want = Structure.matching([("p-1", "p1"), ("p-2", "p2"), ("p-3", "p3")])
    assert cert.claimed_optimum == want
    res = max_matching(ps, BRUTE)
    assert res.unique is Uniqueness.PROVEN and res.best == want
    assert res.stats["structures_examined"] == 15


def test_small_cases():
    ps, cert = C.construct_small("cycle", 3)
    assert len(ps) == 3 and is_noncrossing(cert.claimed_optimum, ps)
    ps, _ = C.construct_small("cycle", 4)
    assert ps.points[3].xy == (2, 1)
    for order in (["s0", "s1", "s2", "s3"], ["s0", "s2", "s1", "s3"], ["s0", "s1", "s3", "s2"]):
        assert not crossing_pairs(Structure.cycle(order), ps)


@pytest.mark.parametrize("kind,size", [("path-even", 4), ("path-odd", 4), ("cycle-even", 8),
                                       ("cycle-odd", 3), ("matching", 4)])
def test_certificates_replay_and_roundtrip(kind, size):
    ps, cert = C.build(kind, size)
    rows = C.replay_certificate(ps, cert)
    assert rows and all(r["ok"] for r in rows)
    assert all(C.check_chain(cert).values())
    back = C.Certificate.from_json(json.loads(json.dumps(cert.to_json())))
    assert back.to_json() == cert.to_json()
    assert PointSet.from_json(json.loads(json.dumps(ps.to_json()))) == ps


def test_provenance_tags_present():
    _, cert = C.construct_path_even(3)
    assert cert.steps[0].provenance == "L5-step1"
    assert cert.to_json()["steps"][0]["provenance"] == "L5-step1"


def test_extension_misses_only_closing_edge():
    ps, _ = C.construct_path_even(4)
    directed = Structure.path(C.claimed_path_order(4), canonical=False)
    last = directed.edges()[-1]
    assert all(f == last for _, f in C.extension_misses(directed, ps))


@pytest.mark.parametrize("kind,size", [("path-even", 3), ("cycle-odd", 2), ("matching", 2)])
def test_verify_construction(kind, size):
    ps, cert = C.build(kind, size)
    assert C.verify_construction(ps, cert)["status"] == "pass"
