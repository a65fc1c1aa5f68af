from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noncross.geometry import Structure
from noncross.line1d import (
    LineSet,
    UnsupportedError,
    all_structures,
    brute_optima,
    cycle_deficit_lemma_check,
    endpoint_sides_ok,
    is_longest_cycle_1d,
    is_longest_path_1d,
    is_longest_path_1d_odd,
    line_from_values,
    longest_cycle_length_1d,
    longest_path_length_1d,
    median,
)

L1234 = line_from_values([1, 2, 3, 4])


def path(*xs):
    return Structure.path([str(x) for x in xs])


def cycle(*xs):
    return Structure.cycle([str(x) for x in xs])


def test_median_examples():
    assert median(line_from_values([1, 2, 3])) == 2
    assert median(L1234) == Fraction(5, 2)
    assert median(line_from_values([-3, -2, -1, 2, 3, 0])) == Fraction(-1, 2)


def test_path_characterization_examples():
    assert is_longest_path_1d(path(2, 4, 1, 3), L1234)
    assert not is_longest_path_1d(path(1, 4, 2, 3), L1234)
    assert not is_longest_path_1d(path(2, 1, 4, 3), L1234)
    with pytest.raises(UnsupportedError):
        is_longest_path_1d(path(1, 2, 3), line_from_values([1, 2, 3]))


def test_cycle_characterization_examples():
    assert is_longest_cycle_1d(cycle(1, 3, 2, 4), L1234)
    assert not is_longest_cycle_1d(cycle(1, 2, 3, 4), L1234)
    five = line_from_values([-2, -1, 0, 1, 2])
    # both edges at the median point go right
    assert not is_longest_cycle_1d(cycle(0, 1, -2, -1, 2), five)
    assert not is_longest_cycle_1d(cycle(-2, 1, 0, 2, -1), five)


def test_closed_forms():
    assert longest_path_length_1d(L1234) == 7
    assert longest_path_length_1d(line_from_values([-1, 1])) == 2
    six = line_from_values(range(6))
    assert longest_path_length_1d(six) == brute_optima(six, "path")[0]
    assert longest_cycle_length_1d(L1234) == 8
    assert longest_cycle_length_1d(line_from_values([-1, 0, 1])) == 4
    five = line_from_values([-2, -1, 0, 1, 2])
    assert longest_cycle_length_1d(five) == brute_optima(five, "cycle")[0] == 12
    with pytest.raises(ValueError):
        longest_cycle_length_1d(line_from_values([0, 1]))


def test_enumeration_counts():
    assert len(all_structures(L1234, "path")) == 12
    assert len(all_structures(L1234, "cycle")) == 3
    assert len(all_structures(line_from_values(range(6)), "path")) == 360
    assert len(all_structures(line_from_values(range(5)), "cycle")) == 12


def test_deficit_examples():
    five = line_from_values([-2, -1, 0, 1, 2])
    assert cycle_deficit_lemma_check(five, cycle(-2, -1, 0, 1, 2)) == 2
    three = line_from_values([-1, 0, 1])
    assert cycle_deficit_lemma_check(three, cycle(-1, 0, 1)) == 0


def test_deficit_on_odd_cycle_optimum():
    eps = Fraction(1, 100)
    ls = line_from_values([-2, -eps, 0, 1, 2])
    lab = {v: l for v, l in zip(ls.values, ls.labels())}
    opt = Structure.cycle([lab[-2], lab[0], lab[2], lab[-eps], lab[1]])
    assert cycle_deficit_lemma_check(ls, opt) == 0
    assert is_longest_cycle_1d(opt, ls)


def test_lineset_json_and_labels():
    ls = line_from_values([Fraction(5, 2), 1])
    assert LineSet.from_json(ls.to_json()) == ls
    assert "5/2" in ls.labels()


def test_duplicates_rejected():
    with pytest.raises(ValueError):
        line_from_values([1, 1, 2])


distinct = st.lists(st.integers(-40, 40), min_size=4, max_size=7, unique=True)


@settings(max_examples=40, deadline=None)
@given(distinct)
def test_characterizations_match_brute_force(vals):
    ls = line_from_values(vals)
    n = len(ls)
    if n % 2 == 0:
        best, opts = brute_optima(ls, "path")
        assert best == longest_path_length_1d(ls)
        flagged = {s for _, s in all_structures(ls, "path") if is_longest_path_1d(s, ls)}
        assert flagged == set(opts)
        assert all(endpoint_sides_ok(s, ls) for s in opts)
    else:
        _, opts = brute_optima(ls, "path")
        flagged = {s for _, s in all_structures(ls, "path") if is_longest_path_1d_odd(s, ls)}
        assert flagged == set(opts)
    best, opts = brute_optima(ls, "cycle")
    assert best == longest_cycle_length_1d(ls)
    flagged = {s for _, s in all_structures(ls, "cycle") if is_longest_cycle_1d(s, ls)}
    assert flagged == set(opts)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-40, 40), min_size=5, max_size=5, unique=True) |
       st.lists(st.integers(-40, 40), min_size=7, max_size=7, unique=True))
def test_deficit_bound_holds(vals):
    ls = line_from_values(vals)
    best, _ = brute_optima(ls, "cycle")
    for length, s in all_structures(ls, "cycle"):
        assert best - length >= cycle_deficit_lemma_check(ls, s)
