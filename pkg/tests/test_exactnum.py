from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noncross.exactnum import (
    Cmp,
    Interval,
    canonical_form,
    compare_radical_sums,
    format_rat,
    parse_rat,
    precision_cap,
    rat,
    rat_lower_bound,
    sci,
    sqrt_interval,
    squarefree_split_int,
    truncate_down,
)

rats = st.fractions(min_value=0, max_value=10**6, max_denominator=10**4)


def test_sqrt_perfect_square_is_point():
    v = sqrt_interval(4, 64)
    assert v.lo == v.hi == 2


def test_sqrt_zero():
    v = sqrt_interval(0, 64)
    assert v.lo == v.hi == 0


def test_sqrt_two_brackets():
    v = sqrt_interval(2, 64)
    assert Fraction("1.41421356") < v.lo and v.hi < Fraction("1.41421357")
    assert v.width <= Fraction(2, 2**64)
    assert v.lo * v.lo <= 2 <= v.hi * v.hi


def test_sqrt_negative_rejected():
    with pytest.raises(ValueError):
        sqrt_interval(-1, 64)


def test_compare_equal_by_kernel():
    # sqrt2 + sqrt2 == sqrt8
    assert compare_radical_sums([(1, 2), (1, 2)], [(1, 8)]) is Cmp.EQUAL


def test_compare_greater():
    assert compare_radical_sums([(1, 9)], [(1, 4)]) is Cmp.GREATER


def test_compare_less():
    # sqrt2 + sqrt3 ~ 3.146 < sqrt5 + 1 ~ 3.236
    assert compare_radical_sums([(1, 2), (1, 3)], [(1, 5), (1, 1)]) is Cmp.LESS


def test_compare_near_tie_resolved():
    # sqrt(10^12 + 1) - 10^6 is about 5e-7; still strictly positive
    assert compare_radical_sums([(1, 10**12 + 1)], [(10**6, 1)]) is Cmp.GREATER


def test_compare_unresolved_under_tiny_cap():
    a = [(1, Fraction(10**40 + 1))]
    b = [(10**20, 1)]
    assert compare_radical_sums(a, b, cap=64) is Cmp.UNRESOLVED
    assert compare_radical_sums(a, b) is Cmp.GREATER


def test_precision_cap_env(monkeypatch):
    monkeypatch.setenv("NONCROSS_PRECISION_CAP", "512")
    assert precision_cap() == 512
    monkeypatch.delenv("NONCROSS_PRECISION_CAP")
    assert precision_cap() == 16384


def test_rat_lower_bound():
    assert rat_lower_bound(Interval(Fraction(3, 2), Fraction(5, 3), 64)) == Fraction(3, 2)


def test_rat_rejects_float():
    with pytest.raises(TypeError):
        rat(0.5)


def test_rat_strings_roundtrip():
    for q in (Fraction(0), Fraction(-7, 3), Fraction(1, 2**300)):
        assert parse_rat(format_rat(q)) == q


def test_sci_small_values():
    assert sci(Fraction(1, 2**400)).endswith("e-121")


def test_squarefree_split():
    assert squarefree_split_int(72) == (6, 2)  # 72 = 6^2 * 2
    assert squarefree_split_int(1) == (1, 1)


def test_canonical_form_merges_kernels():
    assert canonical_form([(1, 2), (1, 8)]) == {2: Fraction(3)}


def test_truncate_down_is_below():
    q = Fraction(1, 3)
    t = truncate_down(q)
    assert t <= q and q - t < q / 2**40


@settings(max_examples=200, deadline=None)
@given(rats, st.sampled_from([32, 64, 128]))
def test_sqrt_encloses(q, bits):
    v = sqrt_interval(q, bits)
    assert v.lo * v.lo <= q <= v.hi * v.hi


@settings(max_examples=100, deadline=None)
@given(rats, st.sampled_from([32, 64, 128]))
def test_doubling_precision_never_widens(q, bits):
    a, b = sqrt_interval(q, bits), sqrt_interval(q, 2 * bits)
    assert a.lo <= b.lo and b.hi <= a.hi


terms = st.lists(st.tuples(st.integers(1, 5), st.integers(1, 60)), min_size=1, max_size=4)


@settings(max_examples=200, deadline=None)
@given(terms, terms)
def test_compare_antisymmetric(a, b):
    assert compare_radical_sums(a, b) is compare_radical_sums(b, a).flipped()


@settings(max_examples=100, deadline=None)
@given(terms)
def test_compare_reflexive(a):
    assert compare_radical_sums(a, list(reversed(a))) is Cmp.EQUAL
