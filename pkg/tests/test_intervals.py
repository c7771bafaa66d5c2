import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dynspectra.intervals import Interval, decimal_string, interval_max, sqrt_interval

fractions = st.fractions(min_value=-100, max_value=100, max_denominator=1000)


@st.composite
def intervals(draw):
    a, b = draw(fractions), draw(fractions)
    return Interval(min(a, b), max(a, b))


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        Interval(1, 0)


def test_decimal_string_rounds_outward():
    x = Fraction(2, 3)
    assert decimal_string(x, 4, "floor") == "0.6666"
    assert decimal_string(x, 4, "ceil") == "0.6667"
    assert decimal_string(-x, 4, "floor") == "-0.6667"
    assert decimal_string(Fraction(5), 0) == "5"


def test_certain_comparisons_are_three_valued():
    a, b = Interval(0, 1), Interval(2, 3)
    assert a.certainly_lt(b) is True
    assert b.certainly_lt(a) is False
    assert Interval(0, 2).certainly_lt(Interval(1, 3)) is None


@given(st.integers(0, 10**6), st.integers(16, 128))
def test_sqrt_enclosure(n, bits):
    iv = sqrt_interval(Fraction(n), bits)
    assert iv.lo ** 2 <= n <= iv.hi ** 2
    assert iv.width <= Fraction(1, 2 ** bits)


@given(intervals(), intervals(), fractions, fractions)
def test_arithmetic_contains_pointwise_results(a, b, s, t):
    x = a.lo + (a.hi - a.lo) * abs(s) / (1 + abs(s))
    y = b.lo + (b.hi - b.lo) * abs(t) / (1 + abs(t))
    assert x + y in a + b
    assert x - y in a - b
    assert x * y in a * b
    assert abs(x) in a.abs()
    assert max(x, y) in a.max(b)


@given(st.lists(intervals(), min_size=1, max_size=6))
def test_interval_max_dominates(items):
    m = interval_max(items)
    assert m.lo == max(i.lo for i in items)
    assert m.hi == max(i.hi for i in items)


@given(intervals(), st.integers(1, 80))
def test_dyadic_rounding_is_outward(a, bits):
    d = a.dyadic(bits)
    assert d.contains(a)
    for end in (d.lo, d.hi):
        assert (end * 2 ** bits).denominator == 1


def test_json_record_is_exact():
    doc = Interval(Fraction(1, 3), Fraction(1, 2)).to_json(6)
    assert doc["lo"] == {"num": 1, "den": 3}
    assert doc["lo_decimal"] == "0.333333"
    assert doc["hi_decimal"] == "0.500000"
    assert math.isclose(float(Interval(1, 2)), 1.5)
