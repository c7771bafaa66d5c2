import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dynspectra.classical import (ContinuedFraction, MarkovTriple, QuadraticSurd, SurdSum, cf_convergent, cf_eval,
                                  classical_lagrange_below_3, lagrange_number, lagrange_routes, markov_numbers,
                                  markov_periods, markov_triples, tail_pair)

SQRT5 = QuadraticSurd(0, 1, 5, 1)
TWO_SQRT2 = QuadraticSurd(0, 2, 2, 1)
SQRT221_5 = QuadraticSurd(0, 1, 221, 5)

quotients = st.lists(st.integers(1, 6), min_size=1, max_size=6)


def brute_triples(z_max):
    """Every x <= y <= z <= z_max solving the Markov equation, by solving for x."""
    out = []
    for z in range(1, z_max + 1):
        y = np.arange(1, z + 1, dtype=np.int64)
        disc = 9 * y * y * z * z - 4 * (y * y + z * z)
        root = np.sqrt(disc.astype(float)).round().astype(np.int64)
        for r in (root - 1, root, root + 1):
            hit = (r >= 0) & (r * r == disc)
            for yy, rr in zip(y[hit], r[hit]):
                x2 = 3 * int(yy) * z - int(rr)
                if x2 % 2 == 0 and 0 < x2 // 2 <= yy:
                    out.append((x2 // 2, int(yy), z))
    return sorted(set(out), key=lambda t: (t[2], t[1], t[0]))


def numeric_cf(terms):
    x = Fraction(terms[-1])
    for a in reversed(terms[:-1]):
        x = a + 1 / x
    return x


# -- surds --------------------------------------------------------------------

def test_surd_canonical_form():
    assert QuadraticSurd(0, 2, 8, 2) == QuadraticSurd(0, 2, 2, 1)
    assert QuadraticSurd(2, 1, 4, 1) == QuadraticSurd.rational(4)
    assert QuadraticSurd(1, 1, 5, -2).r == 2
    assert QuadraticSurd.sqrt(Fraction(9, 4)) == QuadraticSurd.rational(Fraction(3, 2))


def test_surd_decimal_is_truncation():
    assert SQRT5.decimal(9) == "2.236067977"
    assert (-SQRT5).decimal(3) == "-2.236"
    assert QuadraticSurd.rational(Fraction(1, 3)).decimal(4) == "0.3333"


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(2, 60), st.integers(1, 30))
def test_surd_sign_and_order_agree_with_enclosure(p, q, d, r):
    x = QuadraticSurd(p, q, d, r)
    iv = x.enclose(128)
    if x.sign() > 0:
        assert iv.hi > 0
    elif x.sign() < 0:
        assert iv.lo < 0
    else:
        assert iv.lo <= 0 <= iv.hi
    assert x.floor() == math.floor(iv.lo) or x.floor() == math.floor(iv.hi)
    assert x.decimal(6) == SurdSum.of(x).decimal(6)


def test_surd_sums_compare_across_radicals():
    gap = SurdSum.of(TWO_SQRT2) - SQRT5
    assert gap.sign() == 1
    assert gap.decimal(7) == "0.5923591"
    assert SurdSum.of(SQRT5) == SQRT5
    assert hash(SurdSum.of(SQRT5) + 0) == hash(SurdSum.of(SQRT5))
    assert SurdSum({5: Fraction(1)}).to_json() == {"terms": [{"radicand": 5, "num": 1, "den": 1}]}


# -- continued fractions -------------------------------------------------------

def test_cf_examples():
    assert cf_eval(ContinuedFraction((), (1,))) == QuadraticSurd(1, 1, 5, 2)
    assert cf_eval(ContinuedFraction((), (2,))) == QuadraticSurd(1, 1, 2, 1)
    x = cf_eval(ContinuedFraction((0,), (2, 1)))
    assert x == QuadraticSurd(-1, 1, 3, 2)
    assert abs(float(numeric_cf([0] + [2, 1] * 30)) - float(x)) < 1e-15


def test_cf_rejects_bad_quotients():
    with pytest.raises(ValueError):
        ContinuedFraction((), ())
    with pytest.raises(ValueError):
        ContinuedFraction((1, 0), (1,))


@given(st.lists(st.integers(0, 5), min_size=0, max_size=3), quotients)
def test_cf_eval_matches_long_convergent(pre, period):
    pre = [max(pre[0], 0)] + [max(a, 1) for a in pre[1:]] if pre else []
    cf = ContinuedFraction(tuple(pre), tuple(period))
    exact = cf_eval(cf)
    approx = cf_convergent(cf.terms(80))
    # a convergent p/q is within 1/q^2 of the value
    slack = Fraction(1, approx.denominator ** 2)
    assert slack < Fraction(1, 10 ** 30)
    iv = exact.enclose(256)
    assert iv.lo - slack <= approx <= iv.hi + slack


@given(quotients, st.integers(0, 10))
def test_cf_eval_consistent_under_shift(period, k):
    # [a_0; a_1, ...] = a_0 + 1/[a_1; ...]
    k %= len(period)
    rot = tuple(period[k:] + period[:k])
    nxt = tuple(rot[1:] + rot[:1])
    lhs = cf_eval(ContinuedFraction((), rot))
    rhs = cf_eval(ContinuedFraction((), nxt)).reciprocal() + rot[0]
    assert lhs == rhs


# -- Lagrange numbers ----------------------------------------------------------

def test_lagrange_examples():
    assert lagrange_number((1,)) == SQRT5
    assert lagrange_number((2,)) == TWO_SQRT2
    assert lagrange_number((2, 2, 1, 1)) == SQRT221_5


@given(quotients, st.integers(0, 10))
def test_lagrange_rotation_invariant(period, k):
    k %= len(period)
    assert lagrange_number(period) == lagrange_number(period[k:] + period[:k])


@given(quotients)
def test_lagrange_is_max_of_tail_sums(period):
    vals = [a + b for a, b in (tail_pair(period, n) for n in range(len(period)))]
    best = lagrange_number(period)
    assert best in vals and all(v <= best for v in vals)
    assert best >= SQRT5


# -- Markov triples ------------------------------------------------------------

def test_triple_examples():
    assert [t.as_tuple() for t in markov_triples(1)] == [(1, 1, 1)]
    assert [t.as_tuple() for t in markov_triples(5)] == [(1, 1, 1), (1, 1, 2), (1, 2, 5)]
    got = {t.as_tuple() for t in markov_triples(30)}
    assert {(1, 5, 13), (2, 5, 29)} <= got
    with pytest.raises(ValueError):
        MarkovTriple(1, 2, 3)


def test_triples_match_brute_force():
    for z_max in (1, 2, 5, 30, 1000, 10_000):
        assert [t.as_tuple() for t in markov_triples(z_max)] == brute_triples(z_max)


@given(st.integers(1, 10 ** 6))
def test_triples_satisfy_equation_and_close_under_mutation(z_max):
    triples = {t.as_tuple() for t in markov_triples(z_max)}
    for x, y, z in triples:
        assert x * x + y * y + z * z == 3 * x * y * z
        for child in ((x, z, 3 * x * z - y), (y, z, 3 * y * z - x)):
            c = tuple(sorted(child))
            if c[2] <= z_max:
                assert c in triples


def test_spectrum_below_three():
    vals = classical_lagrange_below_3(5)
    assert vals == [SQRT5, TWO_SQRT2, SQRT221_5]
    assert [v.decimal(9) for v in vals] == ["2.236067977", "2.828427124", "2.973213749"]
    many = classical_lagrange_below_3(10 ** 5)
    assert all(a < b for a, b in zip(many, many[1:]))
    assert all(v < 3 for v in many)


def test_two_routes_agree():
    rows = lagrange_routes(2000)
    assert [r["z"] for r in rows] == markov_numbers(2000)
    assert all(r["agree"] for r in rows)
    periods = markov_periods(5)
    assert lagrange_number(periods[5]) == SQRT221_5
