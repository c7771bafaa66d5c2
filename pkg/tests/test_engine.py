import math
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dynspectra.classical import QuadraticSurd, SurdSum
from dynspectra.engine import (WindowGraph, certificate_for, entropy_curve, exact_markov_value, isolation_gap,
                               lagrange_value, lyndon_words, markov_value, min_markov, periodic_spectrum_sample,
                               project_words, sublevel)
from dynspectra.errors import BudgetExceeded, EmptyGraph, NoSecondCycle
from dynspectra.potentials import GaussPotential, PerturbationSpec, WindowPotential, perturb
from dynspectra.symbolic import BiSequence, PeriodicSequence, SubshiftOfFiniteType, entropy, least_rotation

FULL2 = SubshiftOfFiniteType.full_shift(2)
GOLDEN = SubshiftOfFiniteType.golden_mean()
SQRT5 = QuadraticSurd(0, 1, 5, 1)
TWO_SQRT2 = QuadraticSurd(0, 2, 2, 1)


@st.composite
def weighted_sfts(draw, max_symbols=6, max_weight=6):
    """A random SFT with at least one cycle and integer weights on its pairs."""
    n = draw(st.integers(1, max_symbols))
    bits = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
    mat = np.array(bits, dtype=int).reshape(n, n)
    S = SubshiftOfFiniteType(list(range(1, n + 1)), mat)
    words = list(S.words(2))
    weights = draw(st.lists(st.integers(0, max_weight), min_size=len(words), max_size=len(words)))
    return S, WindowPotential(0, 1, dict(zip(words, weights)))


def simple_cycle_values(S, f):
    """(value, canonical word) of every simple cycle of the pair graph."""
    g = nx.DiGraph()
    g.add_nodes_from(S.alphabet)
    g.add_edges_from(w for w in S.words(2))
    out = []
    for cyc in nx.simple_cycles(g):
        word = tuple(cyc)
        value = max(f.table[(word[i], word[(i + 1) % len(word)])] for i in range(len(word)))
        r = least_rotation(word, key=S.index.__getitem__)
        out.append((value, word[r:] + word[:r]))
    return out


def oracle_min(S, f):
    cycles = simple_cycle_values(S, f)
    if not cycles:
        return None
    best = min(v for v, _ in cycles)
    tied = [w for v, w in cycles if v == best]
    shortest = min(len(w) for w in tied)
    word = min((w for w in tied if len(w) == shortest), key=lambda w: [S.index[s] for s in w])
    others = [v for v, w in cycles if w != word]
    return best, word, (min(others) if others else None)


def necklace_values(S, f, max_period):
    """Markov values of every admissible primitive necklace, by brute force."""
    import itertools
    seen = {}
    for n in range(1, max_period + 1):
        for w in itertools.product(S.alphabet, repeat=n):
            ps = PeriodicSequence.from_word(w)
            if ps.repetitions != 1 or not ps.is_admissible(S):
                continue
            seen[ps.word] = exact_markov_value(BiSequence.periodic(ps.word), f)
    return seen


# -- orbit values ---------------------------------------------------------------

def test_fixed_point_value():
    v = markov_value((1,), GaussPotential(20))
    assert v.contains(SQRT5.enclose(200).lo) and v.width < Fraction(1, 10 ** 7)
    assert exact_markov_value((1,), GaussPotential(20)) == SQRT5


def test_constant_potential_value():
    f = WindowPotential.constant(FULL2, Fraction(7, 3), 1, 1)
    assert markov_value(BiSequence((1,), (2, 2, 1), (2, 1)), f).lo == Fraction(7, 3)


def test_period_two_against_exact_surds():
    f = GaussPotential(20)
    rotations = [f.exact(BiSequence.periodic((1, 2), phase=p)) for p in range(2)]
    best = max(rotations, key=lambda v: v.enclose(200).lo)
    assert markov_value((1, 2), f).contains(best.enclose(200).lo)
    assert exact_markov_value((1, 2), f) == best


def test_lagrange_ignores_the_preperiod():
    spike = BiSequence((1,), (1, 9, 1), (1,), 0)
    f = GaussPotential(12)
    assert lagrange_value(spike, f).contains(SQRT5.enclose(200).lo)
    assert markov_value(spike, f).lo > 9


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.lists(st.integers(1, 3), max_size=4),
       st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_lagrange_below_markov(left, core, right):
    x = BiSequence(tuple(left), tuple(core), tuple(right))
    f = GaussPotential(6)
    lv, mv = lagrange_value(x, f), markov_value(x, f)
    assert lv.certainly_le(mv) is not False
    assert lv == markov_value(BiSequence.periodic(right), f)
    exact = exact_markov_value(x, f)
    assert mv.contains(exact.enclose(200).lo) or mv.lo <= exact.enclose(200).hi <= mv.hi or \
        mv.overlaps(exact.enclose(200))


# -- the bottleneck solver ---------------------------------------------------------

def test_gauss_minimum_is_the_golden_fixed_point():
    report = min_markov(FULL2, GaussPotential(20))
    assert report.minimizing_cycle.cycle.word == (1,)
    assert report.min_value.contains(SQRT5.enclose(200).lo)
    assert report.min_value.width < Fraction(1, 10 ** 6)
    assert report.isolated and not report.ambiguous
    assert report.minimizing_cycle.exact_value() == SQRT5


def test_gauss_isolation_gap():
    gap = isolation_gap(FULL2, GaussPotential(20))
    target = (SurdSum.of(TWO_SQRT2) - SQRT5).enclose(200)
    assert gap.contains(target.lo) and gap.width < Fraction(1, 10 ** 6)


def test_constant_potential_has_no_gap():
    report = min_markov(FULL2, WindowPotential.constant(FULL2, 2, 0, 1))
    assert report.min_value.lo == 2 and report.gap.hi == 0 and not report.isolated


def test_distinct_constants_give_a_gap():
    f = perturb(WindowPotential.constant(FULL2, 2, 0, 1), PerturbationSpec({1: Fraction(-1, 10), 2: Fraction(1, 10)}))
    report = min_markov(FULL2, f)
    assert report.minimizing_cycle.cycle.word == (1,)
    assert report.gap.lo == Fraction(1, 5) and report.isolated


def test_single_loop_has_no_second_cycle():
    loop = SubshiftOfFiniteType([1, 2, 3], [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    f = WindowPotential.from_function(loop, 0, 1, lambda w: w[0])
    assert min_markov(loop, f).minimizing_cycle.cycle.word == (1, 2, 3)
    with pytest.raises(NoSecondCycle):
        isolation_gap(loop, f)


def test_empty_subshift_is_an_error():
    dead = SubshiftOfFiniteType([1, 2], [[0, 1], [0, 0]])
    with pytest.raises(EmptyGraph):
        min_markov(dead, WindowPotential(0, 1, {(1, 2): 0}))


def test_phantom_edges_do_not_create_gaps():
    # the 1 -> 2 transient edge is cheap but lies on no cycle
    S = SubshiftOfFiniteType([1, 2], [[1, 1], [0, 1]])
    f = WindowPotential(0, 1, {(1, 1): 5, (1, 2): 0, (2, 2): 7})
    report = min_markov(S, f)
    assert report.min_value.lo == 5 and report.second_value.lo == 7


@settings(max_examples=150)
@given(weighted_sfts())
def test_bottleneck_matches_simple_cycle_enumeration(instance):
    S, f = instance
    expected = oracle_min(S, f)
    if expected is None:
        with pytest.raises(EmptyGraph):
            min_markov(S, f)
        return
    best, word, second = expected
    report = min_markov(S, f)
    assert report.min_value.lo == report.min_value.hi == best
    assert report.minimizing_cycle.cycle.word == word
    assert report.minimizing_cycle.recompute().lo == best
    if second is None:
        assert report.second_value is None
    else:
        assert report.second_value.lo == second
        assert certificate_for(report.second_cycle.cycle.word, f, S).value.lo == second


@given(weighted_sfts(max_symbols=4))
def test_every_cycle_is_at_least_the_minimum(instance):
    S, f = instance
    cycles = simple_cycle_values(S, f)
    if not cycles:
        return
    m = min_markov(S, f).min_value.lo
    assert all(v >= m for v, _ in cycles)


# -- periodic sampling -------------------------------------------------------------

def test_period_one_sample():
    vals = periodic_spectrum_sample(FULL2, GaussPotential(20), 1)
    assert [v.exact for v in vals] == [SQRT5, TWO_SQRT2]


def test_single_loop_sample():
    loop = SubshiftOfFiniteType([1, 2], [[0, 1], [1, 0]])
    vals = periodic_spectrum_sample(loop, GaussPotential(5), 6)
    assert len(vals) == 1 and vals[0].cycles[0].word == (1, 2)


def test_golden_mean_sample_matches_necklaces():
    f = GaussPotential(10)
    brute = necklace_values(GOLDEN, f, 4)
    vals = periodic_spectrum_sample(GOLDEN, f, 4)
    assert {c.word for v in vals for c in v.cycles} == set(brute)
    assert sorted({v for v in brute.values()}, key=lambda v: v.enclose(200).lo) == [v.exact for v in vals]


def test_lyndon_words_and_budget():
    assert list(lyndon_words(FULL2, 3)) == [(1,), (1, 1, 2), (1, 2), (1, 2, 2), (2,)]
    with pytest.raises(BudgetExceeded):
        periodic_spectrum_sample(FULL2, GaussPotential(3), 12, budget=50)


@settings(max_examples=40)
@given(weighted_sfts(max_symbols=4))
def test_min_of_periodic_sample_equals_bottleneck(instance):
    S, f = instance
    if oracle_min(S, f) is None:
        return
    report = min_markov(S, f)
    vals = periodic_spectrum_sample(S, f, 2 * report.minimizing_cycle.period)
    assert vals[0].value.lo == report.min_value.lo


# -- sublevel sets -------------------------------------------------------------------

def test_sublevel_examples():
    f = GaussPotential(20)
    assert sublevel(FULL2, f, Fraction(22, 10)).is_empty
    R = sublevel(FULL2, f, Fraction(5, 2))
    assert project_words(R, 3, 0) <= {(1, 1, 1)} or {w for w in project_words(R, 3, 0)} == {(1, 1, 1)}
    assert entropy(R).hi == 0
    table = WindowPotential.from_function(FULL2, 0, 1, lambda w: sum(w))
    assert entropy(sublevel(FULL2, table, math.inf)).contains(math.log(2))


@given(weighted_sfts(max_symbols=4), st.integers(0, 6), st.integers(0, 6))
def test_sublevel_languages_are_nested(instance, t1, t2):
    S, f = instance
    t1, t2 = min(t1, t2), max(t1, t2)
    small, big = sublevel(S, f, t1), sublevel(S, f, t2)
    if small.is_empty:
        return
    assert set(small.pruned().alphabet) <= set(big.pruned().alphabet)


# -- entropy curves --------------------------------------------------------------------

def spectral_oracle(S, f, t):
    """log spectral radius of the pair graph restricted to weights <= t."""
    keep = [w for w in S.words(2) if f.table[w] <= t]
    if not keep:
        return None
    g = nx.DiGraph(keep)
    core = [c for c in nx.strongly_connected_components(g) if len(c) > 1 or any(g.has_edge(v, v) for v in c)]
    if not core:
        return None
    A = nx.to_numpy_array(g)
    return math.log(max(1.0, max(abs(np.linalg.eigvals(A)))))


@settings(max_examples=40)
@given(weighted_sfts(max_symbols=5))
def test_entropy_curve_matches_spectral_radius(instance):
    S, f = instance
    grid = list(range(0, 7))
    points = entropy_curve(S, f, grid)
    for p in points:
        expected = spectral_oracle(S, f, p.t)
        if expected is None:
            assert p.empty
        else:
            assert float(p.entropy.lo) - 1e-8 <= expected <= float(p.entropy.hi) + 1e-8
    ups = [p.entropy.hi for p in points if not p.empty]
    assert all(a <= b for a, b in zip(ups, ups[1:]))


def test_gauss_entropy_curve_shape():
    grid = [Fraction(22, 10) + Fraction(i, 20) for i in range(21)]
    points = entropy_curve(FULL2, GaussPotential(20), grid)
    assert points[0].empty
    for p in points:
        if SQRT5.enclose(200).hi + Fraction(1, 1000) < p.t < TWO_SQRT2.enclose(200).lo - Fraction(1, 1000):
            assert p.entropy.hi < Fraction(1, 10 ** 6)
    assert points[-1].entropy.lo > 0


def test_threads_do_not_change_results(monkeypatch):
    f = GaussPotential(20)
    grid = [Fraction(22, 10) + Fraction(i, 10) for i in range(11)]
    one = entropy_curve(FULL2, f, grid, threads=1)
    monkeypatch.setenv("SPECTRA_THREADS", "4")
    four = entropy_curve(FULL2, f, grid)
    assert one == four


def test_window_graph_shape():
    G = WindowGraph.build(FULL2, WindowPotential.from_function(FULL2, 1, 1, lambda w: 0))
    assert G.n_nodes == 4 and G.n_edges == 8
