"""Tallies, normalized frequencies, summaries, decimal rendering."""

import math
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hwstrata.errors import EmptySample, InvalidInput, InvalidPRank
from hwstrata.stats import (
    EstimateRow,
    StratumTally,
    binomial_stderr,
    component_estimate,
    m_value,
    render_decimal,
    summarize,
    tally,
)


# ---------------------------------------------------------------------------
# tally

def test_tally_pin():
    t = tally([3, 3, 2, 3], 3, p=5)
    assert t.counts == (0, 0, 1, 3)
    assert t.s == 4
    assert t.non_ordinary == 1
    assert t.n_le(0) == 0
    assert t.n_le(2) == 1
    assert t.n_le(3) == 4


def test_tally_empty():
    t = tally([], 3)
    assert t.counts == (0, 0, 0, 0)
    assert t.s == 0


def test_tally_rejects_out_of_range():
    with pytest.raises(InvalidPRank):
        tally([4], 3)
    with pytest.raises(InvalidPRank):
        tally([-1], 2)


@settings(max_examples=40, derandomize=True)
@given(st.lists(st.integers(0, 3), max_size=60))
def test_cumulative_counts_are_monotone(ranks):
    t = tally(ranks, 3)
    vals = [t.n_le(f) for f in range(4)]
    assert vals == sorted(vals)
    assert vals[-1] == t.s


def test_merge():
    a = tally([0, 1, 2], 2, p=7)
    b = tally([2, 2], 2, p=7)
    m = a.merge(b)
    assert m.s == 5
    assert m.counts == (1, 1, 3)


def test_merge_rejects_different_strata():
    a = tally([0], 2, p=7)
    b = tally([0], 2, p=11)
    with pytest.raises(InvalidInput):
        a.merge(b)


@settings(max_examples=30, derandomize=True)
@given(st.lists(st.lists(st.integers(0, 2), max_size=8), min_size=3, max_size=3))
def test_merge_is_associative_and_commutative(chunks):
    ts = [tally(c, 2, p=5) for c in chunks]
    left = ts[0].merge(ts[1]).merge(ts[2])
    right = ts[0].merge(ts[1].merge(ts[2]))
    assert left == right
    assert ts[0].merge(ts[1]) == ts[1].merge(ts[0])


# ---------------------------------------------------------------------------
# normalized frequency

def test_m_value_pin():
    t = StratumTally(3, 23, 1, "family", 100_000, (0, 0, 2000, 98_000))
    row = m_value(t, 2)
    assert row.M == Fraction(23, 50)
    assert render_decimal(row.M) == "0.460000000"
    assert row.n_le_f == 2000


def test_m_value_zero_count():
    t = StratumTally(3, 23, 1, "family", 1000, (0, 0, 0, 1000))
    assert m_value(t, 1).M == 0


def test_m_value_at_full_threshold_is_one():
    for counts in [(1, 2, 3), (0, 0, 6), (6, 0, 0)]:
        t = StratumTally(2, 13, 1, "family", 6, counts)
        assert m_value(t, 2).M == 1


def test_m_value_errors():
    empty = StratumTally(3, 23, 1, "family", 0, (0, 0, 0, 0))
    with pytest.raises(EmptySample):
        m_value(empty, 2)
    t = StratumTally(3, 23, 1, "family", 10, (0, 0, 0, 10))
    with pytest.raises(InvalidInput):
        m_value(t, 4)
    with pytest.raises(InvalidInput):
        m_value(t, -1)


def test_census_m_values_gf5_genus3():
    # frozen from the exhaustive genus-3 box over GF(5):
    # 1467 classes, p-rank counts (13, 52, 223, 1179)
    t = StratumTally(3, 5, 1, "family", 1467, (13, 52, 223, 1179))
    assert m_value(t, 2).M == Fraction(1440, 1467)
    assert render_decimal(m_value(t, 2).M) == "0.981595092"
    assert m_value(t, 1).M == Fraction(65 * 25, 1467)
    assert render_decimal(m_value(t, 1).M) == "1.107702795"
    assert render_decimal(m_value(t, 0).M) == "1.107702795"


# ---------------------------------------------------------------------------
# summaries

def test_summarize_pin():
    s = summarize([1, 2, 3])
    assert s.median == 2
    assert s.mean == 2
    assert s.min == 1
    assert s.max == 3
    assert math.isclose(s.std_dev, math.sqrt(Fraction(2, 3)))


def test_summarize_single_value():
    s = summarize([Fraction(7, 5)])
    assert s.median == s.mean == s.min == s.max == Fraction(7, 5)
    assert s.std_dev == 0.0


def test_summarize_even_median_is_midpoint():
    s = summarize([1, 2, 3, 10])
    assert s.median == Fraction(5, 2)


def test_summarize_accepts_rows_and_raw_values():
    rows = [
        EstimateRow(3, 2, 5, 1, Fraction(1, 2), 10),
        EstimateRow(3, 2, 7, 1, Fraction(3, 2), 20),
    ]
    assert summarize(rows) == summarize([Fraction(1, 2), Fraction(3, 2)])


def test_summarize_empty():
    with pytest.raises(EmptySample):
        summarize([])


@settings(max_examples=30, derandomize=True)
@given(st.lists(st.fractions(), min_size=1, max_size=12), st.randoms())
def test_summary_is_permutation_invariant(values, rng):
    shuffled = list(values)
    rng.shuffle(shuffled)
    assert summarize(values) == summarize(shuffled)


# ---------------------------------------------------------------------------
# component estimates

def test_component_estimate_pins():
    rows = [
        EstimateRow(3, 2, 23, 1, Fraction(101, 100), 0),
        EstimateRow(3, 2, 23, 2, Fraction(99, 100), 0),
    ]
    est = component_estimate(rows)
    assert est.c_estimate == 1
    assert est.m_by_r == ((1, Fraction(101, 100)), (2, Fraction(99, 100)))

    rows = [
        EstimateRow(3, 2, 23, 1, Fraction(98, 100), 0),
        EstimateRow(3, 2, 23, 2, Fraction(116, 100), 0),
    ]
    assert component_estimate(rows).c_estimate == 1


def test_component_estimate_half_even_rounding():
    rows = [EstimateRow(3, 2, 23, 1, Fraction(3, 2), 0)]
    assert component_estimate(rows).c_estimate == 2  # 1.5 -> 2
    rows = [EstimateRow(3, 2, 23, 1, Fraction(5, 2), 0)]
    assert component_estimate(rows).c_estimate == 2  # 2.5 -> 2


def test_component_estimate_errors():
    with pytest.raises(EmptySample):
        component_estimate([])
    rows = [
        EstimateRow(3, 2, 23, 1, Fraction(1), 0),
        EstimateRow(3, 2, 29, 2, Fraction(1), 0),
    ]
    with pytest.raises(InvalidInput):
        component_estimate(rows)


# ---------------------------------------------------------------------------
# decimal rendering

def test_render_decimal_ties_to_even():
    assert render_decimal(Fraction(1, 2 * 10**9)) == "0.000000000"
    assert render_decimal(Fraction(3, 2 * 10**9)) == "0.000000002"


def test_render_decimal_basics():
    assert render_decimal(Fraction(23, 50)) == "0.460000000"
    assert render_decimal(Fraction(-1, 3)) == "-0.333333333"
    assert render_decimal(Fraction(7)) == "7.000000000"
    assert render_decimal(Fraction(1, 8), places=3) == "0.125"
    assert render_decimal(Fraction(1, 16), places=3) == "0.062"  # 0.0625 -> even


@settings(max_examples=80, derandomize=True)
@given(st.fractions(min_value=-1000, max_value=1000, max_denominator=10**12))
def test_render_decimal_matches_decimal_module(x):
    getcontext().prec = 60
    d = Decimal(x.numerator) / Decimal(x.denominator)
    assert render_decimal(x) == f"{d:.9f}"


# ---------------------------------------------------------------------------
# stderr column

def test_binomial_stderr():
    t = StratumTally(3, 23, 1, "family", 100_000, (0, 0, 2000, 98_000))
    phat = 0.02
    expect = math.sqrt(phat * (1 - phat) / 100_000) * 23
    assert math.isclose(binomial_stderr(t, 2), expect)
    with pytest.raises(EmptySample):
        binomial_stderr(StratumTally(3, 23, 1, "family", 0, (0, 0, 0, 0)), 2)
    # zero and full thresholds have zero variance
    assert binomial_stderr(t, 3) == 0.0
