"""Stratum tallies, Lang-Weil normalized frequencies, and summary statistics.

The estimate pipeline: a histogram of p-ranks over s distinct curves, the
normalized frequency M = (n_≤f / s) · p^(r(g−f)) for a stratum threshold f
(an approximation to the stratum's component count, by point-counting
heuristics on the moduli space), and per-prime component estimates taking
the maximum of the rounded M over the available extension degrees.

M-values are exact rationals throughout; floats appear only in presentation
(decimal strings are rendered with round-half-even in integer arithmetic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptySample, InvalidInput, InvalidPRank

__all__ = [
    "StratumTally",
    "EstimateRow",
    "SummaryStats",
    "ComponentEstimate",
    "tally",
    "m_value",
    "summarize",
    "component_estimate",
    "render_decimal",
    "binomial_stderr",
]


@dataclass(frozen=True)
class StratumTally:
    """p-rank histogram over s distinct curves: counts[k] = #{p-rank = k}."""

    g: int
    p: int
    r: int
    method: str
    s: int
    counts: tuple[int, ...]

    @property
    def non_ordinary(self) -> int:
        return self.s - self.counts[self.g]

    def n_le(self, f: int) -> int:
        """Cumulative count of curves with p-rank ≤ f."""
        return sum(self.counts[: f + 1])

    def merge(self, other: "StratumTally") -> "StratumTally":
        if (self.g, self.p, self.r, self.method) != (
            other.g,
            other.p,
            other.r,
            other.method,
        ):
            raise InvalidInput("cannot merge tallies of different strata runs")
        return StratumTally(
            self.g,
            self.p,
            self.r,
            self.method,
            self.s + other.s,
            tuple(a + b for a, b in zip(self.counts, other.counts)),
        )


@dataclass(frozen=True)
class EstimateRow:
    """One normalized frequency M = (n_le_f / s) · p^(r(g−f))."""

    g: int
    f: int
    p: int
    r: int
    M: Fraction
    n_le_f: int


@dataclass(frozen=True)
class SummaryStats:
    """The five reported statistics over a set of M-values."""

    median: Fraction
    mean: Fraction
    min: Fraction
    max: Fraction
    std_dev: float  # population convention (divide by n)


@dataclass(frozen=True)
class ComponentEstimate:
    """Per-prime component-count estimate: max over r of the rounded M."""

    g: int
    f: int
    p: int
    m_by_r: tuple[tuple[int, Fraction], ...]  # sorted by r
    c_estimate: int


def tally(
    p_ranks,
    g: int,
    *,
    p: int = 0,
    r: int = 1,
    method: str = "family",
) -> StratumTally:
    """Exact histogram of p-rank values; s is the list length."""
    counts = [0] * (g + 1)
    for v in p_ranks:
        if not 0 <= v <= g:
            raise InvalidPRank(f"p-rank {v} outside [0, {g}]")
        counts[v] += 1
    return StratumTally(g, p, r, method, sum(counts), tuple(counts))


def m_value(t: StratumTally, f: int) -> EstimateRow:
    """(n_≤f / s) · p^(r(g−f)) as an exact rational."""
    if t.s == 0:
        raise EmptySample("no curves tallied")
    if not 0 <= f <= t.g:
        raise InvalidInput(f"threshold {f} outside [0, {t.g}]")
    n = t.n_le(f)
    M = Fraction(n, t.s) * Fraction(t.p) ** (t.r * (t.g - f))
    return EstimateRow(t.g, f, t.p, t.r, M, n)


def summarize(rows) -> SummaryStats:
    """Median (midpoint for even n), mean, min, max, population std dev."""
    values = sorted(row.M if isinstance(row, EstimateRow) else Fraction(row) for row in rows)
    if not values:
        raise EmptySample("nothing to summarize")
    n = len(values)
    if n % 2:
        median = values[n // 2]
    else:
        median = (values[n // 2 - 1] + values[n // 2]) / 2
    mean = sum(values) / n
    variance = sum((v - mean) ** 2 for v in values) / n
    return SummaryStats(median, mean, values[0], values[-1], math.sqrt(variance))


def component_estimate(rows) -> ComponentEstimate:
    """Combine EstimateRows sharing (g, f, p) across extension degrees."""
    rows = list(rows)
    if not rows:
        raise EmptySample("no rows to combine")
    g, f, p = rows[0].g, rows[0].f, rows[0].p
    if any((row.g, row.f, row.p) != (g, f, p) for row in rows):
        raise InvalidInput("rows must share genus, threshold, and prime")
    by_r = tuple(sorted((row.r, row.M) for row in rows))
    # round() on Fraction is exact round-half-even
    return ComponentEstimate(g, f, p, by_r, max(round(M) for _, M in by_r))


def render_decimal(value: Fraction, places: int = 9) -> str:
    """Fixed-point decimal string, round-half-even, in integer arithmetic."""
    sign = "-" if value < 0 else ""
    num, den = abs(value).numerator, abs(value).denominator
    scaled_num = num * 10**places
    q, rem = divmod(scaled_num, den)
    double = 2 * rem
    if double > den or (double == den and q % 2 == 1):
        q += 1
    whole, frac = divmod(q, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


def binomial_stderr(t: StratumTally, f: int) -> float:
    """1σ binomial noise of the M estimate (convenience column only)."""
    if t.s == 0:
        raise EmptySample("no curves tallied")
    phat = t.n_le(f) / t.s
    return math.sqrt(phat * (1 - phat) / t.s) * t.p ** (t.r * (t.g - f))
