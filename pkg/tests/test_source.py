import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from poissonrd.source import (
    IntervalVector, PointPattern, SignedIntervalVector, concentration_check, intervals_to_timings,
    sample_fixed_count, sample_homogeneous, sample_intervals, sample_laplacian,
    timings_to_intervals,
)


def test_zero_rate_is_empty():
    assert sample_homogeneous(0.0, 1.0, 123).timings == ()


def test_pattern_inside_window():
    p = sample_homogeneous(5.0, 2.0, 1)
    assert all(0 < t < 2 for t in p.timings)
    assert all(a < b for a, b in zip(p.timings, p.timings[1:]))


def test_bad_arguments():
    with pytest.raises(ValueError):
        sample_homogeneous(-1.0, 1.0, 0)
    with pytest.raises(ValueError):
        sample_homogeneous(1.0, 0.0, 0)
    with pytest.raises(ValueError):
        sample_laplacian(3, 0.0, 0)
    with pytest.raises(ValueError):
        PointPattern(1.0, (0.5, 0.5))
    with pytest.raises(ValueError):
        PointPattern(1.0, (0.5, 1.0))
    with pytest.raises(ValueError):
        IntervalVector((1.0, 0.0))
    with pytest.raises(ValueError):
        SignedIntervalVector((1.0, 0.0))


def test_mean_count_at_rate_100():
    counts = [sample_homogeneous(100.0, 1.0, s).n for s in range(10_000)]
    assert abs(np.mean(counts) - 100) <= 1.0


@pytest.mark.parametrize("mean", [1, 10, 100])
def test_counts_fit_poisson(mean):
    counts = np.array([sample_homogeneous(float(mean), 1.0, 50_000 + s).n for s in range(3000)])
    # bins with expected count >= 5, tails pooled
    lo, hi = stats.poisson.ppf([0.002, 0.998], mean).astype(int)
    edges = np.arange(lo, hi + 1)
    observed = np.array([np.sum(counts < lo)] + [np.sum(counts == k) for k in edges[1:-1]]
                        + [np.sum(counts >= edges[-1])])
    probs = np.array([stats.poisson.cdf(lo - 1, mean)]
                     + [stats.poisson.pmf(k, mean) for k in edges[1:-1]]
                     + [stats.poisson.sf(edges[-1] - 1, mean)])
    expected = probs * len(counts)
    keep = expected >= 5
    obs = np.append(observed[keep], observed[~keep].sum())
    exp = np.append(expected[keep], expected[~keep].sum())
    if exp[-1] == 0:
        obs, exp = obs[:-1], exp[:-1]
    exp = exp * obs.sum() / exp.sum()
    assert stats.chisquare(obs, exp).pvalue > 1e-3


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.5, 50), st.floats(0.1, 10))
def test_ordering_invariant(seed, rate, T):
    p = sample_homogeneous(rate, T, seed)
    assert all(0 < a < b < T for a, b in zip(p.timings, p.timings[1:]))
    if p.n:
        assert 0 < p.timings[0] and p.timings[-1] < T


def test_interval_examples():
    iv = timings_to_intervals(PointPattern(1.0, (0.2, 0.5, 0.9)))
    assert iv.intervals == pytest.approx((0.2, 0.3, 0.4), abs=1e-15)
    assert timings_to_intervals(PointPattern(1.0, ())).intervals == ()
    assert intervals_to_timings((), 1.0).timings == ()
    with pytest.raises(ValueError):
        intervals_to_timings((0.5, 0.6), 1.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(1, 200))
def test_timings_round_trip_is_exact(seed, rate):
    p = sample_homogeneous(rate, 1.0, seed)
    assert intervals_to_timings(timings_to_intervals(p), p.T) == p


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(1e-3, 1.0), max_size=30))
def test_intervals_round_trip(gaps):
    T = sum(gaps) + 1.0
    back = timings_to_intervals(intervals_to_timings(gaps, T)).intervals
    assert back == pytest.approx(tuple(gaps), rel=1e-9, abs=1e-12)


def test_laplacian_examples():
    assert sample_laplacian(0, 1.0, 0).values == ()
    x = np.array(sample_laplacian(100_000, 1.0, 3).values)
    assert abs(np.abs(x).mean() - 1) <= 0.02
    y = np.array(sample_laplacian(100_000, 2.0, 4).values)
    assert abs(np.mean(y > 0) - 0.5) <= 0.01


def test_fixed_count_sampling():
    p = sample_fixed_count(7, 3.0, 9)
    assert p.n == 7 and p.T == 3.0


def test_concentration_examples():
    iv = sample_intervals(10_000, 1.0, 11)
    assert concentration_check(iv, 0.05).passed
    r = concentration_check(IntervalVector((0.5,) * 10, rate=2.0), 0.05)
    assert r.deviation == 0 and r.passed
    r = concentration_check(IntervalVector((1.0,) * 10, rate=2.0), 0.05)
    assert r.deviation == 1 and not r.passed
    with pytest.raises(ValueError):
        concentration_check(IntervalVector(()), 0.1)


def test_laplacian_concentration():
    assert concentration_check(sample_laplacian(10_000, 3.0, 5), 0.05).passed


def test_json_shapes():
    p = PointPattern(2.0, (0.5, 1.5))
    assert p.to_json() == {"T": 2.0, "timings": [0.5, 1.5]}
    assert PointPattern.from_json(p.to_json()) == p
    iv = IntervalVector((0.5,), 2.0)
    assert iv.to_json() == {"lambda": 2.0, "intervals": [0.5]}
    assert IntervalVector.from_json(iv.to_json()) == iv
    sv = SignedIntervalVector((-0.5, 1.0), 1.0)
    assert SignedIntervalVector.from_json(sv.to_json()) == sv


def test_counting_function_and_normalization():
    p = PointPattern(2.0, (0.5, 1.0, 1.5))
    assert [p.count(s) for s in (0.0, 0.5, 1.2, 2.0)] == [0, 1, 2, 3]
    assert p.normalized().timings == (0.25, 0.5, 0.75)


def test_same_seed_same_pattern():
    assert sample_homogeneous(20.0, 1.0, 99) == sample_homogeneous(20.0, 1.0, 99)
