"""Homogeneous Poisson realizations in timing and interval form."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _rng


@dataclass(frozen=True)
class PointPattern:
    """Event timings 0 < t_1 < ... < t_n < T."""

    T: float
    timings: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.T > 0 or not math.isfinite(self.T):
            raise ValueError("duration T must be positive and finite")
        ts = tuple(float(t) for t in self.timings)
        prev = 0.0
        for t in ts:
            if not prev < t:
                raise ValueError("timings must be strictly increasing and positive")
            prev = t
        if ts and not ts[-1] < self.T:
            raise ValueError("timings must lie strictly inside (0, T)")
        object.__setattr__(self, "timings", ts)

    @property
    def n(self) -> int:
        return len(self.timings)

    def count(self, s: float) -> int:
        """Counting function N(s) = #{t_i <= s}."""
        return int(np.searchsorted(self.timings, s, side="right"))

    def normalized(self) -> "PointPattern":
        """Timings divided by T; the result lives on (0, 1)."""
        return PointPattern(1.0, tuple(t / self.T for t in self.timings))

    def to_json(self) -> dict:
        return {"T": self.T, "timings": list(self.timings)}

    @classmethod
    def from_json(cls, obj: dict) -> "PointPattern":
        return cls(float(obj["T"]), tuple(obj.get("timings", ())))


@dataclass(frozen=True)
class IntervalVector:
    """Positive inter-event intervals of a rate-``rate`` process."""

    intervals: tuple[float, ...]
    rate: float = 1.0

    def __post_init__(self):
        iv = tuple(float(x) for x in self.intervals)
        if any(not (x > 0 and math.isfinite(x)) for x in iv):
            raise ValueError("intervals must be positive and finite")
        if not self.rate > 0:
            raise ValueError("rate must be positive")
        object.__setattr__(self, "intervals", iv)

    @property
    def n(self) -> int:
        return len(self.intervals)

    def to_json(self) -> dict:
        return {"lambda": self.rate, "intervals": list(self.intervals)}

    @classmethod
    def from_json(cls, obj: dict) -> "IntervalVector":
        return cls(tuple(obj["intervals"]), float(obj.get("lambda", 1.0)))


@dataclass(frozen=True)
class SignedIntervalVector:
    """Nonzero signed intervals; i.i.d. Laplacian when sampled."""

    values: tuple[float, ...]
    rate: float = 1.0

    def __post_init__(self):
        vs = tuple(float(x) for x in self.values)
        if any(x == 0 or not math.isfinite(x) for x in vs):
            raise ValueError("signed intervals must be nonzero and finite")
        if not self.rate > 0:
            raise ValueError("rate must be positive")
        object.__setattr__(self, "values", vs)

    @property
    def n(self) -> int:
        return len(self.values)

    def to_json(self) -> dict:
        return {"lambda": self.rate, "values": list(self.values)}

    @classmethod
    def from_json(cls, obj: dict) -> "SignedIntervalVector":
        return cls(tuple(obj["values"]), float(obj.get("lambda", 1.0)))


def _positive_exponentials(rng: np.random.Generator, rate: float, k: int) -> np.ndarray:
    gaps = rng.exponential(1.0 / rate, size=k)
    while np.any(gaps <= 0):
        bad = gaps <= 0
        gaps[bad] = rng.exponential(1.0 / rate, size=int(bad.sum()))
    return gaps


def sample_homogeneous(rate: float, T: float, seed: int) -> PointPattern:
    """Poisson(rate) process on (0, T) by cumulative exponential gaps.

    The event count is Poisson(rate * T) across seeds.
    """
    if rate < 0 or not math.isfinite(rate):
        raise ValueError("rate must be nonnegative")
    if not T > 0:
        raise ValueError("duration must be positive")
    if rate == 0:
        return PointPattern(T, ())
    rng = _rng.stream(seed)
    mean = rate * T
    chunk = int(mean + 5 * math.sqrt(mean) + 10)
    times: list[float] = []
    last = 0.0
    while True:
        arrivals = last + np.cumsum(_positive_exponentials(rng, rate, chunk))
        inside = arrivals[arrivals < T]
        times.extend(inside.tolist())
        if len(inside) < chunk:
            break
        last = float(arrivals[-1])
    # floating-point cumsum can in principle produce equal neighbours
    out = []
    for t in times:
        if t > 0 and (not out or t > out[-1]):
            out.append(t)
    return PointPattern(T, tuple(out))


def sample_fixed_count(n: int, T: float, seed: int) -> PointPattern:
    """A realization conditioned on exactly n events: sorted uniforms on (0, T)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = _rng.stream(seed)
    while True:
        ts = np.sort(rng.uniform(0.0, T, size=n))
        if n == 0 or (ts[0] > 0 and np.all(np.diff(ts) > 0)):
            return PointPattern(T, tuple(ts.tolist()))


def sample_intervals(n: int, rate: float, seed: int) -> IntervalVector:
    """n i.i.d. exponential intervals."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not rate > 0:
        raise ValueError("rate must be positive")
    return IntervalVector(tuple(_positive_exponentials(_rng.stream(seed), rate, n).tolist()), rate)


def sample_laplacian(n: int, rate: float, seed: int) -> SignedIntervalVector:
    """n i.i.d. Laplacian(rate) values: exponential magnitude times a fair sign."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not rate > 0:
        raise ValueError("rate must be positive")
    rng = _rng.stream(seed)
    mags = _positive_exponentials(rng, rate, n)
    signs = np.where(rng.integers(0, 2, size=n) == 1, 1.0, -1.0)
    return SignedIntervalVector(tuple((mags * signs).tolist()), rate)


def _gap(a: float, b: float) -> float:
    # a gap g with a + g == b in floating point, so that the timings come back
    # bit for bit from sequential summation
    g = b - a
    for _ in range(4):
        s = a + g
        if s == b:
            return g
        g = math.nextafter(g, math.inf if s < b else -math.inf)
    raise ArithmeticError(f"no float gap reproduces {b!r} from {a!r}")


def timings_to_intervals(p: PointPattern, rate: float = 1.0) -> IntervalVector:
    """tau_i = t_i - t_{i-1} with t_0 = 0."""
    gaps = []
    prev = 0.0
    for t in p.timings:
        gaps.append(_gap(prev, t))
        prev = t
    return IntervalVector(tuple(gaps), rate)


def intervals_to_timings(iv: IntervalVector | Sequence[float], T: float) -> PointPattern:
    gaps = iv.intervals if isinstance(iv, IntervalVector) else tuple(float(g) for g in iv)
    ts = tuple(itertools.accumulate(gaps))
    if ts and not ts[-1] < T:
        raise ValueError("interval sum must be smaller than T")
    return PointPattern(T, ts)


@dataclass(frozen=True)
class ConcentrationReport:
    deviation: float
    passed: bool


def concentration_check(iv: IntervalVector | SignedIntervalVector, eps: float) -> ConcentrationReport:
    """How far (rate/n) * sum |x_i| is from 1, the l1 shell radius n/rate."""
    xs = iv.intervals if isinstance(iv, IntervalVector) else iv.values
    if not xs:
        raise ValueError("need at least one interval")
    dev = abs(iv.rate / len(xs) * math.fsum(abs(x) for x in xs) - 1.0)
    return ConcentrationReport(dev, dev <= eps)
