"""The four distortion measures and their distortion sets.

Timing measures (point-covering, queueing) compare a point pattern with a
codeword on a common duration T. Interval measures (normalized l1, one-sided
l1) compare interval vectors. Infinite distortion is the explicit
:data:`INFINITE` value, never a large float.

Distortion sets are evaluated with non-strict inequalities, i.e. as
closures; boundary codewords such as x_hat = 0 for queueing are accepted by
the ``*_raw`` evaluators that take plain sequences.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .geometry import MCEstimate, as_fraction, mc_volume
from .source import IntervalVector, PointPattern, SignedIntervalVector

KINDS = ("point-covering", "queueing", "normalized-l1", "one-sided-l1")


@dataclass(frozen=True)
class DistortionValue:
    """Nonnegative distortion; ``value is None`` encodes +infinity."""

    value: float | Fraction | None

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __float__(self) -> float:
        return math.inf if self.value is None else float(self.value)

    def at_most(self, D) -> bool:
        return self.value is not None and self.value <= D

    def to_json(self) -> dict:
        return {"value": "inf" if self.value is None else float(self.value)}


INFINITE = DistortionValue(None)


@dataclass(frozen=True)
class WindowCodeword:
    """A {0,1}-valued codeword on [0, T]: the union of disjoint closed cells."""

    T: float
    cells: tuple = ()

    def __post_init__(self):
        cells = tuple(sorted((a, b) for a, b in self.cells))
        for a, b in cells:
            if not 0 <= a <= b <= self.T:
                raise ValueError(f"cell [{a}, {b}] outside [0, {self.T}]")
        for (_, b0), (a1, _) in zip(cells, cells[1:]):
            if not b0 < a1:
                raise ValueError("cells must be pairwise disjoint")
        object.__setattr__(self, "cells", cells)

    @property
    def measure(self):
        return sum((b - a for a, b in self.cells), 0)

    def covers(self, t) -> bool:
        i = bisect.bisect_right(self.cells, (t, math.inf)) - 1
        return i >= 0 and self.cells[i][0] <= t <= self.cells[i][1]

    def to_json(self) -> dict:
        return {"T": self.T, "cells": [[float(a), float(b)] for a, b in self.cells]}

    @classmethod
    def from_json(cls, obj: dict) -> "WindowCodeword":
        return cls(float(obj.get("T", 1.0)), tuple((a, b) for a, b in obj.get("cells", ())))


def _same_duration(T1, T2):
    if T1 != T2:
        raise ValueError(f"durations differ: {T1} vs {T2}")


# --------------------------------------------------------------------------
# point covering


def d_pc(t: PointPattern, A: WindowCodeword) -> DistortionValue:
    """Measure of A when every event lies in A, infinite otherwise."""
    _same_duration(t.T, A.T)
    return d_pc_raw(t.timings, A)


def d_pc_raw(t: Sequence, A: WindowCodeword) -> DistortionValue:
    if all(A.covers(x) for x in t):
        return DistortionValue(A.measure)
    return INFINITE


# --------------------------------------------------------------------------
# queueing


def counting_condition(t: Sequence, xhat: Sequence) -> bool:
    """N_xhat(s) >= N_t(s) for all s.

    Both counting functions are right-continuous steps that only change at
    event times, so checking the merged event times is exhaustive.
    """
    ts, xs = sorted(t), sorted(xhat)
    return all(
        bisect.bisect_right(xs, s) >= bisect.bisect_right(ts, s)
        for s in sorted(set(ts) | set(xs))
    )


def coordinate_condition(t: Sequence, xhat: Sequence) -> bool:
    return all(a >= b for a, b in zip(t, xhat))


def queueing_finite(t: PointPattern | Sequence, xhat: PointPattern | Sequence) -> bool:
    """Finiteness of the queueing distortion, evaluated two independent ways.

    Raises if the counting-function and coordinate criteria ever disagree.
    """
    ts = t.timings if isinstance(t, PointPattern) else tuple(t)
    xs = xhat.timings if isinstance(xhat, PointPattern) else tuple(xhat)
    if len(ts) != len(xs):
        raise ValueError("equal event counts required")
    by_counts = counting_condition(ts, xs)
    by_coords = coordinate_condition(ts, xs)
    if by_counts != by_coords:
        raise AssertionError(f"finiteness criteria disagree on t={ts}, xhat={xs}")
    return by_counts


def d_q_raw(t: Sequence, xhat: Sequence, T=1) -> DistortionValue:
    """(1/T) sum_i (t_i - max(t_{i-1}, xhat_i)), t_0 = 0, when causal; else infinite.

    Generic over the number type, so Fraction inputs give exact results.
    """
    if len(t) != len(xhat) or not counting_condition(t, xhat):
        return INFINITE
    total = 0
    prev = 0
    for ti, xi in zip(t, xhat):
        total += ti - max(prev, xi)
        prev = ti
    return DistortionValue(total / T)


def d_q(t: PointPattern, xhat: PointPattern) -> DistortionValue:
    _same_duration(t.T, xhat.T)
    return d_q_raw(t.timings, xhat.timings, t.T)


# --------------------------------------------------------------------------
# interval measures


def _l1_terms(x: Sequence, xhat: Sequence):
    if len(x) != len(xhat):
        raise ValueError(f"length mismatch: {len(x)} vs {len(xhat)}")
    if not x:
        raise ValueError("need n >= 1")
    return [abs(a - b) for a, b in zip(x, xhat)]


def d_norm_l1(x: SignedIntervalVector, xhat: Sequence) -> DistortionValue:
    """(rate / n) * sum |x_i - xhat_i|."""
    terms = _l1_terms(x.values, xhat)
    return DistortionValue(x.rate / len(terms) * math.fsum(terms))


def d_onesided_l1(x: IntervalVector, xhat: Sequence) -> DistortionValue:
    """Normalized l1 when x_i >= xhat_i for every i; infinite otherwise."""
    terms = _l1_terms(x.intervals, xhat)
    if any(a < b for a, b in zip(x.intervals, xhat)):
        return INFINITE
    return DistortionValue(x.rate / len(terms) * math.fsum(terms))


# --------------------------------------------------------------------------
# distortion sets


def distortion_set_contains(kind: str, codeword, D, t: Sequence, rate: float = 1.0) -> bool:
    """Whether t lies in the (closed) distortion set of ``codeword`` at level D.

    Timing measures use normalized timings (T = 1). For point covering t is
    any point of the unit cube; for queueing t must lie in the closed order
    simplex. Interval measures take the source rate from ``rate``.
    """
    if kind == "point-covering":
        A = codeword if isinstance(codeword, WindowCodeword) else WindowCodeword(1.0, tuple(codeword))
        if not all(0 <= x <= 1 for x in t):
            return False
        return d_pc_raw(t, A).at_most(D)
    if kind == "queueing":
        xs = codeword.timings if isinstance(codeword, PointPattern) else tuple(codeword)
        t = tuple(t)
        if not all(0 <= a <= b <= 1 for a, b in zip((0,) + t, t + (1,))):
            return False
        return d_q_raw(t, xs).at_most(D)
    if kind == "normalized-l1":
        return math.fsum(_l1_terms(tuple(t), tuple(codeword))) * rate / len(t) <= D
    if kind == "one-sided-l1":
        terms = _l1_terms(tuple(t), tuple(codeword))
        if any(a < b for a, b in zip(t, codeword)):
            return False
        return math.fsum(terms) * rate / len(t) <= D
    raise ValueError(f"unknown measure kind {kind!r}; expected one of {KINDS}")


def _cell_indicator(A: WindowCodeword):
    lo = np.array([float(a) for a, _ in A.cells])
    hi = np.array([float(b) for _, b in A.cells])

    def inside(x: np.ndarray) -> np.ndarray:
        hit = np.zeros(x.shape, dtype=bool)
        for a, b in zip(lo, hi):
            hit |= (x >= a) & (x <= b)
        return hit.all(axis=1)

    return inside


def queueing_distortion_batch(t: np.ndarray, xhat: Sequence[float]) -> np.ndarray:
    """Vectorized d_q for rows of sorted normalized timings; inf where infeasible.

    Feasibility uses the coordinate form t_i >= xhat_i, whose equivalence with
    the counting-function form is checked by :func:`queueing_finite`.
    """
    x = np.asarray(xhat, dtype=float)
    prev = np.concatenate([np.zeros((t.shape[0], 1)), t[:, :-1]], axis=1)
    d = (t - np.maximum(prev, x)).sum(axis=1)
    return np.where((t >= x).all(axis=1), d, np.inf)


def distortion_set_volume_mc(
    kind: str, codeword, D: float, n: int, samples: int, seed: int, workers: int = 1
) -> MCEstimate:
    """Hit-or-miss volume of a timing distortion set.

    Point covering samples the unit cube; queueing samples the order simplex
    (sorted uniforms) whose volume is 1/n!.
    """
    if samples < 10_000:
        raise ValueError("use at least 10^4 samples")
    if kind == "point-covering":
        A = codeword if isinstance(codeword, WindowCodeword) else WindowCodeword(1.0, tuple(codeword))
        if A.T != 1:
            raise ValueError("point-covering codeword must be normalized to T = 1")
        covered = _cell_indicator(A)
        measure_ok = float(A.measure) <= D

        def hit(x):
            return covered(x) & measure_ok

        return mc_volume(hit, lambda rng, k: rng.random((k, n)), 1.0, samples, seed, workers)
    if kind == "queueing":
        xs = np.asarray(codeword.timings if isinstance(codeword, PointPattern) else codeword, float)
        if xs.shape != (n,):
            raise ValueError("codeword length must equal n")
        return mc_volume(
            lambda t: queueing_distortion_batch(t, xs) <= D,
            lambda rng, k: np.sort(rng.random((k, n)), axis=1),
            1.0 / math.factorial(n),
            samples,
            seed,
            workers,
        )
    if kind in KINDS:
        raise ValueError(f"volume estimation is only defined for timing measures, not {kind!r}")
    raise ValueError(f"unknown measure kind {kind!r}; expected one of {KINDS}")


# --------------------------------------------------------------------------
# the two-event case in closed form


@dataclass(frozen=True)
class QueueingCaseStudy:
    """Closed-form picture of the queueing distortion for n = 2.

    With codeword (a, b), 0 < a < b < 1, the finite-distortion part of the
    closed order simplex splits along t_1 = b into
    R1 = {a <= t_1 < b <= t_2} where d = (t_1 - a) + (t_2 - b), and
    R2 = {b <= t_1 <= t_2} where d = t_2 - a.
    """

    xhat: tuple[Fraction, Fraction]
    D: Fraction

    def __post_init__(self):
        a, b = (as_fraction(v) for v in self.xhat)
        if not 0 < a < b < 1:
            raise ValueError("need 0 < xhat_1 < xhat_2 < 1")
        D = as_fraction(self.D)
        if not 0 < D <= 1:
            raise ValueError("D must lie in (0, 1]")
        object.__setattr__(self, "xhat", (a, b))
        object.__setattr__(self, "D", D)

    def region(self, t) -> str:
        t1, t2 = t
        a, b = self.xhat
        if not 0 <= t1 <= t2 <= 1 or t1 < a or t2 < b:
            return "infinite"
        return "R1" if t1 < b else "R2"

    def distortion(self, t) -> DistortionValue:
        t1, t2 = t
        a, b = self.xhat
        r = self.region(t)
        if r == "R1":
            return DistortionValue((t1 - a) + (t2 - b))
        if r == "R2":
            return DistortionValue(t2 - a)
        return INFINITE

    @property
    def area(self) -> Fraction:
        """Exact area of the distortion set at level D."""
        a, b = self.xhat
        D = self.D

        def tri(s):
            return max(s, Fraction(0)) ** 2 / 2

        c, h = b - a, 1 - b
        # R1: {0 <= u <= c, 0 <= v <= h, u + v <= D}, corners cut off by inclusion-exclusion
        r1 = tri(D) - tri(D - c) - tri(D - h) + tri(D - c - h)
        # R2: the triangle b <= t_1 <= t_2 <= min(1, a + D)
        r2 = tri(min(Fraction(1), a + D) - b)
        return r1 + r2


def queueing_case_study_n2(xhat: Sequence, D) -> QueueingCaseStudy:
    return QueueingCaseStudy(tuple(xhat), D)
