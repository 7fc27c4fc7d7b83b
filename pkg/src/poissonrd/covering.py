"""Covering-count converse bounds and a constructive window codebook."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import _rng
from .distortion import WindowCodeword, d_pc_raw
from .geometry import as_fraction, reference_volume
from .source import sample_intervals

SOURCE_SHAPES = {
    # source set -> (its reference shape, the largest distortion set inside it)
    "cube": ("cube-distortion", "cube-distortion"),
    "order-simplex": ("order-simplex", "order-simplex"),
}


@dataclass(frozen=True)
class CoveringBound:
    count: Fraction
    rate_per_point: float

    def to_json(self) -> dict:
        c = self.count
        return {
            "count": str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}",
            "rate_per_point": self.rate_per_point,
        }


def covering_lower_bound(shape: str, n: int, D) -> CoveringBound:
    """Minimal number of distortion sets covering the source set, by volume.

    The count is vol(source) / vol(largest distortion set) = (1/D)^n for both
    the unit cube (point covering) and the order simplex (queueing).
    """
    if shape not in SOURCE_SHAPES:
        raise ValueError(f"unknown source shape {shape!r}; expected one of {sorted(SOURCE_SHAPES)}")
    D = as_fraction(D)
    if not 0 < D <= 1:
        raise ValueError("D must lie in (0, 1]")
    src, dist = SOURCE_SHAPES[shape]
    count = reference_volume(src, n, 1) / reference_volume(dist, n, D)
    return CoveringBound(count, math.log2(1 / D))


@dataclass(frozen=True)
class CellCodebook:
    n: int
    D: Fraction
    cells: int
    size: int
    rate_per_point: float
    verified_cover: bool
    patterns_checked: int

    @property
    def bound(self) -> float:
        return math.log2(1 / self.D)


def covering_window(points, n: int, k: int) -> WindowCodeword:
    """The codeword for a pattern: its occupied cells padded to exactly n cells.

    Cells are [j/k, (j+1)/k]; adjacent chosen cells are merged so the window
    is a union of disjoint closed intervals of total measure n/k.
    """
    occupied = sorted({min(int(math.floor(t * k)), k - 1) for t in points})
    if len(occupied) > n:
        raise ValueError("more occupied cells than window cells")
    chosen = set(occupied)
    for j in range(k):
        if len(chosen) == n:
            break
        chosen.add(j)
    runs = []
    for c in sorted(chosen):
        if runs and runs[-1][1] == c:
            runs[-1][1] = c + 1
        else:
            runs.append([c, c + 1])
    return WindowCodeword(1.0, tuple((Fraction(a, k), Fraction(b, k)) for a, b in runs))


def cell_codebook(n: int, D, patterns: int = 1000, seed: int = _rng.DEFAULT_SEED) -> CellCodebook:
    """Split [0, 1] into k = n/D cells and use every union of n cells as a codeword.

    Every codeword has measure exactly D and any n points occupy at most n
    cells, so some codeword covers every pattern. ``patterns`` random
    n-point patterns are encoded and checked with the point-covering measure.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    D = as_fraction(D)
    if not 0 < D <= 1:
        raise ValueError("D must lie in (0, 1]")
    k = n / D
    if k.denominator != 1:
        raise ValueError(f"n/D = {k} is not an integer number of cells")
    k = int(k)
    size = math.comb(k, n)
    rate = math.log2(size) / n

    rng = _rng.stream(seed)
    ok = True
    for _ in range(patterns):
        pts = rng.random(n).tolist()
        A = covering_window(pts, n, k)
        if A.measure != D or not d_pc_raw(pts, A).at_most(D):
            ok = False
            break
    return CellCodebook(n, D, k, size, rate, ok, patterns)


def bits_per_unit_time(rate_per_point: float, rate: float) -> float:
    """Bits per unit time of a rate-``rate`` process coded at ``rate_per_point`` bits per event."""
    if rate_per_point < 0 or rate < 0:
        raise ValueError("rates must be nonnegative")
    return rate * rate_per_point


def empirical_bits_per_unit_time(rate_per_point: float, rate: float, n: int, seed: int) -> float:
    """n * rate_per_point / T_tot(n) for n sampled exponential intervals."""
    total = math.fsum(sample_intervals(n, rate, seed).intervals)
    return n * rate_per_point / total
