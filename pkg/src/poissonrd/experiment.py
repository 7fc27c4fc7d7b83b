"""Constructive rate-distortion experiments on sampled sources.

Point covering uses the window codebook. The two l1 cases use a scalar
quantizer with step Delta: the floor quantizer for the one-sided measure
(it never overshoots) and a sign-magnitude floor quantizer for the
Laplacian. The rate reported for a scalar quantizer is the empirical entropy
of its output symbols.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from . import _rng
from .blahut import RDPoint
from .covering import cell_codebook, covering_window
from .distortion import d_pc_raw
from .geometry import as_fraction

EXPERIMENT_KINDS = ("point-covering", "one-sided-l1", "normalized-l1")
CSV_COLUMNS = ("D", "R_theory", "R_measured", "D_measured", "method", "n", "lambda", "seed")


def floor_residual_mean(step: float, rate: float = 1.0) -> float:
    """E[x - step * floor(x / step)] for x ~ Exp(rate)."""
    u = rate * step
    return (1.0 - u / math.expm1(u)) / rate


def step_for_distortion(D: float, rate: float = 1.0) -> float:
    """The floor-quantizer step whose normalized mean residual equals D < 1."""
    if not 0 < D < 1:
        raise ValueError("a finite step exists only for 0 < D < 1")
    hi = 1.0
    while floor_residual_mean(hi) < D:
        hi *= 2
        if hi > 700:
            raise ValueError(f"D={D} is too close to 1 for a finite step")
    u = brentq(lambda s: floor_residual_mean(s) - D, 1e-12, hi, xtol=1e-14)
    return u / rate


def empirical_entropy(symbols: Iterable) -> float:
    counts = Counter(symbols)
    total = sum(counts.values())
    return -math.fsum(c / total * math.log2(c / total) for c in counts.values())


def _point_covering(n: int, D: Fraction, samples: int, seed: int) -> tuple[float, float, str]:
    book = cell_codebook(n, D, patterns=0)
    k = book.cells
    rng = _rng.stream(seed)
    worst = Fraction(0)
    total = Fraction(0)
    for _ in range(samples):
        pts = rng.random(n).tolist()
        d = d_pc_raw(pts, covering_window(pts, n, k))
        if not d.is_finite:
            raise AssertionError("window codebook failed to cover a pattern")
        worst = max(worst, d.value)
        total += d.value
    if worst > D:
        raise AssertionError("window measure exceeds D")
    return book.rate_per_point, float(total / samples), f"cell-codebook(k={k})"


def _scalar(kind: str, rate: float, n: int, D: float, samples: int, seed: int):
    rng = _rng.stream(seed)
    size = samples * n
    mags = rng.exponential(1.0 / rate, size=size)
    if D >= 1:
        # one codeword, the all-zero reconstruction
        return 0.0, float(rate * mags.mean()), "zero-codeword"
    step = step_for_distortion(D, rate)
    idx = np.floor(mags / step)
    dist = float(rate * np.mean(mags - step * idx))
    if kind == "one-sided-l1":
        return empirical_entropy(idx.astype(np.int64).tolist()), dist, f"floor(step={step:.6g})"
    signs = np.where(rng.integers(0, 2, size=size) == 1, 1, -1)
    # zero cell keeps no sign: both signs reconstruct to 0
    symbols = (signs * idx.astype(np.int64)).tolist()
    return empirical_entropy(symbols), dist, f"sign-floor(step={step:.6g})"


def empirical_rd_experiment(kind: str, rate: float, n: int, D_grid: Sequence, samples: int,
                            seed: int = _rng.DEFAULT_SEED) -> list[RDPoint]:
    """Measured (rate, distortion) of a constructive scheme at each D.

    Each point's metadata carries the theoretical log2(1/D) as ``R_theory``.
    """
    if kind not in EXPERIMENT_KINDS:
        raise ValueError(f"no constructive scheme for {kind!r}; expected one of {EXPERIMENT_KINDS}")
    if n < 1 or samples < 1:
        raise ValueError("n and samples must be positive")
    if not rate > 0:
        raise ValueError("rate must be positive")
    out = []
    for D in D_grid:
        Dq = as_fraction(D)
        if not 0 < Dq <= 1:
            raise ValueError(f"D={D} outside (0, 1]")
        if kind == "point-covering":
            R, Dm, method = _point_covering(n, Dq, samples, seed)
        else:
            R, Dm, method = _scalar(kind, rate, n, float(Dq), samples, seed)
        out.append(RDPoint(R, Dm, {
            "D": float(Dq), "R_theory": math.log2(1 / Dq), "method": method,
            "n": n, "lambda": rate, "seed": seed,
        }))
    return out


def to_csv(points: Sequence[RDPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for p in points:
        m = p.metadata
        w.writerow([repr(m["D"]), repr(m["R_theory"]), repr(p.rate), repr(p.distortion),
                    m["method"], m["n"], repr(m["lambda"]), m["seed"]])
    return buf.getvalue()
