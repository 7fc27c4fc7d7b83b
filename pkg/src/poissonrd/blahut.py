"""Blahut-Arimoto rate-distortion computation on discretized sources.

The slope parameter ``beta`` is the magnitude of the slope of the R(D) curve
in nats per unit distortion at the returned point. Pairs with infinite
distortion (the one-sided measure's forbidden reconstructions) get zero
weight in the exponential kernel, so the conditional distribution never
puts mass on them, including at initialization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

LN2 = math.log(2.0)


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class RDPoint:
    rate: float  # bits per symbol
    distortion: float
    metadata: dict = field(default_factory=dict, compare=False, hash=False)


@dataclass(frozen=True)
class DiscretizedSource:
    support: np.ndarray
    pmf: np.ndarray
    kind: str  # "l1", "one-sided-l1" or "hamming"
    rate: float = 1.0

    def __post_init__(self):
        support = np.asarray(self.support, dtype=float)
        pmf = np.asarray(self.pmf, dtype=float)
        if support.shape != pmf.shape or support.ndim != 1:
            raise ValueError("support and pmf must be 1-d arrays of equal length")
        if np.any(pmf < 0) or abs(pmf.sum() - 1.0) > 1e-12:
            raise ValueError("pmf must be nonnegative and sum to 1")
        if self.kind not in ("l1", "one-sided-l1", "hamming"):
            raise ValueError(f"unknown distortion kind {self.kind!r}")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "pmf", pmf)


def _grid_source(grid: np.ndarray, weights: np.ndarray, kind: str, rate: float) -> DiscretizedSource:
    pmf = weights / weights.sum()
    pmf = pmf / pmf.sum()
    return DiscretizedSource(grid, pmf, kind, rate)


def discretize_laplacian(rate: float = 1.0, truncation: float | None = None,
                         step: float | None = None) -> DiscretizedSource:
    """Laplacian(rate) on the symmetric grid step * {-N..N}, N = truncation/step."""
    truncation = 8.0 / rate if truncation is None else truncation
    step = 0.01 / rate if step is None else step
    N = int(round(truncation / step))
    grid = step * np.arange(-N, N + 1)
    return _grid_source(grid, np.exp(-rate * np.abs(grid)), "l1", rate)


def discretize_exponential(rate: float = 1.0, truncation: float | None = None,
                           step: float | None = None) -> DiscretizedSource:
    """Exponential(rate) on the grid step * {0..N}, N = truncation/step."""
    truncation = 12.0 / rate if truncation is None else truncation
    step = 0.01 / rate if step is None else step
    N = int(round(truncation / step))
    grid = step * np.arange(0, N + 1)
    return _grid_source(grid, np.exp(-rate * grid), "one-sided-l1", rate)


def bernoulli(p: float = 0.5) -> DiscretizedSource:
    return DiscretizedSource(np.array([0.0, 1.0]), np.array([1.0 - p, p]), "hamming")


def distortion_matrix(src: DiscretizedSource, recon: np.ndarray | None = None) -> np.ndarray:
    """d[i, j] between source letter i and reconstruction j (inf = forbidden)."""
    x = src.support[:, None]
    y = (src.support if recon is None else np.asarray(recon, dtype=float))[None, :]
    if src.kind == "l1":
        return src.rate * np.abs(x - y)
    if src.kind == "one-sided-l1":
        diff = x - y
        return np.where(diff >= 0, src.rate * diff, np.inf)
    return (x != y).astype(float)


class _Kernel:
    """exp(-beta * d) with each row shifted by its smallest distortion."""

    def __init__(self, src: DiscretizedSource, recon, beta: float):
        d = distortion_matrix(src, recon)
        finite = np.isfinite(d)
        if not finite.any(axis=1).all():
            bad = src.support[~finite.any(axis=1)][0]
            raise ValueError(f"source letter {bad} has no finite-distortion reconstruction")
        d0 = np.where(finite, d, 0.0)
        self.dmin = np.where(finite, d, np.inf).min(axis=1)
        self.K = np.where(finite, np.exp(-beta * (d0 - self.dmin[:, None])), 0.0)
        self.KD = self.K * d0
        self.p = src.pmf
        self.beta = beta
        self.dmax = float(np.min(np.where(finite, d0, np.inf).T @ self.p)) if finite.all() else \
            float(np.min(np.where(finite.all(axis=0), self.p @ d0, np.inf)))


def _iterate(kern: _Kernel, q: np.ndarray, max_iters: int, tol: float):
    p, K, KD, beta = kern.p, kern.K, kern.KD, kern.beta
    prev = None
    for it in range(1, max_iters + 1):
        c = K @ q
        live = p > 0
        D = float(np.sum(p[live] / c[live] * (KD @ q)[live]))
        R = (-beta * D - float(np.sum(p[live] * (np.log(c[live]) - beta * kern.dmin[live])))) / LN2
        if prev is not None and abs(R - prev) < tol:
            return max(R, 0.0), D, it, q
        prev = R
        ratio = np.zeros_like(c)
        ratio[live] = p[live] / c[live]
        q = q * (K.T @ ratio)
        q /= q.sum()
    raise ConvergenceError(f"no convergence within {max_iters} iterations (last R={prev})")


def blahut_arimoto(src: DiscretizedSource, recon: np.ndarray | None = None, slope: float = 1.0,
                   max_iters: int = 20_000, tol: float = 1e-7,
                   init: np.ndarray | None = None) -> RDPoint:
    """One point of the discretized rate-distortion curve at slope -``slope``.

    Stops when successive rate iterates differ by less than ``tol`` bits.
    """
    if not slope > 0:
        raise ValueError("slope parameter must be positive")
    kern = _Kernel(src, recon, slope)
    m = kern.K.shape[1]
    q = np.full(m, 1.0 / m) if init is None else _floor(np.asarray(init, float))
    R, D, iters, q = _iterate(kern, q, max_iters, tol)
    return RDPoint(R, D, {"iters": iters, "tol": tol, "slope": slope, "method": "blahut-arimoto",
                          "output_pmf": q})


def _floor(q: np.ndarray) -> np.ndarray:
    # multiplicative updates never revive a zero entry
    q = np.maximum(q, 1e-12 / len(q))
    return q / q.sum()


def rate_at_distortion(src: DiscretizedSource, target: float, recon: np.ndarray | None = None,
                       tol_D: float = 1e-4, max_runs: int = 40, **kw) -> RDPoint:
    """Search the slope so that Blahut-Arimoto lands at distortion ``target``.

    Uses a safeguarded secant iteration in (log slope, log D). For targets at
    or above the largest useful distortion (a constant reconstruction) the
    curve is zero; that branch runs at a sub-critical slope, where the
    iteration converges to the zero-rate solution.
    """
    if not target > 0:
        raise ValueError("target distortion must be positive")
    probe = _Kernel(src, recon, 1.0)
    dmax = probe.dmax
    if target >= dmax:
        pt = blahut_arimoto(src, recon, slope=0.5 / dmax, **kw)
        pt.metadata["target"] = target
        pt.metadata["dmax"] = dmax
        return pt

    lo = hi = None  # (log beta, log D - log target) bracketing the root
    beta = 1.0 / target
    q = None
    best = None
    history = []
    for _ in range(max_runs):
        pt = blahut_arimoto(src, recon, slope=beta, init=q, **kw)
        q = pt.metadata["output_pmf"]
        err = math.log(pt.distortion) - math.log(target)
        history.append((math.log(beta), err))
        if best is None or abs(pt.distortion - target) < abs(best.distortion - target):
            best = pt
        if abs(pt.distortion - target) <= tol_D:
            break
        lb = math.log(beta)
        if err > 0:  # distortion too large: need a steeper slope
            lo = (lb, err) if lo is None or lb > lo[0] else lo
        else:
            hi = (lb, err) if hi is None or lb < hi[0] else hi
        if len(history) >= 2 and history[-1][1] != history[-2][1]:
            (b0, e0), (b1, e1) = history[-2], history[-1]
            nxt = b1 - e1 * (b1 - b0) / (e1 - e0)
        else:
            nxt = lb + err  # D roughly proportional to 1/beta
        if lo is not None and hi is not None and not lo[0] < nxt < hi[0]:
            nxt = 0.5 * (lo[0] + hi[0])
        beta = math.exp(nxt)
    else:
        raise ConvergenceError(f"slope search missed D={target} (closest {best.distortion})")
    best.metadata["target"] = target
    return best
