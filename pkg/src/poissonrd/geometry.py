"""Exact-rational points and polytopes.

Vectors are plain tuples of :class:`fractions.Fraction`. A :class:`Polytope`
is stored by its (finite) vertex set; the convex hull is implicit. Hull
membership and extreme-point filtering are decided by an exact phase-one
simplex over the rationals, so no tolerance ever enters a symmetry decision.

Monte-Carlo helpers at the bottom work in double precision and are kept
separate from the exact routines.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _rng

Vector = tuple[Fraction, ...]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float) and not math.isfinite(x):
        raise ValueError(f"non-finite coordinate {x!r}")
    return Fraction(x)


def vector(coords: Iterable) -> Vector:
    v = tuple(as_fraction(c) for c in coords)
    if not v:
        raise ValueError("vectors must have dimension >= 1")
    return v


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def sq_dist(u: Vector, v: Vector) -> Fraction:
    return sum(((a - b) ** 2 for a, b in zip(u, v)), Fraction(0))


def centroid(points: Sequence[Vector]) -> Vector:
    m = len(points)
    return tuple(sum(col, Fraction(0)) / m for col in zip(*points))


# --------------------------------------------------------------------------
# exact linear feasibility


def _phase_one(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Find x >= 0 with A x = b, or None if infeasible.

    Tableau phase-one simplex with one artificial per row and Bland's rule,
    which guarantees termination without any perturbation.
    """
    rows, cols = len(A), len(A[0])
    width = cols + rows
    T = []
    for i in range(rows):
        s = -1 if b[i] < 0 else 1
        row = [s * a for a in A[i]]
        row += [Fraction(1) if j == i else Fraction(0) for j in range(rows)]
        row.append(s * b[i])
        T.append(row)
    basis = [cols + i for i in range(rows)]
    # reduced costs of the phase-one objective sum(artificials)
    z = [-sum((T[i][j] for i in range(rows)), Fraction(0)) for j in range(cols)]
    z += [Fraction(0)] * rows
    z.append(-sum((T[i][-1] for i in range(rows)), Fraction(0)))

    while True:
        enter = next((j for j in range(width) if z[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(rows):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # unbounded cannot happen in phase one
            raise ArithmeticError("phase-one simplex reported unbounded")
        r = best[1]
        piv = T[r][enter]
        T[r] = [a / piv for a in T[r]]
        for i in range(rows):
            if i != r and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [a - f * c for a, c in zip(T[i], T[r])]
        if z[enter] != 0:
            f = z[enter]
            z = [a - f * c for a, c in zip(z, T[r])]
        basis[r] = enter

    if z[-1] != 0:
        return None
    x = [Fraction(0)] * cols
    for i, j in enumerate(basis):
        if j < cols:
            x[j] = T[i][-1]
        elif T[i][-1] != 0:
            return None
    return x


def convex_weights(point: Sequence, points: Sequence[Sequence]) -> list[Fraction] | None:
    """Weights t_i >= 0, sum 1, with sum t_i p_i = point; None when outside the hull."""
    p = vector(point)
    pts = [vector(q) for q in points]
    if not pts:
        return None
    n = len(p)
    if any(len(q) != n for q in pts):
        raise ValueError("mixed dimensions")
    A = [[q[k] for q in pts] for k in range(n)]
    A.append([Fraction(1)] * len(pts))
    return _phase_one(A, list(p) + [Fraction(1)])


def hull_contains(points: Iterable[Sequence], point: Sequence) -> bool:
    return convex_weights(point, list(points)) is not None


def extreme_points(points: Iterable[Sequence]) -> frozenset[Vector]:
    """The points that are not convex combinations of the others."""
    V = sorted({vector(v) for v in points})
    if not V:
        raise ValueError("empty point set")
    n = len(V[0])
    if any(len(v) != n for v in V):
        raise ValueError("mixed dimensions")
    keep = []
    for i, v in enumerate(V):
        others = V[:i] + V[i + 1:]
        if not others or convex_weights(v, others) is None:
            keep.append(v)
    return frozenset(keep)


def affine_rank(points: Sequence[Vector]) -> int:
    """Dimension of the affine hull."""
    if len(points) < 2:
        return 0
    base = points[0]
    return rank([sub(p, base) for p in points[1:]])


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    M = [list(r) for r in rows]
    if not M:
        return 0
    r = 0
    ncols = len(M[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, len(M)):
            if M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == len(M):
            break
    return r


# --------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class Polytope:
    """Convex hull of a finite vertex set with exact rational coordinates."""

    vertices: frozenset

    def __post_init__(self):
        V = frozenset(vector(v) for v in self.vertices)
        if not V:
            raise ValueError("a polytope needs at least one vertex")
        dims = {len(v) for v in V}
        if len(dims) != 1:
            raise ValueError(f"vertices of mixed dimensions {sorted(dims)}")
        object.__setattr__(self, "vertices", V)

    @property
    def dim(self) -> int:
        return len(next(iter(self.vertices)))

    def ordered(self) -> tuple[Vector, ...]:
        """Vertices in lexicographic order; this fixes vertex indices everywhere."""
        return tuple(sorted(self.vertices))

    def reduced(self) -> "Polytope":
        return Polytope(extreme_points(self.vertices))

    def contains(self, point: Sequence) -> bool:
        return hull_contains(self.vertices, point)

    def translate(self, shift: Sequence) -> "Polytope":
        s = vector(shift)
        return Polytope(frozenset(tuple(a + b for a, b in zip(v, s)) for v in self.vertices))

    def scale(self, r) -> "Polytope":
        r = as_fraction(r)
        return Polytope(frozenset(tuple(r * a for a in v) for v in self.vertices))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "vertices": [[format_fraction(a) for a in v] for v in self.ordered()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Polytope":
        P = cls(frozenset(tuple(Fraction(a) for a in v) for v in obj["vertices"]))
        if "dim" in obj and obj["dim"] != P.dim:
            raise ValueError(f"declared dim {obj['dim']} but vertices have dim {P.dim}")
        return P


def _check_dim(n) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"invalid dimension {n!r}")
    return n


def _unit(n: int, i: int, value=1) -> Vector:
    return tuple(Fraction(value) if k == i else Fraction(0) for k in range(n))


def order_simplex(n: int) -> Polytope:
    """Closure of {0 < t_1 < ... < t_n < 1}: vertices (0,..,0,1,..,1)."""
    _check_dim(n)
    return Polytope(frozenset(
        tuple(Fraction(int(i >= n - k)) for i in range(n)) for k in range(n + 1)
    ))


def standard_simplex(n: int, r=1) -> Polytope:
    """{x >= 0, sum x = r}, vertices r e_i."""
    _check_dim(n)
    r = as_fraction(r)
    if r <= 0:
        raise ValueError("simplex radius must be positive")
    return Polytope(frozenset(_unit(n, i, r) for i in range(n)))


def corner_simplex(n: int) -> Polytope:
    """{x >= 0, sum x <= 1}: the origin plus the unit vectors."""
    _check_dim(n)
    return Polytope(frozenset([tuple([Fraction(0)] * n)] + [_unit(n, i) for i in range(n)]))


def hypercube(n: int) -> Polytope:
    _check_dim(n)
    return Polytope(frozenset(
        tuple(Fraction((k >> (n - 1 - i)) & 1) for i in range(n)) for k in range(2 ** n)
    ))


def octahedron(n: int) -> Polytope:
    _check_dim(n)
    return Polytope(frozenset(_unit(n, i, s) for i in range(n) for s in (1, -1)))


SHAPES = ("cube-distortion", "order-simplex", "corner-simplex")


def reference_volume(shape: str, n: int, D=1) -> Fraction:
    """Exact volume of a canonical shape scaled by D.

    ``cube-distortion`` is any point-covering distortion set (a product of n
    copies of a measure-D window): D^n. Both simplices have volume D^n / n!.
    """
    _check_dim(n)
    D = as_fraction(D)
    if not 0 < D <= 1:
        raise ValueError("D must lie in (0, 1]")
    if shape == "cube-distortion":
        return D ** n
    if shape in ("order-simplex", "corner-simplex"):
        return D ** n / math.factorial(n)
    raise ValueError(f"unknown shape {shape!r}; expected one of {SHAPES}")


# --------------------------------------------------------------------------
# hit-or-miss Monte Carlo


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    std_error: float
    hits: int
    samples: int

    def within(self, target: float, k: float = 3.0) -> bool:
        return abs(self.estimate - target) <= k * self.std_error


def mc_volume(
    indicator: Callable[[np.ndarray], np.ndarray],
    sampler: Callable[[np.random.Generator, int], np.ndarray],
    ambient_volume: float,
    samples: int,
    seed: int,
    workers: int = 1,
    batch: int = 200_000,
) -> MCEstimate:
    """Volume of {indicator} inside an ambient region sampled uniformly by ``sampler``."""
    if samples < 1:
        raise ValueError("samples must be positive")

    def count(worker: int, k: int) -> int:
        rng = _rng.stream(seed, worker)
        hits = 0
        while k > 0:
            m = min(k, batch)
            hits += int(np.count_nonzero(indicator(sampler(rng, m))))
            k -= m
        return hits

    shares = _rng.split(samples, workers)
    if workers == 1:
        hits = count(0, samples)
    else:
        with ThreadPoolExecutor(workers) as ex:
            hits = sum(ex.map(count, range(workers), shares))
    p = hits / samples
    se = math.sqrt(max(p * (1 - p), 0.0) / samples) * ambient_volume
    return MCEstimate(p * ambient_volume, se, hits, samples)
