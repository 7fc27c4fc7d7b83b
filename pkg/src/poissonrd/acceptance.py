"""The acceptance suite: eleven end-to-end checks with their tolerances and time limits.

Each check returns ``(passed, detail)``. A criterion passes only when its
check passes within the stated wall-clock limit.
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import _rng
from .blahut import discretize_exponential, discretize_laplacian, rate_at_distortion
from .covering import cell_codebook, covering_lower_bound
from .distortion import (
    WindowCodeword, coordinate_condition, counting_condition, d_q_raw,
    distortion_set_volume_mc, queueing_case_study_n2,
)
from .geometry import corner_simplex, hypercube, octahedron, order_simplex, reference_volume
from .groups import (
    action_matrix, compose, hyperoctahedral_group, is_normal, reflection_group,
    semidirect_verify, symmetric_group,
)
from .polytopes import (
    affine_extension, after, family_polytope, hamming_l2_check, matmul, verify_sym_equals_aut,
    vertex_symmetry_group,
)
from .symmetrize import run, standard_start

LOG2E = math.log2(math.e)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:>2}. {self.title}: {self.detail} ({self.seconds:.1f}s, limit {self.limit:g}s)"


def _o_order(n: int) -> int:
    return 2 ** n * math.factorial(n)


def covering_counts(slow: bool = False):
    bad = []
    for shape in ("cube", "order-simplex"):
        for n in range(1, 11):
            for D in (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)):
                b = covering_lower_bound(shape, n, D)
                if b.count != (1 / D) ** n or abs(b.rate_per_point - math.log2(1 / D)) > 1e-12:
                    bad.append((shape, n, D))
    return not bad, f"60 cases, {len(bad)} mismatches"


def ba_log_rate(slow: bool = False):
    worst = 0.0
    tail = 0.0
    for src in (discretize_laplacian(1.0), discretize_exponential(1.0)):
        for D in (0.2, 0.4, 0.5, 0.8):
            p = rate_at_distortion(src, D)
            worst = max(worst, abs(p.rate - math.log2(1 / D)))
        tail = max(tail, rate_at_distortion(src, 1.0).rate)
    return worst <= 0.05 and tail <= 1e-3, f"max |R - log2(1/D)| = {worst:.4f} bits, R(1) = {tail:.2e}"


def mc_volumes(slow: bool = False):
    samples = 10 ** 6
    cases = []
    for n in (2, 3):
        for D in (0.3, 0.5):
            window = WindowCodeword(1.0, ((Fraction(0), Fraction(D)),))
            cases.append(("point-covering", window, D, n, float(reference_volume("cube-distortion", n, D))))
            cases.append(("queueing", [0.0] * n, D, n, float(reference_volume("order-simplex", n, D))))
    cases.append(("queueing", [0.1, 0.3], 0.5, 2, float(reference_volume("order-simplex", 2, 0.5))))
    worst = 0.0
    for k, (kind, cw, D, n, target) in enumerate(cases):
        est = distortion_set_volume_mc(kind, cw, D, n, samples, _rng.DEFAULT_SEED + k)
        worst = max(worst, abs(est.estimate - target) / est.std_error)
    return worst <= 3.0, f"{len(cases)} volumes, worst deviation {worst:.2f} standard errors"


def case_study(slow: bool = False):
    xhat = (Fraction(1, 10), Fraction(3, 10))
    cs = queueing_case_study_n2(xhat, Fraction(1, 2))
    grid = [Fraction(2 * i + 1, 400) for i in range(200)]
    checked = mismatches = 0
    for i, t1 in enumerate(grid):
        for t2 in grid[i:]:
            general = d_q_raw((t1, t2), xhat)
            piecewise = cs.distortion((t1, t2))
            if general.is_finite or piecewise.is_finite:
                checked += 1
                if general.value != piecewise.value:
                    mismatches += 1
    areas_ok = all(
        queueing_case_study_n2(xhat, D).area == D * D / 2
        for D in (Fraction(1, 20), Fraction(1, 10), Fraction(3, 20), Fraction(1, 5))
    )
    worked_area = cs.area == Fraction(1, 8)
    ok = mismatches == 0 and checked > 0 and areas_ok and worked_area
    return ok, f"{checked} finite grid points, {mismatches} mismatches; small-D areas exact: {areas_ok}"


def counting_equivalence(slow: bool = False):
    rng = _rng.stream(_rng.DEFAULT_SEED)
    exceptions = finite = 0
    pairs = 10 ** 5
    for k in range(pairs):
        n = int(rng.integers(1, 7))
        if k % 2:
            # coarse lattice so that ties occur
            t = sorted(rng.integers(0, 8, n).tolist())
            x = sorted(rng.integers(0, 8, n).tolist())
        else:
            t = sorted(rng.random(n).tolist())
            x = sorted(rng.random(n).tolist())
        a, b = counting_condition(t, x), coordinate_condition(t, x)
        exceptions += a != b
        finite += a
    return exceptions == 0, f"{pairs} pairs ({finite} finite), {exceptions} exceptions"


def group_structure(slow: bool = False):
    orders = [hyperoctahedral_group(n).order for n in range(1, 6)]
    orders_ok = orders == [_o_order(n) for n in range(1, 6)]
    semi = all(
        semidirect_verify(hyperoctahedral_group(n), reflection_group(n), symmetric_group(n)).all
        for n in range(1, 5)
    )
    s2 = symmetric_group(2)
    not_normal = not is_normal(s2, hyperoctahedral_group(2))
    ok = orders_ok and semi and not_normal
    return ok, f"|O_n| = {orders}, semidirect n<=4: {semi}, S_2 normal in O_2: {not not_normal}"


def sym_equals_aut(slow: bool = False):
    cases = [("octahedron", n) for n in range(1, 5)] + [("cube", n) for n in range(1, 4)]
    if slow:
        cases.append(("cube", 4))
    bad = []
    for fam, n in cases:
        r = verify_sym_equals_aut(fam, n, slow=slow)
        if not (r.equal and r.sym_order == r.aut_order == _o_order(n)):
            bad.append((fam, n))
    note = "" if slow else " (cube n=4 needs --slow)"
    return not bad, f"{len(cases)} cases equal, {len(bad)} failures{note}"


def hamming_paths(slow: bool = False):
    results = [hamming_l2_check(n) for n in range(1, 7)]
    return all(results), f"n=1..6: {results}"


def symmetrization(slow: bool = False):
    notes = []
    ok = True
    for n in (2, 3, 4):
        a, b = standard_start(n)
        tr = run(a, b, max_steps=8)
        fa, fb = tr.final
        good = (
            tr.terminated and tr.step_count == 2
            and fa.polytope.vertices == hypercube(n).vertices
            and fb.polytope.vertices == octahedron(n).vertices
            and tr.final_orders == [_o_order(n)] * 2
        )
        ok &= good
        notes.append(f"n={n}: {tr.step_count} steps, orders {tr.final_orders}")
    return ok, "; ".join(notes)


def achievability(slow: bool = False):
    notes = []
    ok = True
    for n, D in ((16, Fraction(1, 4)), (32, Fraction(1, 8))):
        book = cell_codebook(n, D, patterns=10 ** 4)
        limit = math.log2(1 / D) + LOG2E + 0.2
        ok &= book.rate_per_point <= limit and book.verified_cover
        notes.append(f"n={n}: {book.rate_per_point:.3f} <= {limit:.3f}, cover {book.verified_cover}")
    return ok, "; ".join(notes)


def orthogonal_extension(slow: bool = False):
    rng = _rng.stream(_rng.DEFAULT_SEED)
    elements = pairs = 0
    ok = True
    polys = []
    for n in (1, 2, 3):
        polys += [hypercube(n), octahedron(n), corner_simplex(n), order_simplex(n)]
    for P in polys:
        G = sorted(vertex_symmetry_group(P).elements)
        mats = {}
        for g in G:
            ext = affine_extension(g, P)
            ok &= ext.is_isometry
            mats[g] = ext.matrix
        elements += len(G)
        for _ in range(1000):
            g, h = (G[int(i)] for i in rng.integers(0, len(G), 2))
            ok &= mats[after(g, h)] == matmul(mats[g], mats[h])
            pairs += 1
    # the signed-permutation matrices compose the same way
    O3 = sorted(hyperoctahedral_group(3).elements)
    for _ in range(1000):
        g, h = (O3[int(i)] for i in rng.integers(0, len(O3), 2))
        ok &= bool(np.array_equal(action_matrix(compose(g, h)), action_matrix(g) @ action_matrix(h)))
    return ok, f"{elements} elements orthogonal, {pairs} homomorphism pairs"


CRITERIA: list[tuple[int, str, float, Callable]] = [
    (1, "covering-count converse", 1, covering_counts),
    (2, "R(D) = log2(1/D) by Blahut-Arimoto", 300, ba_log_rate),
    (3, "distortion-set volumes by Monte Carlo", 60, mc_volumes),
    (4, "two-event queueing case study", 5, case_study),
    (5, "counting vs coordinate finiteness", 10, counting_equivalence),
    (6, "hyperoctahedral group structure", 30, group_structure),
    (7, "vertex symmetries equal graph automorphisms", 120, sym_equals_aut),
    (8, "path length = Hamming = squared l2 on the cube", 10, hamming_paths),
    (9, "symmetrization terminates in two steps", 60, symmetrization),
    (10, "window codebook overhead", 60, achievability),
    (11, "symmetries extend to orthogonal maps", 30, orthogonal_extension),
]


def run_criterion(number: int, slow: bool = False) -> CriterionResult:
    num, title, limit, check = next(c for c in CRITERIA if c[0] == number)
    start = time.perf_counter()
    try:
        ok, detail = check(slow)
    except Exception as exc:  # reported as a failure line, not a crash
        ok, detail = False, f"error: {type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if elapsed > limit:
        ok = False
        detail += " [time limit exceeded]"
    return CriterionResult(num, title, bool(ok), detail, elapsed, limit)


def run_all(slow: bool = False, only=None, out=sys.stdout) -> list[CriterionResult]:
    results = []
    for num, *_ in CRITERIA:
        if only and num not in only:
            continue
        r = run_criterion(num, slow)
        results.append(r)
        if out is not None:
            print(r.line(), file=out, flush=True)
    return results
