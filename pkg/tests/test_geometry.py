from fractions import Fraction as F
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poissonrd.geometry import (
    Polytope, convex_weights, corner_simplex, extreme_points, hull_contains, hypercube,
    mc_volume, octahedron, order_simplex, reference_volume, standard_simplex, vector,
)


def vs(*pts):
    return frozenset(vector(p) for p in pts)


def test_order_simplex_examples():
    assert order_simplex(1).vertices == vs((0,), (1,))
    assert order_simplex(2).vertices == vs((0, 0), (0, 1), (1, 1))
    assert order_simplex(3).vertices == vs((0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1))


@pytest.mark.parametrize("n", range(1, 7))
def test_order_simplex_shape(n):
    V = order_simplex(n).vertices
    assert len(V) == n + 1
    for v in V:
        assert all(a <= b for a, b in zip(v, v[1:]))
        assert set(v) <= {0, 1}


def test_invalid_dimension():
    for make in (order_simplex, hypercube, octahedron, corner_simplex):
        with pytest.raises(ValueError):
            make(0)


def test_standard_simplex_examples():
    assert standard_simplex(2).vertices == vs((1, 0), (0, 1))
    assert standard_simplex(3, 3).vertices == vs((3, 0, 0), (0, 3, 0), (0, 0, 3))
    assert standard_simplex(1).vertices == vs((1,))
    with pytest.raises(ValueError):
        standard_simplex(2, 0)
    with pytest.raises(ValueError):
        standard_simplex(2, -1)


def test_cube_and_octahedron():
    assert hypercube(2).vertices == vs((0, 0), (0, 1), (1, 0), (1, 1))
    assert len(hypercube(3).vertices) == 8
    assert octahedron(3).vertices == vs(
        (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


def test_extreme_point_examples():
    square = hypercube(2).vertices
    assert extreme_points(square | vs((F(1, 2), F(1, 2)))) == square
    assert extreme_points(octahedron(2).vertices) == octahedron(2).vertices
    tri = order_simplex(2).vertices
    assert extreme_points(tri | vs((0, F(1, 2)))) == tri


def test_extreme_points_rejects_mixed_dimensions():
    with pytest.raises(ValueError):
        extreme_points([(0, 0), (1,)])
    with pytest.raises(ValueError):
        Polytope(frozenset([(0, 0), (1, 0, 0)]))


def test_convex_weights_reconstruct_point():
    pts = [vector(v) for v in hypercube(3).vertices]
    p = vector((F(1, 3), F(1, 2), F(1, 5)))
    w = convex_weights(p, pts)
    assert w is not None and sum(w) == 1 and min(w) >= 0
    assert tuple(sum(wi * q[k] for wi, q in zip(w, pts)) for k in range(3)) == p
    assert convex_weights((2, 0, 0), pts) is None


points2 = st.lists(
    st.tuples(st.fractions(-3, 3, max_denominator=4), st.fractions(-3, 3, max_denominator=4)),
    min_size=1, max_size=9,
)


@settings(max_examples=60, deadline=None)
@given(points2)
def test_extreme_points_properties(pts):
    E = extreme_points(pts)
    assert E <= {vector(p) for p in pts}
    assert extreme_points(E) == E
    for p in pts:
        assert hull_contains(E, p)


@settings(max_examples=40, deadline=None)
@given(st.fractions(F(1, 50), 1, max_denominator=50), st.integers(1, 8))
def test_order_simplex_volume_scales(D, n):
    assert reference_volume("order-simplex", n, D) == D ** n * reference_volume("order-simplex", n, 1)


def test_reference_volume_examples():
    assert reference_volume("cube-distortion", 3, F(1, 2)) == F(1, 8)
    assert reference_volume("order-simplex", 2, 1) == F(1, 2)
    assert reference_volume("corner-simplex", 3, 1) == F(1, 6)
    with pytest.raises(ValueError):
        reference_volume("sphere", 2, 1)


def test_reference_volumes_against_monte_carlo():
    # independent oracle: hit-or-miss in the unit cube
    def sampler(rng, k):
        return rng.random((k, 3))

    ordered = mc_volume(lambda x: (x[:, 0] < x[:, 1]) & (x[:, 1] < x[:, 2]), sampler, 1.0, 200_000, 1)
    corner = mc_volume(lambda x: x.sum(axis=1) <= 1, sampler, 1.0, 200_000, 2)
    assert ordered.within(float(reference_volume("order-simplex", 3, 1)))
    assert corner.within(float(reference_volume("corner-simplex", 3, 1)))


def test_mc_volume_workers_are_reproducible():
    ind = lambda x: x[:, 0] + x[:, 1] <= 1
    samp = lambda rng, k: rng.random((k, 2))
    a = mc_volume(ind, samp, 1.0, 50_000, 7, workers=3)
    b = mc_volume(ind, samp, 1.0, 50_000, 7, workers=3)
    assert a == b
    assert a.within(0.5)


def test_polytope_json_round_trip():
    P = order_simplex(3).scale(F(1, 3))
    obj = P.to_json()
    assert obj["dim"] == 3
    assert obj["vertices"][1] == ["0", "0", "1/3"]
    assert Polytope.from_json(obj) == P
    with pytest.raises(ValueError):
        Polytope.from_json({"dim": 2, "vertices": [["0", "0", "1"]]})


def test_ordering_is_translation_invariant():
    P = hypercube(3)
    Q = P.translate((F(-1, 2),) * 3)
    shifted = tuple(tuple(a - F(1, 2) for a in v) for v in P.ordered())
    assert Q.ordered() == shifted


def test_contains():
    assert corner_simplex(3).contains((F(1, 4), F(1, 4), F(1, 4)))
    assert not corner_simplex(3).contains((F(1, 2), F(1, 2), F(1, 4)))
