from fractions import Fraction as F
import itertools
import math
import random

import pytest

from poissonrd.geometry import (
    corner_simplex, hypercube, octahedron, order_simplex, sq_dist, standard_simplex,
)
from poissonrd.groups import permutation
from poissonrd.polytopes import (
    Graph, affine_extension, after, center, graph_automorphisms, hamming_l2_check, matmul,
    polytope_graph, verify_sym_equals_aut, vertex_symmetry_group,
)

h = F(1, 2)


def test_center_examples():
    assert center(hypercube(2)).vertices == {(a, b) for a in (-h, h) for b in (-h, h)}
    assert center(octahedron(3)) == octahedron(3)
    S = center(standard_simplex(3))
    assert all(sum(v) == 0 for v in S.vertices)
    assert (F(2, 3), F(-1, 3), F(-1, 3)) in S.vertices


@pytest.mark.parametrize("n", range(1, 6))
def test_simplex_symmetry_order(n):
    assert vertex_symmetry_group(standard_simplex(n)).order == math.factorial(n)


def test_symmetry_orders():
    assert vertex_symmetry_group(hypercube(3)).order == 48
    assert vertex_symmetry_group(octahedron(4)).order == 384


@pytest.mark.parametrize("n", range(1, 5))
def test_cube_and_octahedron_share_order(n):
    o = 2 ** n * math.factorial(n)
    assert vertex_symmetry_group(hypercube(n)).order == o == vertex_symmetry_group(octahedron(n)).order


def test_symmetry_search_cap():
    with pytest.raises(OverflowError):
        vertex_symmetry_group(hypercube(3), cap=10)


def test_affine_extension_examples():
    ident = affine_extension(permutation([1, 2, 3, 4]), hypercube(2))
    assert ident.matrix == ((1, 0), (0, 1)) and ident.is_isometry
    # ordered vertices (0,0),(0,1),(1,0),(1,1): the swap exchanges the middle two
    swap = affine_extension([1, 3, 2, 4], hypercube(2))
    assert swap.matrix == ((0, 1), (1, 0)) and swap.is_isometry
    assert swap.to_json() == {"matrix": [["0", "1"], ["1", "0"]], "is_isometry": True}


def test_octahedron_extensions_are_signed_permutations():
    P = octahedron(3)
    for g in vertex_symmetry_group(P):
        ext = affine_extension(g, P)
        assert ext.is_isometry
        for row in ext.matrix:
            assert sorted(abs(x) for x in row) == [0, 0, 1]


def test_affine_extension_errors():
    with pytest.raises(ValueError, match="not full-dimensional"):
        affine_extension([2, 1, 3], standard_simplex(3))
    with pytest.raises(ValueError):
        # swapping two adjacent square corners is not a symmetry
        affine_extension([2, 1, 3, 4], hypercube(2))
    with pytest.raises(ValueError):
        affine_extension([1, 2], hypercube(2))


@pytest.mark.parametrize("P", [hypercube(3), octahedron(3), corner_simplex(3), order_simplex(3)])
def test_extension_is_homomorphism(P):
    G = sorted(vertex_symmetry_group(P))
    mats = {g: affine_extension(g, P).matrix for g in G}
    rng = random.Random(4)
    for _ in range(200):
        g, k = rng.choice(G), rng.choice(G)
        assert mats[after(g, k)] == matmul(mats[g], mats[k])


def test_graph_examples():
    assert len(polytope_graph("cube", 3).edges) == 12
    assert polytope_graph("octahedron", 2).to_json() == {"m": 4, "edges": [[0, 1], [0, 2], [1, 3], [2, 3]]}
    assert polytope_graph("simplex", 3).edges == {(0, 1), (0, 2), (1, 2)}
    with pytest.raises(ValueError):
        polytope_graph("dodecahedron", 3)


def test_graph_validation_and_json():
    with pytest.raises(ValueError):
        Graph(3, frozenset([(1, 1)]))
    with pytest.raises(ValueError):
        Graph(3, frozenset([(0, 3)]))
    G = Graph(3, frozenset([(2, 0)]))
    assert G.edges == {(0, 2)}
    assert Graph.from_json(G.to_json()) == G


def test_automorphism_examples():
    K4 = Graph(4, frozenset(itertools.combinations(range(4), 2)))
    assert graph_automorphisms(K4).order == 24
    assert graph_automorphisms(polytope_graph("cube", 3)).order == 48
    assert graph_automorphisms(polytope_graph("octahedron", 3)).order == 48
    with pytest.raises(OverflowError):
        graph_automorphisms(Graph(20, frozenset()))


@pytest.mark.parametrize("family,n,order", [("octahedron", 3, 48), ("cube", 2, 8), ("cube", 3, 48)])
def test_sym_equals_aut_examples(family, n, order):
    r = verify_sym_equals_aut(family, n)
    assert r.equal and r.sym_order == r.aut_order == order


def test_sym_equals_aut_caps():
    with pytest.raises(OverflowError):
        verify_sym_equals_aut("cube", 4)
    with pytest.raises(OverflowError):
        verify_sym_equals_aut("octahedron", 5)


@pytest.mark.slow
def test_cube_four():
    r = verify_sym_equals_aut("cube", 4, slow=True)
    assert r.equal and r.sym_order == 384


@pytest.mark.parametrize("n", [1, 3, 6])
def test_hamming_l2(n):
    assert hamming_l2_check(n)


def test_hamming_range():
    with pytest.raises(ValueError):
        hamming_l2_check(11)


@pytest.mark.parametrize("n", [2, 3])
def test_automorphisms_are_exactly_isometric_permutations(n):
    G = polytope_graph("cube", n)
    V = G.labels
    adj = G.neighbours()
    auts = 0
    for p in itertools.permutations(range(G.m)):
        is_aut = all((p[j] in adj[p[i]]) == (j in adj[i]) for i in range(G.m) for j in range(i + 1, G.m))
        keeps = all(sq_dist(V[p[i]], V[p[j]]) == sq_dist(V[i], V[j])
                    for i in range(G.m) for j in range(i + 1, G.m))
        assert is_aut == keeps
        auts += is_aut
    assert auts == 2 ** n * math.factorial(n)
