"""Symmetry groups of polytopes, polytope graphs and their automorphisms.

Vertex indices always refer to ``Polytope.ordered()``. A vertex permutation
g is stored as a :class:`SignedPermutation` with positive images and sends
vertex i to vertex ``g.images[i] - 1``. Centering is a translation, so it
leaves the index order unchanged.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .geometry import (
    Polytope, affine_rank, centroid, format_fraction, hypercube, octahedron, sq_dist,
    standard_simplex,
)
from .groups import FiniteGroup, SignedPermutation, permutation

GRAPH_CAP = int(os.environ.get("POISSONRD_GRAPH_CAP", 16))
SEARCH_CAP = int(os.environ.get("POISSONRD_SEARCH_CAP", 10**6))
POLYTOPE_FAMILIES = ("cube", "octahedron", "simplex")


def center(P: Polytope) -> Polytope:
    c = centroid(P.ordered())
    return P.translate(tuple(-x for x in c))


def family_polytope(family: str, n: int) -> Polytope:
    if family == "cube":
        return hypercube(n)
    if family == "octahedron":
        return octahedron(n)
    if family == "simplex":
        return standard_simplex(n, 1)
    raise ValueError(f"unknown polytope family {family!r}; expected one of {POLYTOPE_FAMILIES}")


def after(g: SignedPermutation, h: SignedPermutation) -> SignedPermutation:
    """Vertex permutation i -> g(h(i))."""
    gi = g.images
    return SignedPermutation(tuple(gi[x - 1] for x in h.images))


def _permutation_group(perms: list[tuple[int, ...]], m: int, label: str) -> FiniteGroup:
    return FiniteGroup(frozenset(permutation([p + 1 for p in perm]) for perm in perms), m, label)


def _backtrack(m: int, order: list[int], candidates, consistent, cap: int) -> list[tuple[int, ...]]:
    """All bijections on range(m) built vertex by vertex in ``order``."""
    found = []
    img = [-1] * m
    used = [False] * m
    nodes = 0

    def rec(k: int):
        nonlocal nodes
        if k == m:
            found.append(tuple(img))
            return
        v = order[k]
        for w in candidates(v):
            if used[w]:
                continue
            nodes += 1
            if nodes > cap:
                raise OverflowError(f"symmetry search exceeded {cap} nodes")
            if all(consistent(v, w, u, img[u]) for u in order[:k]):
                img[v] = w
                used[w] = True
                rec(k + 1)
                used[w] = False
                img[v] = -1

    rec(0)
    return found


def distance_matrix(P: Polytope) -> list[list[Fraction]]:
    V = P.ordered()
    return [[sq_dist(a, b) for b in V] for a in V]


def vertex_symmetry_group(P: Polytope, cap: int | None = None) -> FiniteGroup:
    """Vertex permutations preserving every pairwise squared distance."""
    Pc = center(P)
    Dm = distance_matrix(Pc)
    m = len(Dm)
    profile = [tuple(sorted(row)) for row in Dm]
    cands = {v: [w for w in range(m) if profile[w] == profile[v]] for v in range(m)}
    perms = _backtrack(
        m, list(range(m)), cands.__getitem__,
        lambda v, w, u, fu: Dm[v][u] == Dm[w][fu],
        SEARCH_CAP if cap is None else cap,
    )
    return _permutation_group(perms, m, "Sym")


def _solve(A: list[list[Fraction]], B: list[list[Fraction]]) -> list[list[Fraction]]:
    """X with A X = B for square invertible A (Gauss-Jordan over the rationals)."""
    n = len(A)
    M = [list(A[i]) + list(B[i]) for i in range(n)]
    for c in range(n):
        piv = next(i for i in range(c, n) if M[i][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [x / p for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return [row[n:] for row in M]


@dataclass(frozen=True)
class AffineExtension:
    matrix: tuple[tuple[Fraction, ...], ...]
    is_isometry: bool

    def to_json(self) -> dict:
        return {"matrix": [[format_fraction(x) for x in row] for row in self.matrix],
                "is_isometry": self.is_isometry}


def _spanning_rows(V: Sequence[tuple]) -> list[int]:
    chosen: list[int] = []
    rows: list[list[Fraction]] = []
    n = len(V[0])
    for i, v in enumerate(V):
        # incremental elimination against the rows kept so far
        r = list(v)
        for basis, lead in rows:
            if r[lead] != 0:
                f = r[lead] / basis[lead]
                r = [a - f * b for a, b in zip(r, basis)]
        lead = next((k for k, x in enumerate(r) if x != 0), None)
        if lead is not None:
            rows.append((r, lead))
            chosen.append(i)
            if len(chosen) == n:
                break
    return chosen


def affine_extension(g: SignedPermutation | Sequence[int], P: Polytope) -> AffineExtension:
    """The linear map M with M x_i = x_g(i) on the centered vertices."""
    if not isinstance(g, SignedPermutation):
        g = permutation(g)
    V = center(P).ordered()
    n = P.dim
    if g.n != len(V):
        raise ValueError(f"permutation acts on {g.n} points but the polytope has {len(V)} vertices")
    k = affine_rank(list(V))
    if k < n:
        raise ValueError(
            f"polytope is not full-dimensional: its vertices span an affine subspace of "
            f"dimension {k} in R^{n}, so the extension is not unique"
        )
    img = [x - 1 for x in g.images]
    idx = _spanning_rows(V)
    # M X = Y column-wise, i.e. X^T M^T = Y^T with rows of X^T the vertices
    Mt = _solve([list(V[i]) for i in idx], [list(V[img[i]]) for i in idx])
    M = tuple(tuple(Mt[c][r] for c in range(n)) for r in range(n))
    for i, v in enumerate(V):
        mv = tuple(sum((M[r][c] * v[c] for c in range(n)), Fraction(0)) for r in range(n))
        if mv != V[img[i]]:
            raise ValueError("the vertex permutation does not extend to a linear map")
    ident = all(
        sum((M[k][r] * M[k][c] for k in range(n)), Fraction(0)) == (1 if r == c else 0)
        for r in range(n) for c in range(n)
    )
    return AffineExtension(M, ident)


def matmul(A, B) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(
        tuple(sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(len(B[0])))
        for i in range(len(A))
    )


# --------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class Graph:
    m: int
    edges: frozenset
    labels: tuple | None = None

    def __post_init__(self):
        E = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise ValueError("self-loops are not allowed")
            if not (0 <= i < self.m and 0 <= j < self.m):
                raise ValueError(f"edge {e} out of range for {self.m} vertices")
            E.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(E))
        if self.labels is not None and len(self.labels) != self.m:
            raise ValueError("one label per vertex")

    def neighbours(self) -> list[set[int]]:
        adj = [set() for _ in range(self.m)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def to_json(self) -> dict:
        return {"m": self.m, "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_json(cls, obj: dict) -> "Graph":
        return cls(int(obj["m"]), frozenset(tuple(e) for e in obj["edges"]))


def polytope_graph(family: str, n: int) -> Graph:
    """Vertex-edge graph from the edge-length characterization of each family."""
    P = family_polytope(family, n)
    V = P.ordered()
    edge_sq = {"cube": 1, "octahedron": 2, "simplex": None}[family]
    E = frozenset(
        (i, j) for i in range(len(V)) for j in range(i + 1, len(V))
        if edge_sq is None or sq_dist(V[i], V[j]) == edge_sq
    )
    return Graph(len(V), E, V)


def _bfs_order(adj: list[set[int]]) -> list[int]:
    m = len(adj)
    order: list[int] = []
    seen = [False] * m
    for s in sorted(range(m), key=lambda v: (-len(adj[v]), v)):
        if seen[s]:
            continue
        seen[s] = True
        q = deque([s])
        while q:
            v = q.popleft()
            order.append(v)
            for w in sorted(adj[v]):
                if not seen[w]:
                    seen[w] = True
                    q.append(w)
    return order


def graph_automorphisms(G: Graph, cap: int | None = None) -> FiniteGroup:
    """Vertex permutations preserving adjacency and nonadjacency."""
    cap = GRAPH_CAP if cap is None else cap
    if G.m > cap:
        raise OverflowError(f"graph has {G.m} vertices, above the cap of {cap}")
    adj = G.neighbours()
    deg = [len(a) for a in adj]
    by_deg = {v: [w for w in range(G.m) if deg[w] == deg[v]] for v in range(G.m)}
    perms = _backtrack(
        G.m, _bfs_order(adj), by_deg.__getitem__,
        lambda v, w, u, fu: (u in adj[v]) == (fu in adj[w]),
        SEARCH_CAP,
    )
    return _permutation_group(perms, G.m, "Aut")


@dataclass(frozen=True)
class SymAutReport:
    family: str
    n: int
    sym_order: int
    aut_order: int
    equal: bool

    def to_json(self) -> dict:
        return {"family": self.family, "n": self.n, "sym_order": self.sym_order,
                "aut_order": self.aut_order, "isomorphic": self.equal}


def verify_sym_equals_aut(family: str, n: int, slow: bool = False) -> SymAutReport:
    """Compare the distance-preserving and the edge-preserving vertex permutations as sets."""
    limit = {"cube": 4 if slow else 3, "octahedron": 4, "simplex": 5}.get(family)
    if limit is None:
        raise ValueError(f"unknown polytope family {family!r}; expected one of {POLYTOPE_FAMILIES}")
    if not 1 <= n <= limit:
        raise OverflowError(f"{family} n={n} is above the verification cap {limit}")
    sym = vertex_symmetry_group(family_polytope(family, n))
    aut = graph_automorphisms(polytope_graph(family, n), cap=max(GRAPH_CAP, 2 ** n))
    return SymAutReport(family, n, sym.order, aut.order, sym.elements == aut.elements)


def hamming_l2_check(n: int) -> bool:
    """Shortest-path length, Hamming distance and squared l2 distance agree on all cube vertex pairs."""
    if not 1 <= n <= 10:
        raise ValueError("n must lie in 1..10")
    G = polytope_graph("cube", n)
    V = G.labels
    adj = G.neighbours()
    for s in range(G.m):
        dist = [-1] * G.m
        dist[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    q.append(w)
        for t in range(s + 1, G.m):
            ham = sum(a != b for a, b in zip(V[s], V[t]))
            if not dist[t] == ham == sq_dist(V[s], V[t]):
                return False
    return True
