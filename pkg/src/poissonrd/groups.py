"""Signed permutations and explicit finite groups of them.

An element is stored as its signed images ``o = (o(1), ..., o(n))`` with
``o(i) = s_i * pi(i)``. Its matrix has ``[A]_ij = sgn(o(i)) * I{j = |o(i)|}``,
so ``(A x)_i = s_i * x_{pi(i)}``. Plain permutations carry all-plus signs
and sign vectors carry the identity permutation.

``compose(g, h)`` is the element whose matrix is ``A_g @ A_h``.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

GROUP_CAP = int(os.environ.get("POISSONRD_GROUP_CAP", 10**5))
ISO_CAP = int(os.environ.get("POISSONRD_ISO_CAP", 400))


@dataclass(frozen=True, order=True)
class SignedPermutation:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(abs(x) for x in imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"{imgs} is not a signed permutation of 1..{len(imgs)}")
        object.__setattr__(self, "images", imgs)

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def perm(self) -> tuple[int, ...]:
        return tuple(abs(x) for x in self.images)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(1 if x > 0 else -1 for x in self.images)

    @classmethod
    def from_parts(cls, perm: Sequence[int], signs: Sequence[int]) -> "SignedPermutation":
        if len(perm) != len(signs) or any(s not in (1, -1) for s in signs):
            raise ValueError("signs must be a +-1 vector matching perm")
        return cls(tuple(s * p for p, s in zip(perm, signs)))

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(1, n + 1)))

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self.images, 1))

    def to_json(self) -> dict:
        return {"perm": list(self.perm), "signs": list(self.signs)}

    @classmethod
    def from_json(cls, obj: dict) -> "SignedPermutation":
        return cls.from_parts(obj["perm"], obj["signs"])


def permutation(images: Sequence[int]) -> SignedPermutation:
    """Embed sigma (1-based images) with all signs +1."""
    g = SignedPermutation(tuple(images))
    if any(x < 0 for x in g.images):
        raise ValueError("a permutation has positive images")
    return g


def sign_vector(signs: Sequence[int]) -> SignedPermutation:
    """Embed h in {+1,-1}^n with the identity permutation."""
    return SignedPermutation.from_parts(range(1, len(signs) + 1), signs)


def _trusted(images: tuple[int, ...]) -> SignedPermutation:
    # skips validation; only for images built from valid elements
    g = object.__new__(SignedPermutation)
    object.__setattr__(g, "images", images)
    return g


def _same_n(g: SignedPermutation, h: SignedPermutation):
    if g.n != h.n:
        raise ValueError(f"dimension mismatch: {g.n} vs {h.n}")


def compose(g: SignedPermutation, h: SignedPermutation) -> SignedPermutation:
    _same_n(g, h)
    hi = h.images
    return _trusted(tuple(hi[x - 1] if x > 0 else -hi[-x - 1] for x in g.images))


def inverse(g: SignedPermutation) -> SignedPermutation:
    out = [0] * g.n
    for i, x in enumerate(g.images, 1):
        out[abs(x) - 1] = i if x > 0 else -i
    return _trusted(tuple(out))


def action_matrix(g: SignedPermutation) -> np.ndarray:
    A = np.zeros((g.n, g.n), dtype=np.int64)
    for i, x in enumerate(g.images):
        A[i, abs(x) - 1] = 1 if x > 0 else -1
    return A


def act(g: SignedPermutation, x: Sequence) -> tuple:
    if len(x) != g.n:
        raise ValueError(f"dimension mismatch: element on {g.n} coordinates, vector of length {len(x)}")
    return tuple(x[o - 1] if o > 0 else -x[-o - 1] for o in g.images)


def act_on_set(g: SignedPermutation, V: Iterable[Sequence]) -> frozenset:
    return frozenset(act(g, tuple(v)) for v in V)


def element_order(g: SignedPermutation) -> int:
    k, x = 1, g
    while not x.is_identity():
        x = compose(x, g)
        k += 1
    return k


# --------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class FiniteGroup:
    """An explicit finite set of signed permutations closed under composition."""

    elements: frozenset
    n: int
    label: str = field(default="", compare=False)
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        els = frozenset(self.elements)
        if not els:
            raise ValueError("a group has at least the identity")
        if any(g.n != self.n for g in els):
            raise ValueError("elements act on different dimensions")
        if self.check:
            if SignedPermutation.identity(self.n) not in els:
                raise ValueError("identity missing")
            for g in els:
                if inverse(g) not in els:
                    raise ValueError(f"inverse of {g.images} missing")
                for h in els:
                    if compose(g, h) not in els:
                        raise ValueError("set is not closed under composition")
        object.__setattr__(self, "elements", els)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))

    @property
    def identity(self) -> SignedPermutation:
        return SignedPermutation.identity(self.n)

    def to_json(self) -> dict:
        return {"n": self.n, "order": self.order, "label": self.label,
                "elements": [g.to_json() for g in self]}


def generate(generators: Iterable[SignedPermutation], cap: int | None = None, label: str = "") -> FiniteGroup:
    """Breadth-first closure of a nonempty generator set."""
    cap = GROUP_CAP if cap is None else cap
    gens = list(dict.fromkeys(generators))
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].n
    for g in gens:
        _same_n(gens[0], g)
    e = SignedPermutation.identity(n)
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = compose(x, s)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise OverflowError(f"group closure exceeded the cap of {cap} elements")
                queue.append(y)
    return FiniteGroup(frozenset(seen), n, label, check=False)


def trivial_group(n: int) -> FiniteGroup:
    return FiniteGroup(frozenset([SignedPermutation.identity(n)]), n, "trivial")


def _transpositions(n: int) -> list[SignedPermutation]:
    out = []
    for i in range(n - 1):
        p = list(range(1, n + 1))
        p[i], p[i + 1] = p[i + 1], p[i]
        out.append(permutation(p))
    return out


def _flips(n: int) -> list[SignedPermutation]:
    return [sign_vector([-1 if k == i else 1 for k in range(n)]) for i in range(n)]


def symmetric_group(n: int) -> FiniteGroup:
    if n == 1:
        return FiniteGroup(trivial_group(1).elements, 1, "S")
    return generate(_transpositions(n), label="S")


def reflection_group(n: int) -> FiniteGroup:
    return generate(_flips(n), label="H")


def hyperoctahedral_group(n: int) -> FiniteGroup:
    return generate(_transpositions(n) + _flips(n), label="O")


def dihedral_square() -> FiniteGroup:
    """Symmetries of a square acting on its four corners (labelled cyclically)."""
    return generate([permutation([2, 3, 4, 1]), permutation([1, 4, 3, 2])], label="D4")


def cyclic_group(k: int) -> FiniteGroup:
    """Z_k as the powers of a k-cycle."""
    return generate([permutation(list(range(2, k + 1)) + [1])], label=f"C{k}")


FAMILIES = {
    "S": symmetric_group,
    "H": reflection_group,
    "O": hyperoctahedral_group,
    "trivial": trivial_group,
}


def family(name: str, n: int) -> FiniteGroup:
    if name == "D4":
        return dihedral_square()
    if name.startswith("C") and name[1:].isdigit():
        return cyclic_group(int(name[1:]))
    if name not in FAMILIES:
        raise ValueError(f"unknown group family {name!r}; expected S, H, O, trivial, D4 or C<k>")
    if n < 1:
        raise ValueError("n must be >= 1")
    return FAMILIES[name](n)


def is_subgroup(H: FiniteGroup, G: FiniteGroup) -> bool:
    return H.n == G.n and H.elements <= G.elements


def is_normal(H: FiniteGroup, G: FiniteGroup) -> bool:
    """gH = Hg for every g in G."""
    if not is_subgroup(H, G):
        return False
    for g in G.elements:
        left = {compose(g, h) for h in H.elements}
        right = {compose(h, g) for h in H.elements}
        if left != right:
            return False
    return True


@dataclass(frozen=True)
class SemidirectReport:
    normal: bool
    trivial_intersection: bool
    product: bool

    @property
    def all(self) -> bool:
        return self.normal and self.trivial_intersection and self.product

    def to_json(self) -> dict:
        return {"normal": self.normal, "trivial_intersection": self.trivial_intersection,
                "product": self.product, "all": self.all}


def semidirect_verify(G: FiniteGroup, H1: FiniteGroup, H2: FiniteGroup) -> SemidirectReport:
    """Check G = H1 x| H2 as an internal semidirect product, H1 the normal factor."""
    for name, H in (("H1", H1), ("H2", H2)):
        if not is_subgroup(H, G):
            raise ValueError(f"{name} is not a subgroup of G")
    normal = is_normal(H1, G)
    trivial = H1.elements & H2.elements == {G.identity}
    product = {compose(a, b) for a in H1.elements for b in H2.elements} == G.elements
    return SemidirectReport(normal, trivial, product)


# --------------------------------------------------------------------------
# isomorphism search


class _Table:
    """Indexed Cayley table; index 0 is the identity."""

    def __init__(self, G: FiniteGroup):
        e = G.identity
        self.els = [e] + sorted(G.elements - {e})
        self.index = {g: i for i, g in enumerate(self.els)}
        self.mul = [[self.index[compose(a, b)] for b in self.els] for a in self.els]
        self.order = [self._order(i) for i in range(len(self.els))]

    def _order(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.mul[x][i]
            k += 1
        return k

    def closure(self, gens: list[int]) -> list[int]:
        seen = {0}
        out = [0]
        for x in out:
            for s in gens:
                y = self.mul[x][s]
                if y not in seen:
                    seen.add(y)
                    out.append(y)
        return out


def _generators(T: _Table) -> list[int]:
    """A small generating set, picked greedily from high-order elements."""
    size = len(T.els)
    by_order = sorted(range(1, size), key=lambda i: (-T.order[i], i))
    gens: list[int] = []
    span = {0}
    for i in by_order:
        if len(span) == size:
            break
        if i not in span:
            gens.append(i)
            span = set(T.closure(gens))
    return gens


def _extend(TG: _Table, TH: _Table, gens: list[int], images: list[int]) -> dict | None:
    """The homomorphism on <gens> sending gens to images, or None if inconsistent."""
    phi = {0: 0}
    queue = [0]
    for x in queue:
        for s, t in zip(gens, images):
            y = TG.mul[x][s]
            fy = TH.mul[phi[x]][t]
            if y in phi:
                if phi[y] != fy:
                    return None
            else:
                phi[y] = fy
                queue.append(y)
    return phi


def _search(G: FiniteGroup, H: FiniteGroup, bijective: bool, cap: int) -> dict | None:
    if max(G.order, H.order) > cap:
        raise OverflowError(f"group order above the isomorphism cap {cap}")
    TG, TH = _Table(G), _Table(H)
    if bijective and Counter(TG.order) != Counter(TH.order):
        return None
    gens = _generators(TG)
    if not gens:
        return {G.identity: H.identity}
    by_order: dict[int, list[int]] = {}
    for j, o in enumerate(TH.order):
        by_order.setdefault(o, []).append(j)

    def injective(phi):
        return len(set(phi.values())) == len(phi)

    def back(k: int, images: list[int]):
        if k == len(gens):
            phi = _extend(TG, TH, gens, images)
            return phi if phi is not None and len(phi) == G.order and injective(phi) else None
        for cand in by_order.get(TG.order[gens[k]], []):
            trial = images + [cand]
            phi = _extend(TG, TH, gens[:k + 1], trial)
            if phi is None or not injective(phi):
                continue
            found = back(k + 1, trial)
            if found is not None:
                return found
        return None

    phi = back(0, [])
    if phi is None:
        return None
    return {TG.els[i]: TH.els[j] for i, j in phi.items()}


@dataclass(frozen=True)
class IsoResult:
    isomorphic: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.isomorphic


def isomorphic(G: FiniteGroup, H: FiniteGroup, cap: int | None = None) -> IsoResult:
    """Decide G ~= H by backtracking over images of a generating set.

    Candidate images must have the same element order; the element-order
    multisets are compared first. A found witness is a bijective
    homomorphism given as a dict.
    """
    if G.order != H.order:
        return IsoResult(False)
    phi = _search(G, H, True, ISO_CAP if cap is None else cap)
    return IsoResult(phi is not None, phi)


def find_embedding(G: FiniteGroup, H: FiniteGroup, cap: int | None = None) -> dict | None:
    """An injective homomorphism G -> H, or None."""
    if H.order % G.order:
        return None
    return _search(G, H, False, ISO_CAP if cap is None else cap)


def is_homomorphism(phi: dict) -> bool:
    return all(phi[compose(a, b)] == compose(phi[a], phi[b]) for a, b in itertools.product(phi, repeat=2))


def expected_order(name: str, n: int) -> int:
    return {"S": math.factorial(n), "H": 2 ** n, "O": 2 ** n * math.factorial(n), "trivial": 1}[name]
