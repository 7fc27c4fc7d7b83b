"""Alternating symmetrization of two source sets.

Each set is held as the vertex set of its convex hull together with a
signed-permutation realization of its symmetry group. Expanding a set by a
group takes the union of its images under every element, acting about the
origin, and keeps the extreme points. A computed vertex symmetry group is
first matched to one of S_n, H_n, O_n or the trivial group, and the standard
realization of that class is what acts on the other set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import Polytope, extreme_points, order_simplex, standard_simplex
from .groups import (
    FiniteGroup, act_on_set, expected_order, family, find_embedding, isomorphic, ISO_CAP,
    trivial_group,
)
from .polytopes import vertex_symmetry_group

CLASSES = ("O", "H", "S", "trivial")


class UnrecognizedGroup(ValueError):
    pass


def classify_and_realize(G: FiniteGroup, n: int) -> FiniteGroup:
    """The standard realization of S_n, H_n, O_n or trivial isomorphic to G."""
    for name in CLASSES:
        if expected_order(name, n) != G.order:
            continue
        R = family(name, n)
        if isomorphic(G, R):
            return R
    raise UnrecognizedGroup(
        f"a symmetry group of order {G.order} is not isomorphic to S_{n}, H_{n}, O_{n} or trivial"
    )


@dataclass(frozen=True)
class SourceSetState:
    polytope: Polytope
    group: FiniteGroup
    label: str

    @classmethod
    def of(cls, P: Polytope, label: str) -> "SourceSetState":
        return cls(P, classify_and_realize(vertex_symmetry_group(P), P.dim), label)

    def to_json(self) -> dict:
        return {"label": self.label, "group": self.group.label, "order": self.group.order,
                **self.polytope.to_json()}


def expand(state: SourceSetState, acting: FiniteGroup) -> SourceSetState:
    P = state.polytope
    if acting.n != P.dim:
        raise ValueError(f"group acts on R^{acting.n} but the set lives in R^{P.dim}")
    orbit = set()
    for g in acting.elements:
        orbit |= act_on_set(g, P.vertices)
    Q = Polytope(extreme_points(orbit))
    return SourceSetState.of(Q, f"{acting.label}({state.label})")


def standard_start(n: int) -> tuple[SourceSetState, SourceSetState]:
    """The order simplex (with the identity group) and the probability simplex."""
    a = SourceSetState(order_simplex(n), trivial_group(n), "order-simplex")
    b = SourceSetState.of(standard_simplex(n, 1), "simplex")
    return a, b


@dataclass
class AlgorithmTrace:
    steps: list = field(default_factory=list)
    terminated: bool = False
    final: tuple = ()

    @property
    def step_count(self) -> int:
        return len(self.steps)

    @property
    def final_orders(self) -> list[int]:
        return [s.group.order for s in self.final]

    def to_json(self) -> dict:
        return {
            "terminated": self.terminated,
            "step_count": self.step_count,
            "final_orders": self.final_orders,
            "final": [s.to_json() for s in self.final],
            "steps": self.steps,
        }


def _same_class(G: FiniteGroup, H: FiniteGroup, heuristic: bool) -> bool:
    if heuristic and max(G.order, H.order) > ISO_CAP:
        return G.order == H.order
    return bool(isomorphic(G, H))


def run(a: SourceSetState, b: SourceSetState, max_steps: int = 8,
        heuristic: bool = False, check_growth: bool | None = None) -> AlgorithmTrace:
    """Alternately expand a by b's group and b by a's group until the groups match.

    ``heuristic`` compares group orders instead of searching for an
    isomorphism once a group exceeds the isomorphism cap.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if check_growth is None:
        check_growth = a.polytope.dim <= 3
    trace = AlgorithmTrace()
    if _same_class(a.group, b.group, heuristic):
        trace.terminated = True
        trace.final = (a, b)
        return trace
    for step in range(max_steps):
        target, acting = ("a", b.group) if step % 2 == 0 else ("b", a.group)
        old = a if target == "a" else b
        new = expand(old, acting)
        record = {
            "target": target,
            "acting": acting.label,
            "input": old.polytope.to_json(),
            "output": new.polytope.to_json(),
            "old_order": old.group.order,
            "new_order": new.group.order,
        }
        if check_growth:
            record["old_group_embeds"] = find_embedding(old.group, new.group) is not None
        if target == "a":
            a = new
        else:
            b = new
        record["orders"] = [a.group.order, b.group.order]
        trace.steps.append(record)
        if _same_class(a.group, b.group, heuristic):
            trace.terminated = True
            break
    trace.final = (a, b)
    return trace
