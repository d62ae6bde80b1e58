"""A square of distributive lattices without a simultaneous lattice embedding.

P has points ``p1, p2, q1, q2, q1', q2'`` with ``q1, q2 < p1, p2``,
``q1' < p1`` and ``q2' < p2``. A is the lattice of down-sets of P and
``p = q1 ∨ q2 = p1 ∧ p2``, ``r_i = q_i ∨ q_i'``. The square is
``S = ⟨p, p1, p2⟩`` included in ``A_i = ⟨p, p1, p2, r_i⟩``, both included
in A. Construction re-checks every defining constraint and raises
``InternalConsistencyError`` naming the first one that fails.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

from core.diagram import DirectSystem
from core.errors import InternalConsistencyError
from core.morphism import Morphism
from core.poset import Poset
from core.semilattice import Semilattice, ideal_lattice, join_closure, restrict

logger = logging.getLogger(__name__)

POINTS = ("p1", "p2", "q1", "q2", "q1'", "q2'")
COVERS = ((2, 0), (2, 1), (3, 0), (3, 1), (4, 0), (5, 1))
VERTEX_NAMES = ("S", "A1", "A2", "A")
SEEDS = {
    "S": ("p", "p1", "p2"),
    "A1": ("p", "p1", "p2", "r1"),
    "A2": ("p", "p1", "p2", "r2"),
}

Members = Dict[str, Tuple[int, ...]]


@dataclass(frozen=True)
class Counterexample:
    poset: Poset
    lattice: Semilattice
    system: DirectSystem
    elements: Dict[str, int]
    members: Members
    constraints: Tuple[Tuple[str, bool], ...]

    def element(self, vertex: str, name: str) -> int:
        """Index of a named element of A inside ``vertex``."""
        return self.members[vertex].index(self.elements[name])


def _local(members: Members, el: Dict[str, int], vertex: str) -> Dict[str, int]:
    inside = members[vertex]
    return {name: inside.index(x) for name, x in el.items() if x in inside}


def _strict_order(s: Semilattice, items: List[int]) -> set:
    return {(x, y) for x in items for y in items if x != y and s.leq(x, y)}


def _constraints(
    a: Semilattice, el: Dict[str, int], members: Members, subs: Dict[str, Semilattice]
) -> List[Tuple[str, bool]]:
    out = [
        ("1 = p1 ∨ p2", a.join(el["p1"], el["p2"]) == a.top),
        (
            "p = p1 ∧ p2 = q1 ∨ q2",
            a.meet(el["p1"], el["p2"]) == el["p"] and a.join(el["q1"], el["q2"]) == el["p"],
        ),
        ("P = J(A)", set(a.join_irreducibles) == {el[name] for name in POINTS}),
    ]
    s_joins = {members["S"][x] for x in subs["S"].join_irreducibles}
    out.append(("J(S) = {p, p1, p2}", s_joins == {el["p"], el["p1"], el["p2"]}))
    out.append((
        "r_i < p_i",
        all(a.leq(el[f"r{i}"], el[f"p{i}"]) and el[f"r{i}"] != el[f"p{i}"] for i in (1, 2)),
    ))
    out.append((
        "p_i ≰ r_i ∨ p_j",
        all(not a.leq(el[f"p{i}"], a.join(el[f"r{i}"], el[f"p{3 - i}"])) for i in (1, 2)),
    ))
    shapes = []
    ideals = []
    for i in (1, 2):
        vertex = f"A{i}"
        sub = subs[vertex]
        named = _local(members, el, vertex)
        joins = list(sub.join_irreducibles)
        expected = {named["p"], named["p1"], named["p2"], named[f"r{i}"]}
        wanted = {
            (named[f"r{i}"], named[f"p{i}"]),
            (named["p"], named["p1"]),
            (named["p"], named["p2"]),
        }
        shapes.append(set(joins) == expected and _strict_order(sub, joins) == wanted)
        relation = [(joins.index(x), joins.index(y)) for x, y in _strict_order(sub, joins)]
        ideals.append(len(Poset(len(joins), relation).down_sets()))
    out.append(("J(A_i) ordered only by r_i < p_i and p < p1, p2", all(shapes)))
    sizes = [subs[f"A{i}"].size for i in (1, 2)]
    out.append(("|A_i| = 8 = ideals of J(A_i)", sizes == [8, 8] and ideals == [8, 8]))
    out.append(("A_1, A_2 distributive", all(subs[f"A{i}"].is_distributive() for i in (1, 2))))
    return out


@lru_cache(maxsize=1)
def counterexample() -> Counterexample:
    poset = Poset(len(POINTS), COVERS, POINTS)
    a = ideal_lattice(poset)
    masks = poset.down_sets()
    el = {name: masks.index(poset.down[k]) for k, name in enumerate(POINTS)}
    el["p"] = a.join(el["q1"], el["q2"])
    el["r1"] = a.join(el["q1"], el["q1'"])
    el["r2"] = a.join(el["q2"], el["q2'"])
    members: Members = {v: join_closure(a, [el[n] for n in seed]) for v, seed in SEEDS.items()}
    members["A"] = tuple(a.elements)
    subs = {v: restrict(a, m) for v, m in members.items()}
    constraints = _constraints(a, el, members, subs)
    for name, ok in constraints:
        if not ok:
            raise InternalConsistencyError(f"counterexample constraint fails: {name}", witness=name)

    def inclusion(lo: str, hi: str) -> Morphism:
        position = {x: n for n, x in enumerate(members[hi])}
        return Morphism(subs[lo], subs[hi], [position[x] for x in members[lo]])

    index = Poset(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    arrows = {
        (0, 1): inclusion("S", "A1"),
        (0, 2): inclusion("S", "A2"),
        (1, 3): inclusion("A1", "A"),
        (2, 3): inclusion("A2", "A"),
    }
    system = DirectSystem(index, [subs[v] for v in VERTEX_NAMES], arrows, VERTEX_NAMES)
    logger.debug("counterexample square with sizes %s", [subs[v].size for v in VERTEX_NAMES])
    return Counterexample(poset, a, system, el, members, tuple(constraints))


def build_counterexample() -> DirectSystem:
    return counterexample().system
