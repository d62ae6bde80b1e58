"""Distributive ⟨∨,0⟩-subsemilattices of a finite distributive semilattice.

A subobject is represented by its image, a sorted tuple of host elements
that is join-closed and contains zero. Two embeddings with the same image
differ by a unique isomorphism, so images stand for whole classes of
mutually factoring embeddings, and factorization reduces to inclusion.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Tuple

from core.errors import NotDistributive, NotEmbedding, SizeCapExceeded
from core.morphism import Morphism
from core.poset import Poset
from core.semilattice import Semilattice, join_closure, restrict

logger = logging.getLogger(__name__)

Subset = Tuple[int, ...]

SUBOBJECT_CAP = 4096


@dataclass(frozen=True)
class SubobjectPoset:
    host: Semilattice
    subobjects: Tuple[Subset, ...]
    heights: Tuple[int, ...]

    @property
    def length(self) -> int:
        return self.heights[-1]

    @cached_property
    def index(self) -> Dict[Subset, int]:
        return {x: k for k, x in enumerate(self.subobjects)}

    @cached_property
    def poset(self) -> Poset:
        """Inclusion order on subobjects."""
        relation = [
            (a, b)
            for a, x in enumerate(self.subobjects)
            for b, y in enumerate(self.subobjects)
            if a != b and set(x) <= set(y)
        ]
        return Poset(len(self.subobjects), relation)

    @property
    def full(self) -> Subset:
        return self.subobjects[-1]

    def proper(self) -> Tuple[Subset, ...]:
        return self.subobjects[:-1]

    def height(self, x: Subset) -> int:
        return self.heights[self.index[x]]


def _join_closed_subsets(a: Semilattice, cap: int) -> List[Subset]:
    start = (a.zero,)
    found = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            members = set(x)
            for y in a.elements:
                if y in members:
                    continue
                grown = join_closure(a, members | {y})
                if grown not in found:
                    found.add(grown)
                    nxt.append(grown)
                    if len(found) > cap:
                        raise SizeCapExceeded(
                            f"more than {cap} join-closed subsets in a {a.size}-element host",
                            witness=a.size,
                        )
        frontier = nxt
    return sorted(found, key=lambda x: (len(x), x))


def subobject_poset(a: Semilattice, cap: int = SUBOBJECT_CAP) -> SubobjectPoset:
    """All distributive sub-semilattices of ``a`` ordered by inclusion, with heights."""
    witness = a.distributivity_witness()
    if witness is not None:
        raise NotDistributive("subobjects are only taken in distributive hosts", witness=witness)
    subs = [x for x in _join_closed_subsets(a, cap) if restrict(a, x).is_distributive()]
    heights: List[int] = []
    for k, x in enumerate(subs):
        below = [heights[j] for j in range(k) if set(subs[j]) < set(x)]
        heights.append(1 + max(below) if below else 0)
    logger.debug("%d-element host has %d subobjects, length %d", a.size, len(subs), heights[-1])
    return SubobjectPoset(a, tuple(subs), tuple(heights))


def subobject_map(f: Morphism) -> Tuple[int, ...]:
    """The lower embedding ``M(X) -> M(Y)``, ``u ↦ f∘u``, on subobject indices.

    Its image is a down-set of ``M(Y)``; it is onto exactly when f is an
    isomorphism.
    """
    if not f.is_embedding:
        raise NotEmbedding("subobject map needs an embedding", witness=list(f.map))
    src = subobject_poset(f.src)
    dst = subobject_poset(f.dst)
    return tuple(dst.index[tuple(sorted(f(x) for x in sub))] for sub in src.subobjects)
