"""Poset-indexed diagrams of semilattices, direct systems and cocones."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Hashable, Mapping, Optional, Sequence, Tuple

from core.errors import IllFormed, NotACocone, NotEmbedding, NotJoinPreserving
from core.morphism import Morphism, identity
from core.poset import Poset
from core.semilattice import Semilattice

logger = logging.getLogger(__name__)

Arrow = Tuple[int, int]


class Diagram:
    """A functor from a finite poset into ⟨∨,0⟩-semilattices.

    Arrows are supplied for (at least) the cover pairs of ``index``; every
    composite ``arrow(i, j)`` for ``i ≤ j`` is derived and path independence
    is checked at construction.
    """

    def __init__(
        self,
        index: Poset,
        vertices: Sequence[Semilattice],
        arrows: Mapping[Arrow, Morphism],
        names: Optional[Sequence[Hashable]] = None,
    ) -> None:
        if len(vertices) != index.size:
            raise IllFormed(f"{len(vertices)} vertices for {index.size} index points")
        if names is not None and len(names) != index.size:
            raise IllFormed(f"{len(names)} names for {index.size} index points")
        self.index = index
        self.vertices: Tuple[Semilattice, ...] = tuple(vertices)
        self.names: Tuple[Hashable, ...] = tuple(names) if names is not None else tuple(range(index.size))
        self._by_name: Dict[Hashable, int] = {n: k for k, n in enumerate(self.names)}
        if len(self._by_name) != index.size:
            raise IllFormed("point names must be distinct")
        for (i, j), f in arrows.items():
            self._check_arrow(i, j, f)
        self._arrows = self._compose_all(arrows)

    # --- access ---
    @property
    def size(self) -> int:
        return self.index.size

    def point(self, name: Hashable) -> int:
        try:
            return self._by_name[name]
        except KeyError:
            raise IllFormed(f"unknown index point {name!r}", witness=name) from None

    def vertex(self, i: int) -> Semilattice:
        return self.vertices[i]

    def arrow(self, i: int, j: int) -> Morphism:
        try:
            return self._arrows[(i, j)]
        except KeyError:
            raise IllFormed(f"no arrow {i}->{j}: points are not comparable", witness=(i, j)) from None

    @property
    def covers(self) -> Tuple[Arrow, ...]:
        return self.index.covers

    def cover_arrows(self) -> Dict[Arrow, Morphism]:
        return {c: self._arrows[c] for c in self.index.covers}

    def all_arrows(self) -> Dict[Arrow, Morphism]:
        return dict(self._arrows)

    # --- internals ---
    def _check_arrow(self, i: int, j: int, f: Morphism) -> None:
        if not (0 <= i < self.size and 0 <= j < self.size) or not self.index.leq(i, j):
            raise IllFormed(f"arrow {i}->{j} does not follow the index order", witness=(i, j))
        if not (f.src.same_structure(self.vertices[i]) and f.dst.same_structure(self.vertices[j])):
            raise IllFormed(f"arrow {i}->{j} has the wrong domain or codomain", witness=(i, j))
        if not f.is_hom:
            raise NotJoinPreserving(
                f"arrow {i}->{j} is not a ⟨∨,0⟩-homomorphism", witness=(i, j, f.join_witness)
            )

    def _compose_all(self, given: Mapping[Arrow, Morphism]) -> Dict[Arrow, Morphism]:
        out: Dict[Arrow, Morphism] = {}
        for j in self.index.topological_order():
            out[(j, j)] = identity(self.vertices[j])
            for c in self.index.lower_covers(j):
                step = given.get((c, j))
                if step is None:
                    raise IllFormed(f"missing arrow for cover {c}->{j}", witness=(c, j))
                for i in range(self.size):
                    if (i, c) not in out:
                        continue
                    candidate = step * out[(i, c)]
                    known = out.get((i, j))
                    if known is None:
                        out[(i, j)] = candidate
                    elif known.map != candidate.map:
                        raise IllFormed(
                            f"arrows {i}->{j} differ along two paths (via {c})", witness=(i, c, j)
                        )
        for (i, j), f in given.items():
            if i == j and f.map != out[(i, i)].map:
                raise IllFormed(f"arrow {i}->{i} is not the identity", witness=(i, i))
            if f.map != out[(i, j)].map:
                raise IllFormed(f"arrow {i}->{j} disagrees with the composite", witness=(i, j))
        logger.debug("diagram with %d points has %d arrows", self.size, len(out))
        return out

    def __repr__(self) -> str:
        return f"{type(self).__name__}(points={self.size}, sizes={[v.size for v in self.vertices]})"


class DirectSystem(Diagram):
    """A diagram whose transition maps are all ⟨∨,0⟩-embeddings."""

    def __init__(
        self,
        index: Poset,
        vertices: Sequence[Semilattice],
        arrows: Mapping[Arrow, Morphism],
        names: Optional[Sequence[Hashable]] = None,
    ) -> None:
        super().__init__(index, vertices, arrows, names)
        for (i, j), f in self.cover_arrows().items():
            if not f.injective:
                raise NotEmbedding(f"transition {i}->{j} is not injective", witness=(i, j))

    @classmethod
    def from_diagram(cls, d: Diagram) -> "DirectSystem":
        return cls(d.index, d.vertices, d.cover_arrows(), d.names)


@dataclass(frozen=True)
class Cocone:
    """A target with one component per diagram point."""

    target: Semilattice
    components: Tuple[Morphism, ...]

    def validate(self, d: Diagram) -> None:
        if len(self.components) != d.size:
            raise NotACocone(f"{len(self.components)} components for {d.size} points")
        for i, k in enumerate(self.components):
            if not (k.src.same_structure(d.vertex(i)) and k.dst.same_structure(self.target)):
                raise NotACocone(f"component {i} has the wrong domain or codomain", witness=(i,))
        for i, j in d.covers:
            lhs = self.components[j] * d.arrow(i, j)
            if lhs.map != self.components[i].map:
                x = next(x for x in d.vertex(i).elements if lhs(x) != self.components[i](x))
                raise NotACocone(
                    f"component {j} ∘ arrow {i}->{j} differs from component {i} at {x}",
                    witness=(i, j, x),
                )


def single_vertex(s: Semilattice, name: Hashable = 0) -> Diagram:
    return Diagram(Poset(1), [s], {}, [name])


def span(middle: Semilattice, left: Morphism, right: Morphism) -> Diagram:
    """Points 0 (middle), 1 (left target), 2 (right target)."""
    return Diagram(
        Poset(3, [(0, 1), (0, 2)]),
        [middle, left.dst, right.dst],
        {(0, 1): left, (0, 2): right},
    )


def chain_system(objects: Sequence[Semilattice], steps: Sequence[Morphism]) -> DirectSystem:
    """A direct system indexed by a chain, ``steps[k]: objects[k] -> objects[k+1]``."""
    arrows = {(k, k + 1): f for k, f in enumerate(steps)}
    return DirectSystem(Poset.chain(len(objects)), objects, arrows)
