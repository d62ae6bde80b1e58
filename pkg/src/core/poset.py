"""Finite posets on dense indices, backed by networkx DAGs."""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from core.errors import IllFormed
from utils.bitsets import bits, is_subset


class Poset:
    """A finite poset on ``0..size-1``.

    The input relation may be any acyclic set of pairs ``(lower, upper)``;
    ``covers`` is always its transitive reduction.
    """

    def __init__(
        self,
        size: int,
        relation: Iterable[Tuple[int, int]] = (),
        labels: Optional[Sequence[str]] = None,
    ) -> None:
        if size < 0:
            raise IllFormed(f"poset size must be non-negative, got {size}")
        graph = nx.DiGraph()
        graph.add_nodes_from(range(size))
        for a, b in relation:
            if not (0 <= a < size and 0 <= b < size):
                raise IllFormed(f"relation pair ({a}, {b}) out of range", witness=(a, b))
            if a != b:
                graph.add_edge(a, b)
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise IllFormed("relation has a cycle", witness=[tuple(e) for e in cycle])
        self._graph = nx.transitive_reduction(graph)
        self._graph.add_nodes_from(range(size))
        self.size = size
        self.covers: Tuple[Tuple[int, int], ...] = tuple(sorted(self._graph.edges()))
        if labels is not None and len(labels) != size:
            raise IllFormed(f"expected {size} labels, got {len(labels)}")
        self.labels = tuple(labels) if labels is not None else None

    # --- construction helpers ---
    @classmethod
    def chain(cls, n: int) -> "Poset":
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def antichain(cls, n: int) -> "Poset":
        return cls(n)

    # --- order ---
    @cached_property
    def down(self) -> Tuple[int, ...]:
        """Bitmask of the principal down-set of every point."""
        masks = [1 << x for x in range(self.size)]
        for x in nx.topological_sort(self._graph):
            for y in self._graph.successors(x):
                masks[y] |= masks[x]
        return tuple(masks)

    @cached_property
    def up(self) -> Tuple[int, ...]:
        masks = [0] * self.size
        for y, dmask in enumerate(self.down):
            for x in bits(dmask):
                masks[x] |= 1 << y
        return tuple(masks)

    def leq(self, a: int, b: int) -> bool:
        return bool(self.down[b] >> a & 1)

    def lower_covers(self, x: int) -> List[int]:
        return sorted(self._graph.predecessors(x))

    def upper_covers(self, x: int) -> List[int]:
        return sorted(self._graph.successors(x))

    def topological_order(self) -> List[int]:
        return list(nx.lexicographical_topological_sort(self._graph))

    def relation(self) -> List[Tuple[int, int]]:
        """All strict comparabilities ``a < b``."""
        return [(a, b) for b in range(self.size) for a in bits(self.down[b]) if a != b]

    def is_down_set(self, mask: int) -> bool:
        return all(is_subset(self.down[x], mask) for x in bits(mask))

    def down_sets(self) -> List[int]:
        """All down-sets as bitmasks, ordered by cardinality then by sorted members."""
        found = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for mask in frontier:
                for x in range(self.size):
                    if mask >> x & 1 or not is_subset(self.down[x] & ~(1 << x), mask):
                        continue
                    grown = mask | 1 << x
                    if grown not in found:
                        found.add(grown)
                        nxt.append(grown)
            frontier = nxt
        return sorted(found, key=lambda m: (bin(m).count("1"), list(bits(m))))

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    # --- dunder ---
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return (self.size, self.covers, self.labels) == (other.size, other.covers, other.labels)

    def __hash__(self) -> int:
        return hash((self.size, self.covers))

    def __repr__(self) -> str:
        return f"Poset(size={self.size}, covers={list(self.covers)})"
