"""Disjoint-set forest over dense integer keys."""

from __future__ import annotations

from typing import Dict, List, Tuple


class UnionFind:
    """Union by size with path compression."""

    def __init__(self, size: int) -> None:
        self._parent = list(range(size))
        self._weight = [1] * size

    def find(self, x: int) -> int:
        root = x
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[x] != root:
            self._parent[x], x = root, self._parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the classes of ``a`` and ``b``; False if already merged."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self._weight[ra] < self._weight[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        self._weight[ra] += self._weight[rb]
        return True

    def same(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def classes(self) -> Tuple[Tuple[int, ...], ...]:
        """Classes as sorted tuples, ordered by least member."""
        groups: Dict[int, List[int]] = {}
        for x in range(len(self._parent)):
            groups.setdefault(self.find(x), []).append(x)
        return tuple(sorted((tuple(g) for g in groups.values()), key=lambda g: g[0]))
