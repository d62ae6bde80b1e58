"""Congruence closure, lattice congruences and quotients.

A partition is a tuple of sorted classes, ordered by least member. This
ordering also fixes the element numbering of quotients.
"""

from __future__ import annotations

import logging
from collections import deque
from typing import Iterable, List, Sequence, Set, Tuple

import numpy as np

from core.errors import NotACongruence
from core.morphism import Morphism
from core.semilattice import Semilattice
from utils.union_find import UnionFind

logger = logging.getLogger(__name__)

Partition = Tuple[Tuple[int, ...], ...]


def _close(s: Semilattice, pairs: Iterable[Tuple[int, int]], with_meets: bool) -> Partition:
    uf = UnionFind(s.size)
    queue = deque(pairs)
    join = s.table
    meet = s.meet_table if with_meets else None
    merges = 0
    while queue:
        a, b = queue.popleft()
        if not uf.union(a, b):
            continue
        merges += 1
        ja, jb = join[a], join[b]
        queue.extend((ja[c], jb[c]) for c in range(s.size) if ja[c] != jb[c])
        if meet is not None:
            ma, mb = meet[a], meet[b]
            queue.extend((ma[c], mb[c]) for c in range(s.size) if ma[c] != mb[c])
    logger.debug("closure on %d elements finished after %d merges", s.size, merges)
    return uf.classes()


def congruence_closure(s: Semilattice, pairs: Iterable[Tuple[int, int]]) -> Partition:
    """Least join-compatible equivalence containing ``pairs``."""
    return _close(s, pairs, with_meets=False)


def lattice_congruence_generated(s: Semilattice, pairs: Iterable[Tuple[int, int]]) -> Partition:
    """Least equivalence containing ``pairs`` compatible with ∨ and the derived ∧."""
    return _close(s, pairs, with_meets=True)


def discrete(s: Semilattice) -> Partition:
    return tuple((x,) for x in s.elements)


def class_index(partition: Partition, size: int) -> List[int]:
    """Map each element to the position of its class."""
    index = [-1] * size
    for k, cls in enumerate(partition):
        for x in cls:
            index[x] = k
    return index


def partition_pairs(partition: Partition) -> List[Tuple[int, int]]:
    return [(cls[0], x) for cls in partition for x in cls[1:]]


def lattice_congruences(s: Semilattice) -> List[Partition]:
    """All lattice congruences of ``s``, sorted by class count descending.

    Every congruence of a finite lattice is the join of the principal
    congruences of the cover pairs it collapses.
    """
    principal = {lattice_congruence_generated(s, [pair]) for pair in s.covers}
    found: Set[Partition] = {discrete(s)} | principal
    frontier = list(found)
    while frontier:
        nxt = []
        for theta in frontier:
            for psi in principal:
                joined = lattice_congruence_generated(
                    s, partition_pairs(theta) + partition_pairs(psi)
                )
                if joined not in found:
                    found.add(joined)
                    nxt.append(joined)
        frontier = nxt
    return sorted(found, key=lambda p: (-len(p), p))


def is_lattice_simple(s: Semilattice) -> bool:
    """Exactly two lattice congruences: every cover pair generates the total one."""
    if s.size < 2:
        return False
    return all(len(lattice_congruence_generated(s, [pair])) == 1 for pair in s.covers)


def quotient(s: Semilattice, partition: Sequence[Sequence[int]]) -> Tuple[Semilattice, Morphism]:
    """Quotient by a join-compatible partition, with the projection."""
    classes: Partition = tuple(
        sorted((tuple(sorted(c)) for c in partition if len(c)), key=lambda c: c[0])
    )
    seen = [x for c in classes for x in c]
    if sorted(seen) != list(s.elements):
        raise NotACongruence("partition does not cover every element exactly once", witness=seen)
    index = np.asarray(class_index(classes, s.size), dtype=np.intp)
    reps = np.asarray([c[0] for c in classes], dtype=np.intp)
    rep_of = reps[index]
    arr = s.array
    # x ~ rep(x) must give x∨c ~ rep(x)∨c for every c
    mismatch = np.argwhere(index[arr] != index[arr[rep_of]])
    if len(mismatch):
        x, c = (int(v) for v in mismatch[0])
        raise NotACongruence(
            f"{x} ~ {int(rep_of[x])} but {x}∨{c} and {int(rep_of[x])}∨{c} are separated",
            witness=(x, int(rep_of[x]), c),
        )
    table = index[arr[np.ix_(reps, reps)]]
    labels = ["[" + s.label(int(r)) + "]" for r in reps]
    q = Semilattice(table, int(index[s.zero]), labels, validate=False)
    return q, Morphism(s, q, index.tolist())
