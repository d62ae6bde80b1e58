"""Exhaustive corpus of finite lattices up to isomorphism.

Removing a coatom from a finite lattice with at least three elements leaves
a lattice, so every lattice of size n + 1 arises from one of size n by
adding a new coatom above some down-set. Candidates are deduplicated by
canonical form.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from core.canonical import canonical_form
from core.classify import classify
from core.errors import CapExceeded, MalformedTable
from core.homs import join_homomorphisms
from core.models import Classification
from core.morphism import Morphism
from core.poset import Poset
from core.semilattice import Semilattice, chain
from core.serialization import encode_semilattice

logger = logging.getLogger(__name__)

CORPUS_MAX_SIZE = 7

# lattices with n elements, n = 1..7
KNOWN_COUNTS = (1, 1, 1, 2, 5, 15, 53)


@dataclass(frozen=True)
class Corpus:
    max_size: int
    members: Tuple[Semilattice, ...]
    flags: Tuple[Classification, ...] = field(repr=False)

    def by_size(self, n: int) -> List[Semilattice]:
        return [s for s in self.members if s.size == n]

    def counts(self) -> Dict[int, int]:
        out = {n: 0 for n in range(1, self.max_size + 1)}
        for s in self.members:
            out[s.size] += 1
        return out

    def select(
        self,
        max_size: Optional[int] = None,
        *,
        min_size: int = 1,
        distributive: Optional[bool] = None,
        atomistic: Optional[bool] = None,
    ) -> List[Semilattice]:
        limit = self.max_size if max_size is None else max_size
        out = []
        for s, flags in zip(self.members, self.flags):
            if not min_size <= s.size <= limit:
                continue
            if distributive is not None and flags.distributive != distributive:
                continue
            if atomistic is not None and flags.atomistic != atomistic:
                continue
            out.append(s)
        return out

    def to_dict(self) -> dict:
        return {
            "max_size": self.max_size,
            "counts": {str(n): c for n, c in self.counts().items()},
            "members": [
                {"semilattice": encode_semilattice(s), "flags": f.to_dict()}
                for s, f in zip(self.members, self.flags)
            ],
        }


def _strict_down_sets(s: Semilattice) -> List[int]:
    """Nonempty down-sets of ``s`` avoiding the top, as element bitmasks."""
    poset = Poset(s.size, s.covers)
    top_bit = 1 << s.top
    return [m for m in poset.down_sets() if m and not m & top_bit]


def _add_coatom(s: Semilattice, below: int) -> Optional[Semilattice]:
    n = s.size
    leq = np.zeros((n + 1, n + 1), dtype=bool)
    leq[:n, :n] = s.order
    for x in range(n):
        if below >> x & 1:
            leq[x, n] = True
    leq[n, n] = True
    leq[n, s.top] = True
    try:
        return Semilattice.from_order(leq)
    except MalformedTable:
        return None


def _canon(s: Semilattice) -> Semilattice:
    return canonical_form(s)[0]


def _grow(level: Iterable[Semilattice]) -> List[Semilattice]:
    found: Dict[Tuple, Semilattice] = {}
    for s in level:
        for below in _strict_down_sets(s):
            grown = _add_coatom(s, below)
            if grown is None:
                continue
            canon = _canon(grown)
            found.setdefault(canon.table, canon)
    return [found[k] for k in sorted(found)]


def enumerate_semilattices(n: int, cap: int = CORPUS_MAX_SIZE) -> Corpus:
    """All lattices with at most ``n`` elements, canonical and sorted by (size, table)."""
    if n > cap:
        raise CapExceeded(f"corpus is limited to {cap} elements, asked for {n}", witness=n)
    members: List[Semilattice] = []
    level = [_canon(chain(1))] if n >= 1 else []
    size = 1
    while level and size <= n:
        members.extend(level)
        level = [_canon(chain(2))] if size == 1 else _grow(level)
        size += 1
    flags = tuple(classify(s) for s in members)
    corpus = Corpus(n, tuple(members), flags)
    logger.debug("corpus up to %d elements: %s", n, corpus.counts())
    return corpus


def lattices_by_brute_force(n: int) -> List[Semilattice]:
    """Lattices of exactly ``n`` elements from every order on ``0..n-1`` extending the index order.

    0 is the bottom, ``n-1`` the top; each pair of middle elements is
    independently related or not, transitivity and lattice-ness are then
    checked.
    """
    if n <= 2:
        return [_canon(chain(n))] if n >= 1 else []
    middle = range(1, n - 1)
    pairs = list(combinations(middle, 2))
    found: Dict[Tuple, Semilattice] = {}
    for mask in range(1 << len(pairs)):
        leq = np.eye(n, dtype=bool)
        leq[0, :] = True
        leq[:, n - 1] = True
        for k, (a, b) in enumerate(pairs):
            if mask >> k & 1:
                leq[a, b] = True
        closed = (leq.astype(np.intp) @ leq.astype(np.intp)) > 0
        if not np.array_equal(closed, leq):
            continue
        try:
            s = Semilattice.from_order(leq)
        except MalformedTable:
            continue
        canon = _canon(s)
        found.setdefault(canon.table, canon)
    return [found[k] for k in sorted(found)]


def embeddings_between(members: Iterable[Semilattice]) -> Iterator[Morphism]:
    """Every ⟨∨,0⟩-embedding between (not necessarily distinct) members, in a fixed order."""
    items = list(members)
    for s in items:
        for t in items:
            if s.size <= t.size:
                yield from join_homomorphisms(s, t, embeddings_only=True)
