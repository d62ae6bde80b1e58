"""Finite ⟨∨,0⟩-semilattices as dense join tables.

Elements are indices ``0..size-1``. The join table is validated once at
construction; order, meet, covers, heights and irreducibles are derived and
cached on first use. Instances are immutable and safe to share.
"""

from __future__ import annotations

import logging
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import (
    MalformedTable,
    NotAssociative,
    NotCommutative,
    NotIdempotent,
    ZeroNotNeutral,
)
from core.poset import Poset
from utils.bitsets import format_mask

logger = logging.getLogger(__name__)

Table = Tuple[Tuple[int, ...], ...]


class Semilattice:
    """A validated finite join-semilattice with least element ``zero``."""

    def __init__(
        self,
        table: Sequence[Sequence[int]] | np.ndarray,
        zero: int,
        labels: Optional[Sequence[str]] = None,
        *,
        validate: bool = True,
    ) -> None:
        arr = np.asarray(table, dtype=np.intp)
        if validate:
            _validate(arr, zero)
        self.size = int(arr.shape[0])
        self.zero = int(zero)
        self._array = arr
        self._array.setflags(write=False)
        self.table: Table = tuple(tuple(row) for row in arr.tolist())
        if labels is not None and len(labels) != self.size:
            raise MalformedTable(f"expected {self.size} labels, got {len(labels)}")
        self.labels = tuple(str(x) for x in labels) if labels is not None else None

    # --- construction ---
    @classmethod
    def from_order(cls, leq: np.ndarray, labels: Optional[Sequence[str]] = None) -> "Semilattice":
        """Build the semilattice of a finite poset in which all finite joins exist.

        ``leq[x, y]`` must be a reflexive partial order with a least element.
        Raises MalformedTable when some pair has no least upper bound.
        """
        leq = np.asarray(leq, dtype=bool)
        n = leq.shape[0]
        if n == 0 or leq.shape != (n, n):
            raise MalformedTable("order matrix must be square and non-empty")
        minima = np.flatnonzero(leq.all(axis=1))
        if len(minima) != 1:
            raise MalformedTable("order has no least element", witness=minima.tolist())
        up_count = leq.sum(axis=1)
        table = np.empty((n, n), dtype=np.intp)
        for x in range(n):
            common = leq[x][None, :] & leq
            score = np.where(common, up_count[None, :], -1)
            lub = score.argmax(axis=1)
            missing = np.flatnonzero(score.max(axis=1) < 0)
            if len(missing):
                raise MalformedTable(
                    f"elements {x} and {int(missing[0])} have no upper bound",
                    witness=(x, int(missing[0])),
                )
            bad = np.argwhere(common & ~leq[lub])
            if len(bad):
                y = int(bad[0][0])
                raise MalformedTable(
                    f"elements {x} and {y} have no least upper bound", witness=(x, y)
                )
            table[x] = lub
        return cls(table, int(minima[0]), labels, validate=False)

    # --- scalar operations ---
    def join(self, a: int, b: int) -> int:
        return self.table[a][b]

    def meet(self, a: int, b: int) -> int:
        return self.meet_table[a][b]

    def leq(self, a: int, b: int) -> bool:
        return self.table[a][b] == b

    def join_all(self, items: Iterable[int]) -> int:
        acc = self.zero
        for x in items:
            acc = self.table[acc][x]
        return acc

    def meet_all(self, items: Iterable[int]) -> int:
        """Meet of ``items``; the empty meet is the top."""
        acc = self.top
        for x in items:
            acc = self.meet_table[acc][x]
        return acc

    @property
    def elements(self) -> range:
        return range(self.size)

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def with_labels(self, labels: Optional[Sequence[str]]) -> "Semilattice":
        return Semilattice(self._array, self.zero, labels, validate=False)

    # --- derived structure ---
    @property
    def array(self) -> np.ndarray:
        return self._array

    @cached_property
    def order(self) -> np.ndarray:
        """``order[x, y]`` is True iff ``x ≤ y``."""
        arr = self._array
        return arr == np.arange(self.size)[None, :]

    @cached_property
    def top(self) -> int:
        return int(np.flatnonzero(self.order.all(axis=0))[0])

    @cached_property
    def down_count(self) -> np.ndarray:
        return self.order.sum(axis=0)

    @cached_property
    def up_count(self) -> np.ndarray:
        return self.order.sum(axis=1)

    @cached_property
    def meet_array(self) -> np.ndarray:
        order = self.order
        down_count = self.down_count
        n = self.size
        out = np.empty((n, n), dtype=np.intp)
        for x in range(n):
            lowers = order[:, x][:, None] & order
            score = np.where(lowers, down_count[:, None], -1)
            out[x] = score.argmax(axis=0)
        out.setflags(write=False)
        return out

    @cached_property
    def meet_table(self) -> Table:
        return tuple(tuple(row) for row in self.meet_array.tolist())

    @cached_property
    def lower_covers(self) -> Tuple[Tuple[int, ...], ...]:
        order = self.order
        strict = order & ~np.eye(self.size, dtype=bool)
        covers = []
        for y in range(self.size):
            below = np.flatnonzero(strict[:, y])
            if len(below) == 0:
                covers.append(())
                continue
            sub = strict[np.ix_(below, below)]
            covers.append(tuple(int(x) for x in below[~sub.any(axis=1)]))
        return tuple(covers)

    @cached_property
    def upper_covers(self) -> Tuple[Tuple[int, ...], ...]:
        ups: List[List[int]] = [[] for _ in range(self.size)]
        for y, lows in enumerate(self.lower_covers):
            for x in lows:
                ups[x].append(y)
        return tuple(tuple(sorted(u)) for u in ups)

    @cached_property
    def covers(self) -> Tuple[Tuple[int, int], ...]:
        """Hasse diagram edges ``(lower, upper)``."""
        return tuple(sorted((x, y) for y, lows in enumerate(self.lower_covers) for x in lows))

    @cached_property
    def linear_extension(self) -> Tuple[int, ...]:
        """Elements sorted by down-set size, which refines the order."""
        return tuple(int(x) for x in np.argsort(self.down_count, kind="stable"))

    @cached_property
    def heights(self) -> Tuple[int, ...]:
        """Length of the longest chain from zero to each element."""
        h = [0] * self.size
        for y in self.linear_extension:
            lows = self.lower_covers[y]
            if lows:
                h[y] = 1 + max(h[x] for x in lows)
        return tuple(h)

    @cached_property
    def atoms(self) -> Tuple[int, ...]:
        return self.upper_covers[self.zero]

    @cached_property
    def join_irreducibles(self) -> Tuple[int, ...]:
        return tuple(x for x in self.elements if len(self.lower_covers[x]) == 1)

    @cached_property
    def meet_irreducibles(self) -> Tuple[int, ...]:
        """M(S), computed over S minus its top."""
        return tuple(
            x for x in self.elements if x != self.top and len(self.upper_covers[x]) == 1
        )

    def down_set(self, x: int) -> Tuple[int, ...]:
        return tuple(int(y) for y in np.flatnonzero(self.order[:, x]))

    def up_set(self, x: int) -> Tuple[int, ...]:
        return tuple(int(y) for y in np.flatnonzero(self.order[x]))

    # --- predicates ---
    def distributivity_witness(self) -> Optional[Tuple[int, int, int]]:
        """Return ``(c, a, b)`` with c ≤ a∨b but c ≠ (c∧a)∨(c∧b), or None."""
        arr = self._array
        meet = self.meet_array
        order = self.order
        for c in range(self.size):
            mc = meet[c]
            refined = arr[mc[:, None], mc[None, :]]
            below = order[c][arr]
            bad = np.argwhere(below & (refined != c))
            if len(bad):
                a, b = (int(v) for v in bad[0])
                return c, a, b
        return None

    def is_distributive(self) -> bool:
        return self.distributivity_witness() is None

    def is_atomistic(self) -> bool:
        atoms = self.atoms
        return all(
            self.join_all(a for a in atoms if self.leq(a, x)) == x for x in self.elements
        )

    def is_boolean(self) -> bool:
        """True iff joins of atom subsets enumerate every element exactly once."""
        atoms = self.atoms
        if self.size != 1 << len(atoms):
            return False
        values = [self.zero] * self.size
        for mask in range(1, self.size):
            low = (mask & -mask).bit_length() - 1
            values[mask] = self.join(values[mask & (mask - 1)], atoms[low])
        return len(set(values)) == self.size

    def is_join_closed(self, subset: Iterable[int]) -> bool:
        items = set(subset)
        return all(self.join(a, b) in items for a in items for b in items)

    # --- dunder ---
    def __len__(self) -> int:
        return self.size

    def same_structure(self, other: "Semilattice") -> bool:
        return self.zero == other.zero and self.table == other.table

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Semilattice):
            return NotImplemented
        return self.same_structure(other) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash((self.table, self.zero))

    def __repr__(self) -> str:
        return f"Semilattice(size={self.size}, zero={self.zero})"


def _validate(arr: np.ndarray, zero: int) -> None:
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise MalformedTable(f"join table must be square and non-empty, got shape {arr.shape}")
    n = arr.shape[0]
    out = np.argwhere((arr < 0) | (arr >= n))
    if len(out):
        i, j = (int(v) for v in out[0])
        raise MalformedTable(f"join({i},{j}) = {int(arr[i, j])} is out of range", witness=(i, j))
    if not 0 <= zero < n:
        raise MalformedTable(f"zero index {zero} out of range", witness=(zero,))
    idx = np.arange(n)
    bad = np.flatnonzero(arr[idx, idx] != idx)
    if len(bad):
        i = int(bad[0])
        raise NotIdempotent(f"join({i},{i}) = {int(arr[i, i])}, expected {i}", witness=(i,))
    bad2 = np.argwhere(arr != arr.T)
    if len(bad2):
        i, j = (int(v) for v in bad2[0])
        raise NotCommutative(
            f"join({i},{j}) = {int(arr[i, j])} but join({j},{i}) = {int(arr[j, i])}",
            witness=(i, j),
        )
    for a in range(n):
        left = arr[arr[a]]
        right = arr[a][arr]
        mismatch = np.argwhere(left != right)
        if len(mismatch):
            b, c = (int(v) for v in mismatch[0])
            raise NotAssociative(
                f"(({a}∨{b})∨{c}) differs from ({a}∨({b}∨{c}))", witness=(a, b, c)
            )
    bad3 = np.flatnonzero(arr[zero] != idx)
    if len(bad3):
        x = int(bad3[0])
        raise ZeroNotNeutral(
            f"join({zero},{x}) = {int(arr[zero, x])}, zero is not neutral", witness=(zero, x)
        )


# ----- Operations -----

def from_join_table(
    table: Sequence[Sequence[int]], zero: int, labels: Optional[Sequence[str]] = None
) -> Semilattice:
    """Validate a join table and wrap it as a Semilattice."""
    return Semilattice(table, zero, labels)


def irreducibles(s: Semilattice) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Return ``(J(S), M(S))``."""
    return s.join_irreducibles, s.meet_irreducibles


def ideal_lattice(p: Poset) -> Semilattice:
    """Down-sets of ``p`` under union; element ``k`` is ``p.down_sets()[k]``."""
    ideals = p.down_sets()
    index = {mask: k for k, mask in enumerate(ideals)}
    n = len(ideals)
    table = [[index[ideals[a] | ideals[b]] for b in range(n)] for a in range(n)]
    names = list(p.labels) if p.labels else None
    labels = [format_mask(mask, names) for mask in ideals]
    logger.debug("ideal lattice of %d-point poset has %d elements", p.size, n)
    return Semilattice(table, index[0], labels, validate=False)


def join_closure(s: Semilattice, seed: Iterable[int]) -> Tuple[int, ...]:
    """Smallest join-closed subset containing ``seed`` and zero, sorted."""
    closed = {s.zero}
    frontier = [x for x in seed]
    while frontier:
        x = frontier.pop()
        if x in closed:
            continue
        new = [s.join(x, y) for y in closed]
        closed.add(x)
        frontier.extend(v for v in new if v not in closed)
    return tuple(sorted(closed))


def restrict(s: Semilattice, subset: Sequence[int]) -> Semilattice:
    """The sub-semilattice on a join-closed subset containing zero.

    Element ``k`` of the result is ``subset[k]`` (subset must be sorted).
    """
    index = {x: k for k, x in enumerate(subset)}
    table = [[index[s.join(a, b)] for b in subset] for a in subset]
    labels = [s.label(x) for x in subset] if s.labels else [str(x) for x in subset]
    return Semilattice(table, index[s.zero], labels, validate=False)


def interval(s: Semilattice, lo: int) -> Tuple[Semilattice, Tuple[int, ...]]:
    """The upper interval ``[lo, top]`` with ``lo`` as zero, and its elements in ``s``."""
    members = s.up_set(lo)
    index = {x: k for k, x in enumerate(members)}
    table = [[index[s.join(a, b)] for b in members] for a in members]
    labels = [s.label(x) for x in members]
    return Semilattice(table, index[lo], labels, validate=False), members


def chain(n: int) -> Semilattice:
    """The n-element chain 0 < 1 < ... < n-1."""
    return Semilattice([[max(a, b) for b in range(n)] for a in range(n)], 0, validate=False)


__all__ = [
    "Semilattice",
    "from_join_table",
    "irreducibles",
    "ideal_lattice",
    "join_closure",
    "restrict",
    "interval",
    "chain",
]
