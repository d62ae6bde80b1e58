"""Enumeration of ⟨∨,0⟩-homomorphisms, isomorphisms and residuals.

A homomorphism is determined by its values on J(S): every element is the
join of the join-irreducibles below it. The search assigns those values in
a linear-extension order with monotonicity pruning and keeps the maps that
preserve joins.
"""

from __future__ import annotations

import logging
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from core.canonical import canonical_form, element_keys
from core.morphism import Morphism, inverse
from core.semilattice import Semilattice

logger = logging.getLogger(__name__)

Candidates = Callable[[int], Sequence[int]]


def _search(s: Semilattice, t: Semilattice, candidates: Candidates) -> Iterator[Morphism]:
    order = [j for j in s.linear_extension if j in set(s.join_irreducibles)]
    below = {j: [i for i in order if i != j and s.leq(i, j)] for j in order}
    below_el = [[j for j in order if s.leq(j, x)] for x in s.elements]
    assigned: dict = {}

    def extend(k: int) -> Iterator[Morphism]:
        if k == len(order):
            mapping = [t.join_all(assigned[j] for j in below_el[x]) for x in s.elements]
            f = Morphism(s, t, mapping)
            if f.preserves_join:
                yield f
            return
        j = order[k]
        floor = t.join_all(assigned[i] for i in below[j])
        for v in candidates(j):
            if not t.leq(floor, v):
                continue
            assigned[j] = v
            yield from extend(k + 1)
        assigned.pop(j, None)

    yield from extend(0)


def join_homomorphisms(
    s: Semilattice, t: Semilattice, *, embeddings_only: bool = False
) -> Iterator[Morphism]:
    """Every ⟨∨,0⟩-homomorphism ``s -> t`` in lexicographic order of J-images."""
    if embeddings_only:
        if s.size > t.size:
            return
        nonzero = [v for v in t.elements if v != t.zero]
        for f in _search(s, t, lambda j: nonzero):
            if f.injective:
                yield f
        return
    everything = list(t.elements)
    yield from _search(s, t, lambda j: everything)


def isomorphisms(s: Semilattice, t: Semilattice) -> Iterator[Morphism]:
    if s.size != t.size or len(s.join_irreducibles) != len(t.join_irreducibles):
        return
    ks, kt = element_keys(s), element_keys(t)
    jt = t.join_irreducibles

    def candidates(j: int) -> List[int]:
        return [q for q in jt if kt[q] == ks[j]]

    for f in _search(s, t, candidates):
        if f.injective:
            yield f


def automorphisms(s: Semilattice) -> List[Morphism]:
    return list(isomorphisms(s, s))


def find_isomorphism(s: Semilattice, t: Semilattice) -> Optional[Morphism]:
    """One isomorphism ``s -> t`` through the canonical forms, or None."""
    if s.size != t.size:
        return None
    ks, cs = canonical_form(s)
    kt, ct = canonical_form(t)
    if not ks.same_structure(kt):
        return None
    back = inverse(ct)
    return Morphism(s, t, [back(cs(x)) for x in s.elements])


def upper_adjoint(f: Morphism) -> Tuple[int, ...]:
    """Residual ``f*(y) = ⋁{x : f(x) ≤ y}``, so that ``f(x) ≤ y ⇔ x ≤ f*(y)``."""
    s, t = f.src, f.dst
    order = t.order
    return tuple(
        s.join_all(x for x in s.elements if order[f.map[x], y]) for y in t.elements
    )
