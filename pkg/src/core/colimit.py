"""Colimits of finite diagrams of ⟨∨,0⟩-semilattices.

The apex is realised as the set of closed tuples ``t`` in the product of the
vertices, ``t_i = f*(t_j)`` along every arrow ``f: i -> j`` where ``f*`` is
the upper adjoint. Closed tuples form a Moore family; the leg of vertex
``i`` sends ``x`` to the closure of the tuple that is ``x`` at ``i`` and zero
elsewhere. Elements are generated breadth-first from the leg images of
join-irreducibles, so the free algebra is never materialised.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from core.canonical import DEFAULT_CAP as CANONICAL_CAP, canonical_form
from core.congruence import congruence_closure, quotient
from core.diagram import Cocone, Diagram, span
from core.errors import DenseCapExceeded, Inconsistent, InternalConsistencyError, NotEmbedding, SizeCapExceeded
from core.free import DENSE_MAX_SIZE, free_join_semilattice
from core.homs import upper_adjoint
from core.morphism import Morphism
from core.semilattice import Semilattice
from core.shelter import shelter_object

logger = logging.getLogger(__name__)

FREE_ALGEBRA_CAP = 1 << 22

Point = Tuple[int, ...]


@dataclass
class ColimitResult:
    diagram: Diagram
    apex: Semilattice
    legs: Tuple[Morphism, ...]
    tuples: Tuple[Point, ...]

    def leg(self, i: int) -> Morphism:
        return self.legs[i]

    @property
    def generator_map(self) -> Dict[int, Tuple[Tuple[int, int], ...]]:
        """Apex element -> vertex elements whose leg images join to it."""
        zeros = [v.zero for v in self.diagram.vertices]
        return {
            e: tuple((i, x) for i, x in enumerate(t) if x != zeros[i])
            for e, t in enumerate(self.tuples)
        }

    def cocone(self) -> Cocone:
        return Cocone(self.apex, self.legs)


class _Closure:
    """Least closed tuple above a given tuple."""

    def __init__(self, d: Diagram) -> None:
        self._tables = [v.table for v in d.vertices]
        self._edges = [
            (i, j, f.map, upper_adjoint(f)) for (i, j), f in sorted(d.cover_arrows().items())
        ]

    def __call__(self, t: Sequence[int]) -> Point:
        t = list(t)
        tables = self._tables
        changed = True
        while changed:
            changed = False
            for i, j, fmap, fstar in self._edges:
                up = tables[j][t[j]][fmap[t[i]]]
                if up != t[j]:
                    t[j] = up
                    changed = True
                down = tables[i][t[i]][fstar[t[j]]]
                if down != t[i]:
                    t[i] = down
                    changed = True
        return tuple(t)


def colimit(
    d: Diagram,
    cap: int = FREE_ALGEBRA_CAP,
    dense_cap: int = DENSE_MAX_SIZE,
    canonical_cap: int = CANONICAL_CAP,
) -> ColimitResult:
    """Colimit of ``d`` with legs; the apex is canonically relabelled when small."""
    close = _Closure(d)
    vertices = d.vertices
    zeros = [v.zero for v in vertices]

    def unit(i: int, x: int) -> Point:
        t = list(zeros)
        t[i] = x
        return close(t)

    generators = sorted({unit(i, x) for i, v in enumerate(vertices) for x in v.join_irreducibles})
    bottom = close(zeros)
    found = {bottom}
    frontier = [bottom]
    limit = min(cap, dense_cap)
    while frontier:
        nxt = []
        for t in frontier:
            for g in generators:
                u = close([vertices[i].table[a][b] for i, (a, b) in enumerate(zip(t, g))])
                if u not in found:
                    found.add(u)
                    nxt.append(u)
                    if len(found) > limit:
                        error = DenseCapExceeded if limit == dense_cap < cap else SizeCapExceeded
                        raise error(
                            f"colimit of {d.size}-point diagram exceeds {limit} elements",
                            witness={"points": d.size, "sizes": [v.size for v in vertices]},
                        )
        frontier = nxt
    heights = [v.heights for v in vertices]
    tuples = sorted(found, key=lambda t: (sum(h[x] for h, x in zip(heights, t)), t))
    arr = np.asarray(tuples, dtype=np.intp).reshape(len(tuples), len(vertices))
    leq = np.ones((len(tuples), len(tuples)), dtype=bool)
    for i, v in enumerate(vertices):
        comp = arr[:, i]
        leq &= v.order[comp[:, None], comp[None, :]]
    apex = Semilattice.from_order(leq)
    if apex.size <= canonical_cap:
        canon, relabel = canonical_form(apex, canonical_cap)
        reordered: List[Point] = [()] * apex.size
        for k, t in enumerate(tuples):
            reordered[relabel(k)] = t
        apex, tuples = canon, reordered
    index = {t: k for k, t in enumerate(tuples)}
    legs = tuple(
        Morphism(v, apex, [index[unit(i, x)] for x in v.elements]) for i, v in enumerate(vertices)
    )
    logger.debug(
        "colimit of %d-point diagram: %d generators, apex of %d elements",
        d.size, len(generators), apex.size,
    )
    return ColimitResult(d, apex, legs, tuple(tuples))


# --- apexes without dense tables ---

SCAN_CHUNK = 1 << 14


class _RowClosure:
    """``_Closure`` applied to every row of an array at once."""

    def __init__(self, d: Diagram) -> None:
        self._joins = [v.array for v in d.vertices]
        self._meets = [v.meet_array for v in d.vertices]
        self._edges = [
            (i, j, np.asarray(f.map, dtype=np.intp), np.asarray(upper_adjoint(f), dtype=np.intp))
            for (i, j), f in sorted(d.cover_arrows().items())
        ]

    def join(self, rows: np.ndarray, other: np.ndarray) -> np.ndarray:
        other = np.broadcast_to(other, rows.shape)
        return np.stack([t[rows[:, i], other[:, i]] for i, t in enumerate(self._joins)], axis=1)

    def meet(self, rows: np.ndarray, other: np.ndarray) -> np.ndarray:
        other = np.broadcast_to(other, rows.shape)
        return np.stack([t[rows[:, i], other[:, i]] for i, t in enumerate(self._meets)], axis=1)

    def __call__(self, rows: np.ndarray) -> np.ndarray:
        rows = np.array(rows, dtype=np.intp)
        joins = self._joins
        changed = True
        while changed:
            changed = False
            for i, j, fmap, fstar in self._edges:
                up = joins[j][rows[:, j], fmap[rows[:, i]]]
                if not np.array_equal(up, rows[:, j]):
                    rows[:, j] = up
                    changed = True
                down = joins[i][rows[:, i], fstar[rows[:, j]]]
                if not np.array_equal(down, rows[:, i]):
                    rows[:, i] = down
                    changed = True
        return rows


def _keys(rows: np.ndarray) -> List[bytes]:
    rows = np.ascontiguousarray(rows)
    return rows.view(np.dtype((np.void, rows.dtype.itemsize * rows.shape[1]))).ravel().tolist()


@dataclass(frozen=True, eq=False)
class TupleScan:
    """The apex of a diagram as an array of closed tuples, one row per element.

    ``meet_irreducible`` flags the rows of M(apex); it is read off the upper
    covers ``close(t ∨ g)`` met while the rows were generated.
    """

    diagram: Diagram
    rows: np.ndarray
    meet_irreducible: np.ndarray
    generators: np.ndarray
    close: _RowClosure = field(repr=False)

    @property
    def size(self) -> int:
        return int(self.rows.shape[0])

    @property
    def mirr(self) -> np.ndarray:
        return self.rows[self.meet_irreducible]

    def units(self, point: int, xs: Sequence[int]) -> np.ndarray:
        """Leg images of ``xs`` at ``point``."""
        zeros = np.array([v.zero for v in self.diagram.vertices], dtype=np.intp)
        seeds = np.tile(zeros, (len(xs), 1))
        seeds[:, point] = np.asarray(list(xs), dtype=np.intp)
        return self.close(seeds)

    def leq(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """``out[a, b]`` is True iff row ``lo[a]`` lies below row ``hi[b]``."""
        out = np.ones((len(lo), len(hi)), dtype=bool)
        for i, v in enumerate(self.diagram.vertices):
            out &= v.order[lo[:, i][:, None], hi[:, i][None, :]]
        return out


def scan_closed_tuples(d: Diagram, cap: int = FREE_ALGEBRA_CAP) -> TupleScan:
    """Enumerate the apex of ``d`` breadth-first, flagging meet-irreducibles on the way."""
    close = _RowClosure(d)
    vertices = d.vertices
    width = len(vertices)
    storage = np.min_scalar_type(max(v.size for v in vertices))
    zeros = np.array([v.zero for v in vertices], dtype=np.intp)
    top = np.array([v.top for v in vertices], dtype=np.intp)
    units = [(i, x) for i, v in enumerate(vertices) for x in v.join_irreducibles]
    seeds = np.tile(zeros, (len(units), 1))
    for n, (i, x) in enumerate(units):
        seeds[n, i] = x
    generators = np.unique(close(seeds), axis=0) if units else np.empty((0, width), dtype=np.intp)
    bottom = close(zeros[None, :]).astype(storage)
    seen = set(_keys(bottom))
    rows: List[np.ndarray] = []
    flags: List[np.ndarray] = []
    frontier = bottom
    while len(frontier):
        rows.append(frontier)
        nxt = []
        for start in range(0, len(frontier), SCAN_CHUNK):
            block = frontier[start:start + SCAN_CHUNK].astype(np.intp)
            above = np.tile(top, (len(block), 1))
            for g in generators:
                cand = close(close.join(block, g))
                strict = np.any(cand != block, axis=1)
                above[strict] = close.meet(above[strict], cand[strict])
                cand = cand.astype(storage)
                fresh = []
                for n, key in enumerate(_keys(cand)):
                    if strict[n] and key not in seen:
                        seen.add(key)
                        fresh.append(n)
                if fresh:
                    nxt.append(cand[fresh])
            flags.append(np.any(above != block, axis=1))
        if len(seen) > cap:
            raise SizeCapExceeded(
                f"colimit of {d.size}-point diagram exceeds {cap} elements",
                witness={"points": d.size, "generators": len(generators), "closed_tuples": len(seen)},
            )
        frontier = np.concatenate(nxt) if nxt else np.empty((0, width), dtype=storage)
    scan = TupleScan(d, np.concatenate(rows), np.concatenate(flags), generators, close)
    logger.debug(
        "scanned %d-point diagram: %d generators, %d closed tuples, %d meet-irreducible",
        d.size, len(generators), scan.size, int(scan.meet_irreducible.sum()),
    )
    return scan


def factor_through(c: ColimitResult, k: Cocone) -> Morphism:
    """The unique ``h`` with ``h ∘ leg_i = k_i`` for every point ``i``."""
    k.validate(c.diagram)
    target = k.target
    mapping = [
        target.join_all(comp(x) for comp, x in zip(k.components, t)) for t in c.tuples
    ]
    h = Morphism(c.apex, target, mapping)
    for i, (leg, comp) in enumerate(zip(c.legs, k.components)):
        composite = h * leg
        if composite.map != comp.map:
            x = next(x for x in leg.src.elements if composite(x) != comp(x))
            raise Inconsistent(
                f"factorization disagrees with component {i} at {x}", witness=(i, x)
            )
    if not h.is_hom:
        raise Inconsistent("factorization is not a ⟨∨,0⟩-homomorphism", witness=h.join_witness)
    return h


def pushout_amalgamate(
    phi: Morphism, eps0: Morphism, *, boolean: bool = False
) -> Tuple[Semilattice, Morphism, Morphism]:
    """Pushout of two embeddings with a common source.

    Returns ``(apex, leg1, leg2)`` with ``leg1 ∘ phi = leg2 ∘ eps0``. With
    ``boolean`` the apex is replaced by its Boolean shelter.
    """
    if not phi.src.same_structure(eps0.src):
        raise NotEmbedding("pushout legs must share a source")
    for name, f in (("phi", phi), ("eps0", eps0)):
        if not f.is_embedding:
            raise NotEmbedding(f"{name} is not a ⟨∨,0⟩-embedding", witness=list(f.map))
    result = colimit(span(phi.src, phi, eps0))
    apex, leg1, leg2 = result.apex, result.legs[1], result.legs[2]
    for leg in (leg1, leg2):
        if not leg.is_embedding:
            raise InternalConsistencyError("pushout leg along an embedding is not injective")
    if boolean:
        sh = shelter_object(apex)
        apex, leg1, leg2 = sh.booleanized, sh.eta * leg1, sh.eta * leg2
    return apex, leg1, leg2


def colimit_via_free_algebra(
    d: Diagram, cap: int = DENSE_MAX_SIZE
) -> Tuple[Semilattice, Tuple[Morphism, ...]]:
    """Reference colimit: free semilattice on the nonzero vertex elements modulo relations."""
    gens: List[Tuple[int, int]] = [
        (i, x) for i, v in enumerate(d.vertices) for x in v.elements if x != v.zero
    ]
    bit = {g: 1 << k for k, g in enumerate(gens)}
    free = free_join_semilattice(len(gens), cap)

    def word(i: int, x: int) -> int:
        return bit.get((i, x), 0)

    pairs = []
    for i, v in enumerate(d.vertices):
        for x in v.elements:
            for y in v.elements:
                pairs.append((word(i, x) | word(i, y), word(i, v.join(x, y))))
    for (i, j), f in d.cover_arrows().items():
        for x in d.vertex(i).elements:
            pairs.append((word(i, x), word(j, f(x))))
    partition = congruence_closure(free, pairs)
    q, proj = quotient(free, partition)
    legs = tuple(
        Morphism(v, q, [proj(word(i, x)) for x in v.elements]) for i, v in enumerate(d.vertices)
    )
    return q, legs


def leg_generators(c: ColimitResult) -> List[int]:
    """Apex elements that are leg images of join-irreducibles, sorted."""
    out = set()
    for i, v in enumerate(c.diagram.vertices):
        out.update(c.legs[i](x) for x in v.join_irreducibles)
    return sorted(out)
