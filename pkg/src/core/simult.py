"""Simultaneous lattice embeddings of direct systems into Boolean systems.

A simultaneous lattice embedding of a direct system ``(A_i, f_ij)`` is a
direct system of Boolean semilattices ``(B_i, g_ij)`` with lattice
embeddings ``ε_i: A_i -> B_i`` such that ``ε_j ∘ f_ij = g_ij ∘ ε_i``. This
module computes the boundary sets ``∂^{i,j} q``, the necessary condition
that every such embedding forces, μ-families of a given embedding, and a
bounded exhaustive search.

The search works with 0,1-preserving embeddings only: cutting every
``B_i`` down to ``[ε_i(0), ε_i(1)]`` turns any solution into one of that
form with no more atoms. Such an ``ε_i`` is fixed by a labeling
``σ_i: X_i -> J(A_i)`` of the atoms of ``B_i``, onto ``J(A_i)``, through
``ε_i(a) = {x : σ_i(x) ≤ a}``.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

from core.diagram import Diagram, DirectSystem
from core.errors import (
    BoundTooLarge,
    IllFormed,
    InternalConsistencyError,
    NotEmbedding,
    NotJoinIrreducible,
    NotMeetPreserving,
)
from core.free import free_join_semilattice
from core.models import LawReport
from core.morphism import Morphism
from core.semilattice import Semilattice
from utils.bitsets import bits, mask_of, popcount, submasks

logger = logging.getLogger(__name__)

Arrow = Tuple[int, int]

DEFAULT_MAX_ATOMS = 6
DEFAULT_WORK_LIMIT = 10 ** 8


# --- boundaries and the necessary condition ---

def boundary(sys: Diagram, i: int, j: int, q: int) -> Tuple[int, ...]:
    """``∂^{i,j} q``: minimal ``p ∈ A_i`` with ``q ≤ f_ij(p)``."""
    target = sys.vertex(j)
    if q not in target.join_irreducibles:
        raise NotJoinIrreducible(f"{q} is not join-irreducible in point {j}", witness=q)
    f = sys.arrow(i, j)
    src = sys.vertex(i)
    above = [p for p in src.elements if target.leq(q, f(p))]
    return tuple(p for p in above if not any(r != p and src.leq(r, p) for r in above))


@dataclass(frozen=True)
class Obstruction:
    """Candidate ``q`` fails because ``r ∈ ∂^{k,j} q`` breaks the condition."""
    q: int
    k: int
    r: int
    reason: str


@dataclass(frozen=True)
class Pass:
    q: int


@dataclass(frozen=True)
class Fail:
    obstructions: Tuple[Obstruction, ...]


def necess_check(sys: Diagram, i: int, j: int, p: int) -> Union[Pass, Fail]:
    """Look for ``q ≤ f_ij(p)`` in ``J(A_j)`` with ``∂^{i,j} q = {p}`` and, for
    every ``i ≤ k ≤ j`` and ``r ∈ ∂^{k,j} q``, ``r ≤ f_ik(1)`` implying
    ``r ≤ f_ik(p)``."""
    src = sys.vertex(i)
    if p not in src.join_irreducibles:
        raise NotJoinIrreducible(f"{p} is not join-irreducible in point {i}", witness=p)
    target = sys.vertex(j)
    f = sys.arrow(i, j)
    between = [k for k in range(sys.size) if sys.index.leq(i, k) and sys.index.leq(k, j)]
    obstructions: List[Obstruction] = []
    for q in target.join_irreducibles:
        if not target.leq(q, f(p)):
            continue
        found: List[Obstruction] = []
        for r in boundary(sys, i, j, q):
            if r != p:
                found.append(Obstruction(q, i, r, "boundary is not {p}"))
        for k in between:
            mid = sys.vertex(k)
            step = sys.arrow(i, k)
            top, image = step(src.top), step(p)
            for r in boundary(sys, k, j, q):
                if mid.leq(r, top) and not mid.leq(r, image):
                    found.append(Obstruction(q, k, r, "r ≤ f(1) but r ≰ f(p)"))
        if not found:
            return Pass(q)
        obstructions.extend(found)
    return Fail(tuple(obstructions))


def necessary_failures(sys: Diagram) -> List[Tuple[int, int, int, Fail]]:
    """Every ``(i, j, p)`` for which the necessary condition fails."""
    out = []
    for i in range(sys.size):
        for j in range(sys.size):
            if not sys.index.leq(i, j):
                continue
            for p in sys.vertex(i).join_irreducibles:
                verdict = necess_check(sys, i, j, p)
                if isinstance(verdict, Fail):
                    out.append((i, j, p, verdict))
    return out


# --- embeddings and μ-families ---

@dataclass(frozen=True)
class SimultEmbedding:
    source: DirectSystem
    targets: DirectSystem
    eps: Tuple[Morphism, ...]

    def validate(self) -> None:
        for i, e in enumerate(self.eps):
            if not (e.injective and e.is_lattice_hom):
                raise NotEmbedding(f"ε_{i} is not a lattice embedding", witness=list(e.map))
            if not self.targets.vertex(i).is_boolean():
                raise IllFormed(f"target {i} is not Boolean", witness=i)
        for (i, j), f in self.source.all_arrows().items():
            g = self.targets.arrow(i, j)
            if (self.eps[j] * f).map != (g * self.eps[i]).map:
                raise InternalConsistencyError(f"square {i}->{j} does not commute", witness=(i, j))


def _segment(b: Semilattice, lo: int, hi: int) -> Tuple[Semilattice, Tuple[int, ...]]:
    members = tuple(y for y in b.elements if b.leq(lo, y) and b.leq(y, hi))
    index = {y: n for n, y in enumerate(members)}
    table = [[index[b.join(x, y)] for y in members] for x in members]
    return Semilattice(table, index[lo], [b.label(y) for y in members], validate=False), members


@dataclass(frozen=True)
class MuFamily:
    targets: Tuple[Semilattice, ...]
    eps: Tuple[Morphism, ...]
    mu: Tuple[Morphism, ...]
    transitions: Dict[Arrow, Morphism]
    report: LawReport


def mu_family(se: SimultEmbedding) -> MuFamily:
    """``μ_i(x)`` = least ``a`` with ``x ≤ ε_i(a)``, after cutting ``B_i`` to ``[ε_i(0), ε_i(1)]``."""
    sys = se.source
    segments = []
    eps = []
    for i, e in enumerate(se.eps):
        if e.meet_witness is not None:
            raise NotMeetPreserving(f"ε_{i} does not preserve meets", witness=e.meet_witness)
        a, b = e.src, e.dst
        seg, members = _segment(b, e(a.zero), e(a.top))
        position = {y: n for n, y in enumerate(members)}
        segments.append((seg, members, position))
        eps.append(Morphism(a, seg, [position[e(x)] for x in a.elements]))

    mu = []
    for i, (seg, members, _) in enumerate(segments):
        a = sys.vertex(i)
        e = eps[i]
        mapping = [a.meet_all(x for x in a.elements if seg.leq(y, e(x))) for y in seg.elements]
        mu.append(Morphism(seg, a, mapping))

    transitions = {}
    for (i, j) in sys.all_arrows():
        g = se.targets.arrow(i, j)
        seg_i, members_i, _ = segments[i]
        seg_j, _, position_j = segments[j]
        transitions[(i, j)] = Morphism(seg_i, seg_j, [position_j[g(y)] for y in members_i])

    report = LawReport("mu-family")
    for i, (seg, _, _) in enumerate(segments):
        a, e, m = sys.vertex(i), eps[i], mu[i]
        subject = f"point {sys.names[i]!r}"
        report.check("μ_i∘ε_i = id", (m * e).map == tuple(a.elements), subject)
        report.check(
            "x ≤ ε_i∘μ_i(x)", all(seg.leq(y, e(m(y))) for y in seg.elements), subject
        )
        joins = set(a.join_irreducibles)
        stray = [y for y in seg.atoms if m(y) not in joins]
        report.check("μ_i sends atoms into J(A_i)", not stray, subject, stray)
        rebuilt = [seg.join_all(y for y in seg.atoms if a.leq(m(y), x)) for x in a.elements]
        report.check("ε_i(a) = ⋁{ξ : μ_i(ξ) ≤ a}", rebuilt == list(e.map), subject)

    for (i, j), g in transitions.items():
        if i == j:
            continue
        f = sys.arrow(i, j)
        seg_i, seg_j = segments[i][0], segments[j][0]
        target = sys.vertex(j)
        subject = f"{sys.names[i]!r} -> {sys.names[j]!r}"
        report.check(
            "μ_j∘g_ij ≤ f_ij∘μ_i",
            all(target.leq(mu[j](g(y)), f(mu[i](y))) for y in seg_i.elements),
            subject,
        )
        pairs = [(xi, eta) for xi in seg_i.atoms for eta in seg_j.atoms if seg_j.leq(eta, g(xi))]
        report.check(
            "ξ ⊴ η implies μ_j(η) ≤ f_ij(μ_i(ξ))",
            all(target.leq(mu[j](eta), f(mu[i](xi))) for xi, eta in pairs),
            subject,
        )
        joins_j = set(target.join_irreducibles)
        for eta in seg_j.atoms:
            q = mu[j](eta)
            if q not in joins_j:
                continue
            lifted = {mu[i](xi) for xi, e2 in pairs if e2 == eta}
            report.check(
                "∂^{i,j} μ_j(η) ⊆ {μ_i(ξ) : ξ ⊴ η}",
                set(boundary(sys, i, j, q)) <= lifted,
                subject,
                {"eta": eta, "q": q},
            )
    return MuFamily(tuple(s for s, _, _ in segments), tuple(eps), tuple(mu), transitions, report)


# --- bounded search ---

@dataclass(frozen=True)
class Found:
    embedding: SimultEmbedding
    work: int


@dataclass(frozen=True)
class Exhausted:
    work: int
    reason: str
    failures: Tuple[Tuple[int, int, int, Fail], ...] = field(default=())


@dataclass(frozen=True)
class _Atom:
    """An atom of ``B_k`` standing for the join-irreducible ``label``.

    ``entry[c]`` is the mask of atoms of ``B_j`` that ``g_jk`` sends onto it,
    for the ``c``-th lower cover ``j`` of ``k``; ``down[i]`` is the same
    preimage for every ``i < k``.
    """
    label: int
    entry: Tuple[int, ...]
    down: Dict[int, int]
    privates: FrozenSet[Tuple[int, int]]


def _join_order(a: Semilattice) -> List[int]:
    position = {x: n for n, x in enumerate(a.linear_extension)}
    return sorted(a.join_irreducibles, key=position.__getitem__)


class _Search:
    """Point-by-point backtracking over the atoms of every ``B_k``.

    Points are taken in topological order, so every ``B_j`` below ``k`` is
    fixed when ``B_k`` is chosen. An atom ``y`` of ``B_k`` with label ``q``
    commutes with ``g_jk`` iff the labels of its preimages contain
    ``∂^{j,k} q`` and lie above it, and composites agree iff the preimages
    in every ``B_i`` below agree. Atoms with the same label and the same
    preimages can be merged, so each label takes a set of distinct columns
    and a point with no lower cover takes one atom per label.
    ``g_jk`` is an embedding iff every atom of ``B_j`` is the only preimage
    of some atom of ``B_k``.
    """

    def __init__(self, sys: DirectSystem, max_atoms: int, work_limit: int) -> None:
        self.sys = sys
        self.max_atoms = max_atoms
        self.work_limit = work_limit
        self.work = 0
        self.order = sys.index.topological_order()
        self.covers = {k: sorted(sys.index.lower_covers(k)) for k in self.order}
        self.below = {
            k: [i for i in range(sys.size) if i != k and sys.index.leq(i, k)] for k in self.order
        }
        self.labels = {k: _join_order(sys.vertex(k)) for k in self.order}
        self.atoms: Dict[int, List[_Atom]] = {}
        self.solution: Optional[Dict[int, List[_Atom]]] = None

    def run(self, start: int = 0) -> bool:
        return self._point(start)

    def prefixes(self, depth: int) -> List[Dict[int, List[_Atom]]]:
        """Every choice of the first ``depth`` points, in search order."""
        out: List[Dict[int, List[_Atom]]] = []

        def walk(pos: int) -> None:
            if pos == depth:
                out.append({k: list(v) for k, v in self.atoms.items()})
                return
            for _ in self._selections(pos):
                walk(pos + 1)

        walk(0)
        return out

    def _tick(self) -> None:
        self.work += 1
        if self.work > self.work_limit:
            raise BoundTooLarge(f"search exceeded {self.work_limit} node expansions", witness=self.work)

    def _point(self, pos: int) -> bool:
        if pos == len(self.order):
            self.solution = {k: list(v) for k, v in self.atoms.items()}
            return True
        for _ in self._selections(pos):
            if self._point(pos + 1):
                return True
        return False

    def _selections(self, pos: int) -> Iterator[None]:
        k = self.order[pos]
        labels = self.labels[k]
        if not self.covers[k]:
            self._tick()
            self.atoms[k] = [_Atom(p, (), {}, frozenset()) for p in labels]
            yield
            del self.atoms[k]
            return
        columns = [self._columns(k, q) for q in labels]
        if any(not c for c in columns):
            return
        need = frozenset(
            (c, z) for c, j in enumerate(self.covers[k]) for z in range(len(self.atoms[j]))
        )
        later: List[FrozenSet[Tuple[int, int]]] = [frozenset()] * (len(labels) + 1)
        for n in reversed(range(len(labels))):
            later[n] = later[n + 1].union(*(a.privates for a in columns[n]))
        if not need <= later[0]:
            return
        yield from self._fill(k, 0, columns, later, need, [], frozenset())

    def _fill(
        self,
        k: int,
        n: int,
        columns: List[List[_Atom]],
        later: List[FrozenSet[Tuple[int, int]]],
        need: FrozenSet[Tuple[int, int]],
        chosen: List[_Atom],
        covered: FrozenSet[Tuple[int, int]],
    ) -> Iterator[None]:
        if n == len(columns):
            self.atoms[k] = chosen
            yield
            del self.atoms[k]
            return
        rest = len(columns) - n - 1
        room = self.max_atoms - len(chosen) - rest
        for size in range(1, min(room, len(columns[n])) + 1):
            for pick in combinations(columns[n], size):
                self._tick()
                got = covered.union(*(a.privates for a in pick))
                missing = need - got
                if not missing <= later[n + 1]:
                    continue
                widest = max(Counter(c for c, _ in missing).values(), default=0)
                if self.max_atoms - len(chosen) - size < max(rest, widest):
                    continue
                yield from self._fill(k, n + 1, columns, later, need, chosen + list(pick), got)

    def _columns(self, k: int, q: int) -> List[_Atom]:
        per_cover = [list(self._preimages(j, k, q)) for j in self.covers[k]]
        out = []
        for entry in product(*per_cover):
            down = self._descend(k, entry)
            if down is None:
                continue
            privates = frozenset(
                (c, m.bit_length() - 1) for c, m in enumerate(entry) if popcount(m) == 1
            )
            out.append(_Atom(q, entry, down, privates))
        out.sort(key=lambda a: (sum(popcount(m) for m in a.entry), a.entry))
        return out

    def _preimages(self, j: int, k: int, q: int) -> Iterator[int]:
        """Masks of atoms of ``B_j`` whose labels contain ``∂^{j,k} q`` and lie above it."""
        need = boundary(self.sys, j, k, q)
        if not need:
            yield 0
            return
        src = self.sys.vertex(j)
        atoms = self.atoms[j]
        allowed = mask_of(z for z, a in enumerate(atoms) if any(src.leq(r, a.label) for r in need))
        for m in submasks(allowed):
            present = {atoms[z].label for z in bits(m)}
            if all(r in present for r in need):
                yield m

    def _descend(self, k: int, entry: Sequence[int]) -> Optional[Dict[int, int]]:
        down: Dict[int, int] = {}
        for j, m in zip(self.covers[k], entry):
            via = dict.fromkeys(self.below[j], 0)
            via[j] = m
            for z in bits(m):
                for i, mask in self.atoms[j][z].down.items():
                    via[i] |= mask
            for i, mask in via.items():
                if down.setdefault(i, mask) != mask:
                    return None
        return down


def _apply(images: Sequence[int], mask: int) -> int:
    out = 0
    for x in bits(mask):
        out |= images[x]
    return out


def _embedding(sys: DirectSystem, atoms: Dict[int, List[_Atom]]) -> SimultEmbedding:
    targets = [free_join_semilattice(len(atoms[k]), 1 << len(atoms[k])) for k in range(sys.size)]
    eps = []
    for k, a in enumerate(sys.vertices):
        sigma = [x.label for x in atoms[k]]
        eps.append(
            Morphism(a, targets[k], [mask_of(x for x, p in enumerate(sigma) if a.leq(p, e)) for e in a.elements])
        )
    arrows = {}
    for k in range(sys.size):
        for c, j in enumerate(sorted(sys.index.lower_covers(k))):
            images = [
                mask_of(y for y, atom in enumerate(atoms[k]) if atom.entry[c] >> z & 1)
                for z in range(len(atoms[j]))
            ]
            arrows[(j, k)] = Morphism(targets[j], targets[k], [_apply(images, m) for m in targets[j].elements])
    boolean = DirectSystem(sys.index, targets, arrows, sys.names)
    se = SimultEmbedding(sys, boolean, tuple(eps))
    se.validate()
    return se


def _run_branch(job: Tuple[DirectSystem, int, int, Dict[int, List[_Atom]]]):
    sys, max_atoms, budget, prefix = job
    search = _Search(sys, max_atoms, budget)
    search.atoms = {k: list(v) for k, v in prefix.items()}
    search.run(len(prefix))
    return search.solution, search.work


def search_simultaneous(
    sys: DirectSystem,
    max_atoms: int = DEFAULT_MAX_ATOMS,
    *,
    work_limit: int = DEFAULT_WORK_LIMIT,
    workers: int = 1,
    check_necessary_condition: bool = True,
) -> Union[Found, Exhausted]:
    """Search Boolean targets with at most ``max_atoms`` atoms per point.

    With several workers the choices for the points up to the first one
    with a lower cover are split across processes; the first branch in
    search order with a solution wins either way. An exhausted search
    reports the triples where the necessary condition fails, and a found
    embedding for a system that fails it raises.
    """
    for i, v in enumerate(sys.vertices):
        witness = v.distributivity_witness()
        if witness is not None:
            return Exhausted(0, f"point {sys.names[i]!r} is not distributive")
    if any(len(v.join_irreducibles) > max_atoms for v in sys.vertices):
        return Exhausted(0, f"some point needs more than {max_atoms} atoms")

    search = _Search(sys, max_atoms, work_limit)
    if workers > 1:
        split = next((n for n, k in enumerate(search.order) if search.covers[k]), len(search.order) - 1)
        prefixes = search.prefixes(split + 1)
        logger.debug("searching %d branches on %d workers", len(prefixes), workers)
        budget = work_limit - search.work
        with ProcessPoolExecutor(max_workers=workers) as pool:
            jobs = [(sys, max_atoms, budget, prefix) for prefix in prefixes]
            results = list(pool.map(_run_branch, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
        work = search.work + sum(w for _, w in results)
        if work > work_limit:
            raise BoundTooLarge(f"search exceeded {work_limit} node expansions", witness=work)
        solution = next((s for s, _ in results if s is not None), None)
    else:
        search.run()
        work, solution = search.work, search.solution

    failures = tuple(necessary_failures(sys)) if check_necessary_condition else ()
    if solution is None:
        logger.debug("search exhausted after %d steps", work)
        return Exhausted(work, f"no embedding with at most {max_atoms} atoms per point", failures)
    if failures:
        raise InternalConsistencyError(
            "found an embedding although the necessary condition fails", witness=failures[0][:3]
        )
    return Found(_embedding(sys, solution), work)
