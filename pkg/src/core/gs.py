"""Grätzer–Schmidt extension ``GS(K)``.

Every element of K outside ``{0} ∪ At(K)`` receives two fresh atoms
``p_a^0, p_a^1`` placed after the indices of K (by a, then i). The order
is that of K together with ``p_a^i ≤ b ⟺ a ≤ b`` and no other relations
among the new atoms. GS(K) is atomistic and, for a lattice K with at least
two elements, lattice-simple; ``μ_K`` folds ``p_a^i`` back onto ``a``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from core.congruence import lattice_congruence_generated, lattice_congruences, quotient
from core.errors import IllFormed, InternalConsistencyError, NotEmbedding, NotLatticeHom, NotSurjective
from core.models import LawReport
from core.morphism import Morphism
from core.semilattice import Semilattice

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GSResult:
    base: Semilattice
    extended: Semilattice
    eps: Morphism
    mu: Morphism
    new_atoms: Dict[int, Tuple[int, int]]

    @property
    def non_atoms(self) -> Tuple[int, ...]:
        return tuple(self.new_atoms)


def non_atoms(k: Semilattice) -> Tuple[int, ...]:
    """``NAt K``: nonzero elements that are not atoms."""
    atoms = set(k.atoms)
    return tuple(x for x in k.elements if x != k.zero and x not in atoms)


@lru_cache(maxsize=256)
def gs_object(k: Semilattice) -> GSResult:
    n = k.size
    nat = non_atoms(k)
    size = n + 2 * len(nat)
    leq = np.zeros((size, size), dtype=bool)
    leq[:n, :n] = k.order
    leq[k.zero, :] = True
    for slot, a in enumerate(nat):
        for i in range(2):
            p = n + 2 * slot + i
            leq[p, p] = True
            leq[p, :n] = k.order[a]
    labels = [k.label(x) for x in k.elements]
    labels += [f"p[{k.label(a)}]^{i}" for a in nat for i in range(2)]
    extended = Semilattice.from_order(leq, labels)
    eps = Morphism(k, extended, list(k.elements))
    mu = Morphism(extended, k, list(k.elements) + [a for a in nat for _ in range(2)])
    if not mu.is_hom or (mu * eps).map != tuple(k.elements):
        raise InternalConsistencyError("μ_K is not a retraction of ε_K", witness=list(mu.map))
    new_atoms = {a: (n + 2 * slot, n + 2 * slot + 1) for slot, a in enumerate(nat)}
    logger.debug("GS of %d elements has %d elements", n, size)
    return GSResult(k, extended, eps, mu, new_atoms)


def gs_morphism(f: Morphism) -> Morphism:
    """``GS(f)``: f on K, ``p_a^i ↦ p_{f(a)}^i`` on the new atoms."""
    if not f.is_embedding:
        raise NotEmbedding("GS acts on ⟨∨,0⟩-embeddings only", witness=list(f.map))
    src, dst = gs_object(f.src), gs_object(f.dst)
    mapping = list(f.map)
    for a, pair in src.new_atoms.items():
        target = dst.new_atoms.get(f(a))
        if target is None:
            raise IllFormed(f"f sends the non-atom {a} to {f(a)}, which is not a non-atom", witness=(a, f(a)))
        mapping.extend(target)
    g = Morphism(src.extended, dst.extended, mapping)
    if not g.is_embedding:
        raise InternalConsistencyError("GS(f) is not an embedding", witness=list(g.map))
    if (g * src.eps).map != (dst.eps * f).map or (dst.mu * g).map != (f * src.mu).map:
        raise InternalConsistencyError("GS(f) does not commute with ε and μ", witness=list(f.map))
    if f.is_lattice_hom and not g.is_lattice_hom:
        raise InternalConsistencyError("GS(f) loses meet preservation", witness=list(f.map))
    return g


def _complement_atom(s: Semilattice, x: int, y: int) -> Optional[int]:
    for p in s.atoms:
        if s.join(x, p) == y and s.meet(x, p) == s.zero:
            return p
    return None


def _perspective_witness(s: Semilattice, a: int, b: int) -> Optional[int]:
    for x in s.elements:
        if s.meet(a, x) == s.zero and s.meet(b, x) == s.zero and s.join(a, x) == s.join(b, x):
            return x
    return None


def gs_checks(k: Semilattice, report: Optional[LawReport] = None, subject: Optional[str] = None) -> LawReport:
    """Structural properties of ``GS(k)`` as report entries."""
    report = report or LawReport("gs")
    res = gs_object(k)
    s = res.extended
    subject = subject or f"GS of {k.size}-element semilattice"
    atoms = s.atoms
    nat = non_atoms(k)

    report.check("μ_K∘ε_K = id", (res.mu * res.eps).map == tuple(k.elements), subject)
    report.check(
        "ε_K preserves joins and meets",
        res.eps.preserves_join and res.eps.preserves_meet,
        subject,
        res.eps.meet_witness,
    )
    report.check("|At GS(K)| = |At K| + 2|NAt K|", len(atoms) == len(k.atoms) + 2 * len(nat), subject)
    report.check("GS(K) is atomistic", s.is_atomistic(), subject)

    pair_joins = {s.join(a, b) for a, b in combinations(atoms, 2)}
    short = [x for x in s.elements if x != s.zero and x not in atoms and x not in pair_joins]
    report.check("every element is a join of at most two atoms", not short, subject, short)

    gaps = [
        (x, y)
        for x in s.elements
        for y in s.elements
        if x != s.zero and x != y and s.leq(x, y) and _complement_atom(s, x, y) is None
    ]
    report.check("0 < x < y has an atom p with y = x ⊕ p", not gaps, subject, gaps[:5])

    witnesses = {}
    for a, b in combinations(atoms, 2):
        x = _perspective_witness(s, a, b)
        report.check("atoms are perspective", x is not None, subject, (a, b))
        witnesses[f"{a},{b}"] = x
    report.notes.setdefault("perspectivity", {})[subject] = witnesses

    if k.size >= 2:
        coarse = [pair for pair in s.covers if len(lattice_congruence_generated(s, [pair])) != 1]
        report.check("GS(K) is lattice-simple", not coarse, subject, coarse[:5])
    return report


def gs_naturality(embeddings: Iterable[Morphism], report: Optional[LawReport] = None) -> LawReport:
    """Naturality and functoriality of GS on the given embeddings."""
    report = report or LawReport("gs")
    maps: List[Morphism] = list(embeddings)
    images = {}
    for n, f in enumerate(maps):
        try:
            images[n] = gs_morphism(f)
            report.check("GS(f) squares commute", True, f"embedding {n}")
        except InternalConsistencyError as e:
            report.check("GS(f) squares commute", False, f"embedding {n}", str(e))
    for (m, f), (n, g) in ((a, b) for a in enumerate(maps) for b in enumerate(maps)):
        if m not in images or n not in images or not f.dst.same_structure(g.src):
            continue
        composite = gs_morphism(g * f)
        report.check(
            "GS(g∘f) = GS(g)∘GS(f)",
            composite.map == (images[n] * images[m]).map,
            f"embeddings {m}, {n}",
        )
    return report


# --- atomistic images ---

def atomistic_image_check(l: Semilattice, g: Morphism, report: Optional[LawReport] = None) -> LawReport:
    """A surjective lattice homomorphism out of an atomistic lattice has an atomistic image."""
    report = report or LawReport("atomistic-image")
    if not g.surjective:
        missing = sorted(set(g.dst.elements) - set(g.map))
        raise NotSurjective("image check needs a surjection", witness=missing)
    if not g.is_lattice_hom:
        raise NotLatticeHom(
            "image check needs a lattice homomorphism", witness=g.join_witness or g.meet_witness
        )
    subject = f"{l.size} ↠ {g.dst.size}"
    report.check("source is atomistic", l.is_atomistic(), subject)
    strays = [a for a in l.atoms if g(a) != g.dst.zero and g(a) not in g.dst.atoms]
    report.check("atoms map to atoms or zero", not strays, subject, strays)
    report.check("image is atomistic", g.dst.is_atomistic(), subject, list(g.map))
    return report


def lattice_images(l: Semilattice) -> List[Morphism]:
    """Every surjective lattice homomorphism out of ``l``, up to isomorphism of the target."""
    out = []
    for theta in lattice_congruences(l):
        _, projection = quotient(l, theta)
        out.append(projection)
    return out
