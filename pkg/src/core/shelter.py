"""Boolean shelter of a finite semilattice and the largest-extension operator.

``B(S)`` is the powerset of ``M(S)`` under union, with atom ``k`` standing
for the k-th meet-irreducible of S in index order, and
``η_S(a) = {u ∈ M(S) : a ≰ u}``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Tuple, Union

from core.errors import (
    InternalConsistencyError,
    NotDistributive,
    NotEmbedding,
    NotIso,
    NotJoinPreserving,
    NotZeroPreserving,
)
from core.free import free_join_semilattice
from core.homs import upper_adjoint
from core.models import LawReport
from core.morphism import Morphism
from core.semilattice import Semilattice
from utils.bitsets import bits, mask_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShelterResult:
    base: Semilattice
    booleanized: Semilattice
    eta: Morphism
    mirr: Tuple[int, ...]

    @property
    def mirr_labels(self) -> Tuple[str, ...]:
        return tuple(self.base.label(u) for u in self.mirr)


@lru_cache(maxsize=512)
def shelter_object(s: Semilattice) -> ShelterResult:
    mirr = s.meet_irreducibles
    boolean = free_join_semilattice(len(mirr), names=[s.label(u) for u in mirr])
    eta = Morphism(
        s,
        boolean,
        [mask_of(k for k, u in enumerate(mirr) if not s.leq(a, u)) for a in s.elements],
    )
    if not (eta.is_embedding and eta.preserves_unit):
        raise InternalConsistencyError("η is not a ⟨∨,0,1⟩-embedding", witness=list(eta.map))
    return ShelterResult(s, boolean, eta, mirr)


def shelter_iso(f: Morphism) -> Morphism:
    """``B(f)``: the isomorphism ``B(S) -> B(T)`` mapping atoms through ``f``."""
    if not f.is_iso:
        raise NotIso("shelter is only functorial on isomorphisms", witness=list(f.map))
    src, dst = shelter_object(f.src), shelter_object(f.dst)
    position = {u: k for k, u in enumerate(dst.mirr)}
    atom = [position[f(u)] for u in src.mirr]
    mapping = [mask_of(atom[k] for k in bits(mask)) for mask in src.booleanized.elements]
    return Morphism(src.booleanized, dst.booleanized, mapping)


def largest_extension(g: Morphism, e: Morphism) -> Morphism:
    """Largest ⟨∨,0⟩-homomorphism ``h: T -> D`` with ``h ∘ e = g``.

    ``h(t) = ⋀{g(s) : t ≤ e(s)}``, the empty meet being the top of D.
    """
    if not e.is_embedding:
        raise NotEmbedding("extension needs an embedding", witness=list(e.map))
    if not g.src.same_structure(e.src):
        raise NotEmbedding("g and e must share a source")
    if g.join_witness is not None:
        raise NotJoinPreserving("g is not join-preserving", witness=g.join_witness)
    if not g.preserves_zero:
        raise NotZeroPreserving("g does not preserve zero", witness=(g.src.zero,))
    target = g.dst
    witness = target.distributivity_witness()
    if witness is not None:
        raise NotDistributive("extension target is not distributive", witness=witness)
    s, t = e.src, e.dst
    order = t.order
    mapping = [
        target.meet_all(g(x) for x in s.elements if order[y, e(x)]) for y in t.elements
    ]
    h = Morphism(t, target, mapping)
    if (h * e).map != g.map:
        raise InternalConsistencyError("largest extension does not extend g", witness=list(h.map))
    if not h.is_hom:
        raise InternalConsistencyError(
            "largest extension is not a ⟨∨,0⟩-homomorphism", witness=h.join_witness
        )
    return h


def shelter_extension(g: Morphism) -> Morphism:
    """``g^B``: the largest extension of ``g`` along ``η``."""
    return largest_extension(g, shelter_object(g.src).eta)


# --- shelter laws ---

@dataclass(frozen=True)
class IsoSample:
    """``f: S -> T`` an isomorphism, ``g: T -> A`` a homomorphism."""
    f: Morphism
    g: Morphism


@dataclass(frozen=True)
class PostSample:
    """``h: S -> A`` a homomorphism, ``u: A -> A'`` an isomorphism."""
    h: Morphism
    u: Morphism


Sample = Union[IsoSample, PostSample]


def verify_shelter_laws(samples: Iterable[Sample], report: Optional[LawReport] = None) -> LawReport:
    """Check ``g^B ∘ B(f) = (g∘f)^B`` and ``(u∘h)^B = u ∘ h^B`` on every sample."""
    report = report or LawReport("shelter-laws")
    for k, sample in enumerate(samples):
        if isinstance(sample, IsoSample):
            f, g = sample.f, sample.g
            lhs = shelter_extension(g) * shelter_iso(f)
            rhs = shelter_extension(g * f)
            report.check(
                "g^B∘B(f) = (g∘f)^B",
                lhs.map == rhs.map,
                f"sample {k}",
                {"f": f.map, "g": g.map, "lhs": lhs.map, "rhs": rhs.map},
            )
        else:
            h, u = sample.h, sample.u
            lhs = shelter_extension(u * h)
            rhs = u * shelter_extension(h)
            report.check(
                "(u∘h)^B = u∘h^B",
                lhs.map == rhs.map,
                f"sample {k}",
                {"h": h.map, "u": u.map, "lhs": lhs.map, "rhs": rhs.map},
            )
        eta_src = shelter_object(sample.f.src if isinstance(sample, IsoSample) else sample.h.src)
        report.check(
            "η is a ⟨∨,0,1⟩-embedding",
            eta_src.eta.is_embedding and eta_src.eta.preserves_unit,
            f"sample {k}",
        )
        if isinstance(sample, IsoSample):
            a, b = shelter_object(sample.f.src), shelter_object(sample.f.dst)
            natural = (shelter_iso(sample.f) * a.eta).map == (b.eta * sample.f).map
            report.check("B(f)∘η_S = η_T∘f", natural, f"sample {k}", sample.f.map)
    return report


# --- classical comparisons ---

def universal_boolean(d: Semilattice) -> Tuple[Semilattice, Morphism]:
    """``Bool(D) = P(D^=)`` with ``ε(a) = {x ∈ D^= : a ≰ x}``; no retraction in general."""
    lower = [x for x in d.elements if x != d.top]
    boolean = free_join_semilattice(len(lower), names=[d.label(x) for x in lower])
    eps = Morphism(
        d, boolean, [mask_of(k for k, x in enumerate(lower) if not d.leq(a, x)) for a in d.elements]
    )
    return boolean, eps


def universal_boolean_map(f: Morphism) -> Morphism:
    """Lattice embedding ``Bool(D) -> Bool(E)`` induced by an embedding ``f: D -> E``.

    ``y ∈ E^=`` belongs to the image of X iff ``f*(y) ∈ X``, where ``f*`` is
    the upper adjoint of f.
    """
    if not f.is_embedding:
        raise NotEmbedding("universal Boolean map needs an embedding", witness=list(f.map))
    d, e = f.src, f.dst
    src, _ = universal_boolean(d)
    dst, _ = universal_boolean(e)
    lower_d = [x for x in d.elements if x != d.top]
    lower_e = [y for y in e.elements if y != e.top]
    pos_d = {x: k for k, x in enumerate(lower_d)}
    star = upper_adjoint(f)
    pulled = [pos_d.get(star[y]) for y in lower_e]
    mapping = [
        mask_of(k for k, p in enumerate(pulled) if p is not None and mask >> p & 1)
        for mask in src.elements
    ]
    return Morphism(src, dst, mapping)


def birkhoff_cover(d: Semilattice) -> Tuple[Semilattice, Morphism, Morphism]:
    """``P(J(D))`` with ``ε(a) = {p ∈ J(D) : p ≤ a}`` and ``μ(X) = ⋁X``."""
    witness = d.distributivity_witness()
    if witness is not None:
        raise NotDistributive("Birkhoff embedding needs a distributive lattice", witness=witness)
    joins = d.join_irreducibles
    boolean = free_join_semilattice(len(joins), names=[d.label(p) for p in joins])
    eps = Morphism(d, boolean, [mask_of(k for k, p in enumerate(joins) if d.leq(p, a)) for a in d.elements])
    mu = Morphism(boolean, d, [d.join_all(joins[k] for k in bits(m)) for m in boolean.elements])
    return boolean, eps, mu


def birkhoff_extension(f: Morphism) -> Morphism:
    """``ε_E ∘ f ∘ μ_D``; need not be injective even for ``f = id``."""
    _, _, mu = birkhoff_cover(f.src)
    _, eps, _ = birkhoff_cover(f.dst)
    return eps * f * mu


def is_retraction_morphism(
    f: Morphism,
    g: Morphism,
    cover_x: Tuple[Morphism, Morphism],
    cover_y: Tuple[Morphism, Morphism],
) -> bool:
    """Whether ``g`` lies over ``f``: ``g∘ε_X = ε_Y∘f`` and ``μ_Y∘g = f∘μ_X``."""
    eps_x, mu_x = cover_x
    eps_y, mu_y = cover_y
    return (g * eps_x).map == (eps_y * f).map and (mu_y * g).map == (f * mu_x).map
