"""Canonical Boolean covers: the diagram ρ_A, Φ_*(A), Φ(A) and their action on embeddings.

Everything is computed on canonical objects and keyed in a ``CoverStore``.
An arbitrary presentation ``a`` is handled by transport through the
canonical relabeling ``c: a -> K``. For a canonical K the recursion runs
over its proper subobjects, smallest first:

* ρ_K has a point ``(X, 0)`` carrying X for every subobject and a point
  ``(X, 1)`` carrying Φ(K_X) for every proper one, K_X being the canonical
  form of X;
* Φ_*(K) is the colimit of ρ_K, ε^K the leg at ``(K, 0)``, and μ^K the
  factorization of the cocone ``incl_X`` / ``incl_X ∘ c_X⁻¹ ∘ μ_{K_X}``;
* Φ(K) is the Boolean shelter of Φ_*(K).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.canonical import canonical_form, content_key
from core.colimit import ColimitResult, colimit, factor_through, scan_closed_tuples
from core.cover_store import CoverEntry, CoverStore, Subset
from core.diagram import Cocone, Diagram, DirectSystem
from core.errors import (
    DenseCapExceeded,
    IllFormed,
    InternalConsistencyError,
    MissingDependency,
    NotDistributive,
    NotEmbedding,
    NotIso,
    SizeCapExceeded,
)
from core.models import LawReport
from core.morphism import Morphism, corestrict, identity, inverse
from core.poset import Poset
from core.semilattice import Semilattice, interval, restrict
from core.shelter import largest_extension, shelter_iso, shelter_object
from core.subobjects import SubobjectPoset, subobject_poset
from utils.bitsets import bits, mask_of

logger = logging.getLogger(__name__)

BOUND_MAX_BITS = 4096


@dataclass(frozen=True)
class _Piece:
    """One subobject X of K with its canonical presentation."""
    subset: Subset
    sub: Semilattice
    incl: Morphism
    canon: Semilattice
    to_canon: Morphism
    key: str


@dataclass(frozen=True)
class _Rho:
    diagram: Diagram
    subobjects: SubobjectPoset
    pieces: Dict[Subset, _Piece]


# --- ρ and the colimit stage ---

def _pieces(k: Semilattice, subs: SubobjectPoset, canonical_cap: int) -> Dict[Subset, _Piece]:
    pieces = {}
    for x in subs.subobjects:
        sub = restrict(k, x)
        canon, to_canon = canonical_form(sub, canonical_cap)
        pieces[x] = _Piece(x, sub, Morphism(sub, k, x), canon, to_canon, content_key(canon))
    return pieces


def _require(store: CoverStore, piece: _Piece) -> CoverEntry:
    entry = store.get(piece.key)
    if entry is None:
        raise MissingDependency(
            f"no cover entry for the {piece.canon.size}-element subobject {list(piece.subset)}",
            witness=list(piece.subset),
        )
    return entry


def _rho(k: Semilattice, store: CoverStore) -> _Rho:
    subs = subobject_poset(k)
    pieces = _pieces(k, subs, store.canonical_cap)
    proper = set(subs.proper())
    names: List[Tuple[Subset, int]] = [(x, 0) for x in subs.subobjects]
    names += [(x, 1) for x in subs.proper()]
    point = {n: i for i, n in enumerate(names)}
    vertices: List[Semilattice] = [pieces[x].sub for x in subs.subobjects]
    vertices += [_require(store, pieces[x]).phi for x in subs.proper()]

    arrows: Dict[Tuple[int, int], Morphism] = {}
    for x in subs.proper():
        piece = pieces[x]
        arrows[point[(x, 0)], point[(x, 1)]] = _require(store, piece).eps * piece.to_canon
    for a, b in subs.poset.covers:
        x, y = subs.subobjects[a], subs.subobjects[b]
        px, py = pieces[x], pieces[y]
        position = {e: n for n, e in enumerate(y)}
        arrows[point[(x, 0)], point[(y, 0)]] = Morphism(px.sub, py.sub, [position[e] for e in x])
        if y in proper:
            h = py.to_canon * Morphism(px.sub, py.sub, [position[e] for e in x]) * inverse(px.to_canon)
            arrows[point[(x, 1)], point[(y, 1)]] = phi_canonical(h, store)
    relation = [(point[(x, i)], point[(y, j)]) for (x, i), (y, j) in _rho_covers(subs, proper)]
    index = Poset(len(names), relation)
    diagram = Diagram(index, vertices, arrows, names)
    return _Rho(diagram, subs, pieces)


def _rho_covers(subs: SubobjectPoset, proper: set) -> List[Tuple[Tuple[Subset, int], Tuple[Subset, int]]]:
    pairs = [((x, 0), (x, 1)) for x in subs.proper()]
    for a, b in subs.poset.covers:
        x, y = subs.subobjects[a], subs.subobjects[b]
        pairs.append(((x, 0), (y, 0)))
        if y in proper:
            pairs.append(((x, 1), (y, 1)))
    return pairs


def _rho_colimit(k: Semilattice, store: CoverStore) -> Tuple[_Rho, ColimitResult]:
    key = content_key(k)
    cached = store.colimits.get(key)
    if cached is not None:
        return cached
    rho = _rho(k, store)
    result = colimit(rho.diagram, store.free_algebra_cap, store.dense_cap, store.canonical_cap)
    entry = store.get(key)
    if entry is not None and not result.apex.same_structure(entry.phi_star):
        raise InternalConsistencyError(
            f"recomputed colimit for {key} differs from the stored Φ_*", witness=key
        )
    with store.lock:
        store.colimits.setdefault(key, (rho, result))
    return store.colimits[key]


def build_rho(a: Semilattice, store: CoverStore) -> Diagram:
    """The diagram ρ of the canonical form of ``a``; proper subobjects must be in ``store``."""
    k, _ = canonical_form(a, store.canonical_cap)
    return _rho(k, store).diagram


def _retract_cocone(k: Semilattice, rho: _Rho, store: CoverStore) -> Cocone:
    """``incl_X`` at ``(X, 0)`` and ``incl_X ∘ c_X⁻¹ ∘ μ_{K_X}`` at ``(X, 1)``."""
    components = []
    for x, i in rho.diagram.names:
        piece = rho.pieces[x]
        if i == 0:
            components.append(piece.incl)
        else:
            sub_entry = _require(store, piece)
            components.append(piece.incl * inverse(piece.to_canon) * sub_entry.mu)
    return Cocone(k, tuple(components))


def _compute_entry(k: Semilattice, store: CoverStore) -> CoverEntry:
    key = content_key(k)
    rho, result = _rho_colimit(k, store)
    d, subs, pieces = rho.diagram, rho.subobjects, rho.pieces
    full = subs.full
    eps_upper = Morphism(k, result.apex, result.leg(d.point((full, 0))).map)
    retract = factor_through(result, _retract_cocone(k, rho, store))
    mu_upper = Morphism(result.apex, k, retract.map)
    if (mu_upper * eps_upper).map != identity(k).map:
        raise InternalConsistencyError("μ^A∘ε^A is not the identity", witness=key)

    sh = shelter_object(result.apex)
    eps = sh.eta * eps_upper
    mu = largest_extension(mu_upper, sh.eta)
    sub_legs = {}
    sub_keys = {}
    for x in subs.proper():
        star = result.leg(d.point((x, 1)))
        sub_legs[x] = (star, sh.eta * star)
        sub_keys[x] = pieces[x].key
    entry = CoverEntry(key, k, result.apex, eps_upper, mu_upper, sh.booleanized, eps, mu, sub_legs, sub_keys)
    _verify_entry(entry)
    logger.debug(
        "Φ of %d-element object %s: %d subobjects, |Φ_*| = %d, |Φ| = %d",
        k.size, key, len(subs.subobjects), result.apex.size, sh.booleanized.size,
    )
    return store.put(entry)


def _verify_entry(entry: CoverEntry) -> None:
    ident = list(entry.obj.elements)
    if list((entry.mu * entry.eps).map) != ident:
        raise InternalConsistencyError("μ_A∘ε_A is not the identity", witness=entry.key)
    if not (entry.eps.is_embedding and entry.eps.preserves_unit):
        raise InternalConsistencyError("ε_A is not a ⟨∨,0,1⟩-embedding", witness=list(entry.eps.map))
    if not entry.phi.is_boolean():
        raise InternalConsistencyError("Φ(A) is not Boolean", witness=entry.key)


def ensure_entry(k: Semilattice, store: CoverStore) -> CoverEntry:
    """Cover entry of a canonical object, computing missing subobject entries first."""
    key = content_key(k)
    entry = store.get(key)
    if entry is not None:
        return entry
    if k.size > store.phi_max_size:
        raise SizeCapExceeded(
            f"Φ is limited to {store.phi_max_size}-element objects, got {k.size}",
            witness=k.size,
        )
    with store.lock:
        entry = store.get(key)
        if entry is not None:
            return entry
        _ensure_subobjects(k, store)
        return _compute_entry(k, store)


def _ensure_subobjects(k: Semilattice, store: CoverStore) -> None:
    subs = subobject_poset(k)
    pending: Dict[str, Semilattice] = {}
    for x in subs.proper():
        canon, _ = canonical_form(restrict(k, x), store.canonical_cap)
        pending.setdefault(content_key(canon), canon)
    worklist = sorted(pending.values(), key=lambda s: (s.size, s.table))
    logger.debug("cover worklist for %s: %d subobject classes", content_key(k), len(worklist))
    with store.lock:
        for canon in worklist:
            if store.get(content_key(canon)) is None:
                _compute_entry(canon, store)


# --- sparse covers ---

@dataclass(frozen=True, eq=False)
class SparseCover:
    """Φ-data of an object whose Φ_*(A) or Φ(A) has no dense table.

    Φ_*(A) is held as closed tuples. Φ(A) is the powerset of M(Φ_*(A)), so
    its elements are bit masks over the rows of ``mirr`` and are never
    enumerated. ``mu_atoms[u]`` is μ_A of the atom ``{u}``.
    """

    key: str
    obj: Semilattice
    subobjects: int
    phi_star_size: int
    generating_set: int
    mirr: np.ndarray
    eps: Tuple[int, ...]
    mu_atoms: Tuple[int, ...]
    retract_upper: Tuple[int, ...]

    @property
    def atoms(self) -> int:
        return len(self.mu_atoms)

    @property
    def phi_size(self) -> int:
        return 1 << self.atoms

    def mu(self, mask: int) -> int:
        return self.obj.join_all(self.mu_atoms[u] for u in bits(mask))

    def check(self, report: LawReport, subject: str) -> None:
        """The retraction laws, on the images of ε_A."""
        a = self.obj
        ident = tuple(a.elements)
        full = self.phi_size - 1
        report.check("μ_A∘ε_A = id", tuple(self.mu(m) for m in self.eps) == ident, subject)
        report.check("μ^A∘ε^A = id", self.retract_upper == ident, subject)
        embedding = (
            len(set(self.eps)) == a.size
            and self.eps[a.zero] == 0
            and self.eps[a.top] == full
            and all(self.eps[a.join(x, y)] == self.eps[x] | self.eps[y] for x in ident for y in ident)
        )
        report.check("ε_A is a ⟨∨,0,1⟩-embedding", embedding, subject, list(self.eps))
        onto = self.mu(0) == a.zero and all(
            self.mu(self.eps[x] | self.eps[y]) == a.join(x, y) for x in ident for y in ident
        )
        report.check("μ_A is a surjective homomorphism", onto, subject)

    def summary(self) -> dict:
        return {
            "key": self.key,
            "object_size": self.obj.size,
            "subobjects": self.subobjects,
            "phi_star_size": self.phi_star_size,
            "phi_atoms": self.atoms,
            "eps": list(self.eps),
            "mu_atoms": list(self.mu_atoms),
        }


def sparse_cover(a: Semilattice, store: CoverStore) -> SparseCover:
    """Φ-data of ``a`` built from a closed-tuple scan of its canonical form.

    Proper subobjects still need dense entries. The scan stops at
    ``store.free_algebra_cap`` closed tuples.
    """
    witness = a.distributivity_witness()
    if witness is not None:
        raise NotDistributive("Φ is only defined on distributive objects", witness=witness)
    k, c = canonical_form(a, store.canonical_cap)
    cover = _sparse_canonical(k, store)
    if a == k:
        return cover
    back = inverse(c)
    return replace(
        cover,
        obj=a,
        eps=tuple(cover.eps[c(x)] for x in a.elements),
        mu_atoms=tuple(back(y) for y in cover.mu_atoms),
        retract_upper=tuple(back(cover.retract_upper[c(x)]) for x in a.elements),
    )


def _sparse_canonical(k: Semilattice, store: CoverStore) -> SparseCover:
    key = content_key(k)
    cached = store.sparse.get(key)
    if cached is not None:
        return cached
    if k.size > store.phi_max_size:
        raise SizeCapExceeded(
            f"Φ is limited to {store.phi_max_size}-element objects, got {k.size}",
            witness=k.size,
        )
    try:
        _ensure_subobjects(k, store)
    except DenseCapExceeded as e:
        raise SizeCapExceeded(f"a proper subobject of {key} has no dense cover: {e}", witness=key) from e
    rho = _rho(k, store)
    d, subs = rho.diagram, rho.subobjects
    try:
        scan = scan_closed_tuples(d, store.free_algebra_cap)
    except SizeCapExceeded as e:
        generators = e.witness["generators"]
        raise SizeCapExceeded(
            f"Φ_* of the {k.size}-element object {key}: {len(subs.subobjects)} subobjects, "
            f"{generators} generators (free algebra of 2^{generators} elements), "
            f"more than {store.free_algebra_cap} closed tuples",
            witness={
                "key": key,
                "size": k.size,
                "subobjects": len(subs.subobjects),
                "free_algebra_log2": generators,
                "cap": store.free_algebra_cap,
            },
        ) from e

    cocone = _retract_cocone(k, rho, store)
    cocone.validate(d)

    def retract(row: np.ndarray) -> int:
        return k.join_all(comp(int(x)) for comp, x in zip(cocone.components, row))

    eps_rows = scan.units(d.point((subs.full, 0)), k.elements)
    retract_upper = tuple(retract(row) for row in eps_rows)
    if retract_upper != tuple(k.elements):
        raise InternalConsistencyError("μ^A∘ε^A is not the identity", witness=key)
    mirr = scan.mirr
    eps = tuple(mask_of(np.flatnonzero(~below).tolist()) for below in scan.leq(eps_rows, mirr))
    gens = scan.generators
    gen_values = [retract(row) for row in gens]
    gen_below = scan.leq(gens, mirr)
    mu_atoms = tuple(
        k.meet_all(gen_values[g] for g in np.flatnonzero(~gen_below[:, u]).tolist())
        for u in range(len(mirr))
    )
    images = [eps_rows] + [
        scan.units(d.point((x, 1)), d.vertex(d.point((x, 1))).elements) for x in subs.proper()
    ]
    generating = len(np.unique(np.concatenate(images), axis=0))
    cover = SparseCover(key, k, len(subs.subobjects), scan.size, generating, mirr, eps, mu_atoms, retract_upper)
    logger.debug(
        "sparse Φ of %d-element object %s: |Φ_*| = %d, |M(Φ_*)| = %d",
        k.size, key, scan.size, cover.atoms,
    )
    with store.lock:
        return store.sparse.setdefault(key, cover)


def cover_or_sparse(a: Semilattice, store: CoverStore) -> Union[CoverEntry, SparseCover]:
    """``phi_object(a)``, falling back to ``sparse_cover`` past the dense caps."""
    try:
        return phi_object(a, store)
    except DenseCapExceeded as e:
        logger.info("Φ of a %d-element object exceeds a dense cap (%s); scanning closed tuples", a.size, e)
        return sparse_cover(a, store)


# --- transport along isomorphisms and subobject inclusions ---

def _phi_iso_canonical(g: Morphism, store: CoverStore) -> Tuple[Morphism, Morphism]:
    """``(Φ_*(g), Φ(g))`` for an isomorphism between copies of one canonical object."""
    k = g.src
    key = content_key(k)
    memo_key = (key, g.map)
    cached = store.iso_memo.get(memo_key)
    if cached is not None:
        return cached
    entry = ensure_entry(k, store)
    if g.map == tuple(k.elements):
        pair = (identity(entry.phi_star), identity(entry.phi))
    else:
        rho, result = _rho_colimit(k, store)
        d, pieces = rho.diagram, rho.pieces
        components = []
        for x, i in d.names:
            piece = pieces[x]
            if i == 0:
                components.append(entry.eps_upper * g * piece.incl)
                continue
            gx = tuple(sorted(g(e) for e in x))
            target = pieces[gx]
            position = {e: n for n, e in enumerate(gx)}
            restricted = Morphism(piece.sub, target.sub, [position[g(e)] for e in x])
            aut = target.to_canon * restricted * inverse(piece.to_canon)
            _, phi_aut = _phi_iso_canonical(aut, store)
            components.append(result.leg(d.point((gx, 1))) * phi_aut)
        bar = factor_through(result, Cocone(entry.phi_star, tuple(components)))
        bar = Morphism(entry.phi_star, entry.phi_star, bar.map)
        if not bar.is_iso:
            raise InternalConsistencyError("Φ_*(g) is not an isomorphism", witness=list(g.map))
        pair = (bar, shelter_iso(bar))
    with store.lock:
        store.iso_memo.setdefault(memo_key, pair)
    return store.iso_memo[memo_key]


def _subobject_legs(h: Morphism, store: CoverStore) -> Tuple[Morphism, Morphism]:
    """``(Φ_*(h), Φ(h))`` for a non-surjective embedding between canonical objects."""
    onto, _ = corestrict(h)
    img = h.image()
    canon, to_canon = canonical_form(onto.dst, store.canonical_cap)
    aut = to_canon * onto
    aut = Morphism(h.src, h.src, aut.map)
    _, phi_aut = _phi_iso_canonical(aut, store)
    target = ensure_entry(h.dst, store)
    star, phi_leg = target.sub_legs[img]
    return star * phi_aut, phi_leg * phi_aut


def phi_canonical(h: Morphism, store: CoverStore) -> Morphism:
    """``Φ(h)`` for an embedding ``h`` between canonical objects."""
    if h.surjective:
        return _phi_iso_canonical(h, store)[1]
    return _subobject_legs(h, store)[1]


def _presentation(a: Semilattice, store: CoverStore) -> Tuple[CoverEntry, Morphism]:
    witness = a.distributivity_witness()
    if witness is not None:
        raise NotDistributive("Φ is only defined on distributive objects", witness=witness)
    k, c = canonical_form(a, store.canonical_cap)
    return ensure_entry(k, store), c


def phi_for(a: Semilattice, store: CoverStore) -> CoverEntry:
    """Cover entry of an arbitrary presentation, transported from its canonical form."""
    entry, c = _presentation(a, store)
    if a == entry.obj:
        return entry
    back = inverse(c)
    sub_legs = {}
    sub_keys = {}
    for x in subobject_poset(a).proper():
        sub = restrict(a, x)
        canon, to_canon = canonical_form(sub, store.canonical_cap)
        h = c * Morphism(sub, a, x) * inverse(to_canon)
        h = Morphism(canon, entry.obj, h.map)
        sub_legs[x] = _subobject_legs(h, store)
        sub_keys[x] = content_key(canon)
    return CoverEntry(
        entry.key, a, entry.phi_star, entry.eps_upper * c, back * entry.mu_upper,
        entry.phi, entry.eps * c, back * entry.mu, sub_legs, sub_keys,
    )


def phi_object(a: Semilattice, store: CoverStore) -> CoverEntry:
    """Cover entry of ``a``; stored when ``a`` is canonical, transported otherwise."""
    return phi_for(a, store)


def phi_star(a: Semilattice, store: CoverStore):
    """``(Φ_*(a), ε^a, sub_legs, μ^a)`` with sub-legs ``Φ_*(incl_X)`` per proper subobject."""
    entry = phi_for(a, store)
    stars = {x: legs[0] for x, legs in entry.sub_legs.items()}
    return entry.phi_star, entry.eps_upper, stars, entry.mu_upper


def phi_iso(g: Morphism, store: CoverStore) -> Tuple[Morphism, Morphism]:
    """``(Φ_*(g), Φ(g))`` for an isomorphism ``g: A -> A'``."""
    if not g.is_iso:
        raise NotIso("phi_iso needs an isomorphism", witness=list(g.map))
    src, c_src = _presentation(g.src, store)
    _, c_dst = _presentation(g.dst, store)
    aut = c_dst * g * inverse(c_src)
    aut = Morphism(src.obj, src.obj, aut.map)
    bar, phi_g = _phi_iso_canonical(aut, store)
    eps_a, eps_b = src.eps * c_src, src.eps * c_dst
    mu_a, mu_b = inverse(c_src) * src.mu, inverse(c_dst) * src.mu
    mu_star_a, mu_star_b = inverse(c_src) * src.mu_upper, inverse(c_dst) * src.mu_upper
    if (phi_g * eps_a).map != (eps_b * g).map or (mu_b * phi_g).map != (g * mu_a).map:
        raise InternalConsistencyError("Φ(g) does not commute with ε and μ", witness=list(g.map))
    if (mu_star_b * bar).map != (g * mu_star_a).map:
        raise InternalConsistencyError("μ^{A'}∘Φ_*(g) differs from g∘μ^A", witness=list(g.map))
    return bar, phi_g


def phi_morphism(f: Morphism, store: CoverStore) -> Morphism:
    """``Φ(f)`` for a ⟨∨,0⟩-embedding between distributive objects.

    The domain and codomain are the stored Φ of the canonical forms of
    ``f.src`` and ``f.dst``.
    """
    if not f.is_embedding:
        raise NotEmbedding("Φ acts on ⟨∨,0⟩-embeddings only", witness=list(f.map))
    src, c_src = _presentation(f.src, store)
    dst, c_dst = _presentation(f.dst, store)
    h = c_dst * f * inverse(c_src)
    h = Morphism(src.obj, dst.obj, h.map)
    phi_f = phi_canonical(h, store)
    eps_x, mu_x = src.eps * c_src, inverse(c_src) * src.mu
    eps_y, mu_y = dst.eps * c_dst, inverse(c_dst) * dst.mu
    if not phi_f.is_embedding:
        raise InternalConsistencyError("Φ(f) is not an embedding", witness=list(f.map))
    if (phi_f * eps_x).map != (eps_y * f).map:
        raise InternalConsistencyError("Φ(f)∘ε_X differs from ε_Y∘f", witness=list(f.map))
    if (mu_y * phi_f).map != (f * mu_x).map:
        raise InternalConsistencyError("μ_Y∘Φ(f) differs from f∘μ_X", witness=list(f.map))
    if f.preserves_unit and not phi_f.preserves_unit:
        raise InternalConsistencyError("Φ(f) loses the unit", witness=list(f.map))
    return phi_f


# --- zero-separating trim ---

@dataclass(frozen=True)
class TrimmedEntry:
    entry: CoverEntry
    base: int
    members: Tuple[int, ...]
    phi: Semilattice
    eps: Morphism
    mu: Morphism

    @property
    def changed(self) -> bool:
        return self.base != self.entry.phi.zero


class TrimmedStore:
    """Trimmed view of a store: Φ(A) cut down to ``[b_A, 1]`` with ``b_A = ⋁ ker μ_A``."""

    def __init__(self, store: CoverStore, report: LawReport) -> None:
        self.store = store
        self.report = report
        self._entries: Dict[str, TrimmedEntry] = {}

    def entry(self, key: str) -> TrimmedEntry:
        trimmed = self._entries.get(key)
        if trimmed is None:
            base = self.store.get(key)
            if base is None:
                raise MissingDependency(f"no cover entry {key}", witness=key)
            trimmed = _trim(base)
            self._entries[key] = trimmed
        return trimmed

    def entries(self) -> List[TrimmedEntry]:
        return [self.entry(e.key) for e in self.store.entries()]

    def phi_morphism(self, f: Morphism) -> Morphism:
        """Trimmed action ``x ↦ Φ(f)(x) ∨ b_Y``."""
        full = phi_morphism(f, self.store)
        src = self.entry(_presentation(f.src, self.store)[0].key)
        dst = self.entry(_presentation(f.dst, self.store)[0].key)
        position = {y: n for n, y in enumerate(dst.members)}
        big = dst.entry.phi
        mapping = [position[big.join(full(x), dst.base)] for x in src.members]
        return Morphism(src.phi, dst.phi, mapping)

    def cover_of(self, a: Semilattice) -> Tuple[Morphism, Morphism]:
        """Trimmed ``(ε_a, μ_a)`` of an arbitrary presentation."""
        canon, c = _presentation(a, self.store)
        trimmed = self.entry(canon.key)
        return trimmed.eps * c, inverse(c) * trimmed.mu


def _trim(entry: CoverEntry) -> TrimmedEntry:
    phi, mu = entry.phi, entry.mu
    zero = entry.obj.zero
    base = phi.join_all(x for x in phi.elements if mu(x) == zero)
    cut, members = interval(phi, base)
    position = {y: n for n, y in enumerate(members)}
    eps = Morphism(entry.obj, cut, [position[phi.join(entry.eps(a), base)] for a in entry.obj.elements])
    mu_cut = Morphism(cut, entry.obj, [mu(y) for y in members])
    return TrimmedEntry(entry, base, members, cut, eps, mu_cut)


def trim_zero(store: CoverStore, embeddings: Sequence[Morphism] = ()) -> TrimmedStore:
    """Trim every stored entry and report which laws survive.

    Entry laws are checked for every stored entry; naturality, functoriality
    and injectivity of the trimmed action are checked on ``embeddings``.
    """
    report = LawReport("zero-separation")
    trimmed = TrimmedStore(store, report)
    for t in trimmed.entries():
        subject = f"entry {t.entry.key} (|A| = {t.entry.obj.size})"
        ident = list(t.entry.obj.elements)
        report.check("μ_A∘ε_A = id", list((t.mu * t.eps).map) == ident, subject)
        kernel = [y for y in t.phi.elements if t.mu(y) == t.entry.obj.zero]
        report.check("μ_A⁻¹{0} = {0}", kernel == [t.phi.zero], subject, kernel)
        report.check("ε_A is a ⟨∨,0,1⟩-embedding", t.eps.is_embedding and t.eps.preserves_unit, subject)
        report.check("Φ(A) is Boolean", t.phi.is_boolean(), subject)
    for n, f in enumerate(embeddings):
        subject = f"embedding {n}"
        phi_f = trimmed.phi_morphism(f)
        eps_x, mu_x = trimmed.cover_of(f.src)
        eps_y, mu_y = trimmed.cover_of(f.dst)
        report.check("Φ(f)∘ε_X = ε_Y∘f", (phi_f * eps_x).map == (eps_y * f).map, subject, list(f.map))
        report.check("μ_Y∘Φ(f) = f∘μ_X", (mu_y * phi_f).map == (f * mu_x).map, subject, list(f.map))
        report.check("Φ(f) is an embedding", phi_f.is_embedding, subject, list(phi_f.map))
    for violation in report.violations:
        logger.warning("trim-zero law %s fails on %s", violation.law, violation.subject)
    report.notes["changed"] = [t.entry.key for t in trimmed.entries() if t.changed]
    return trimmed


# --- direct systems ---

@dataclass(frozen=True)
class RetractedSystem:
    system: DirectSystem
    eps: Tuple[Morphism, ...]
    mu: Tuple[Morphism, ...]
    report: LawReport


def retract_system(d: Diagram, store: CoverStore) -> RetractedSystem:
    """Vertexwise Φ of a direct system of distributive semilattices, with ε and μ families."""
    presentations = [_presentation(v, store) for v in d.vertices]
    eps = tuple(entry.eps * c for entry, c in presentations)
    mu = tuple(inverse(c) * entry.mu for entry, c in presentations)
    vertices = [entry.phi for entry, _ in presentations]
    arrows = {(i, j): phi_morphism(f, store) for (i, j), f in d.cover_arrows().items()}
    try:
        system = DirectSystem(d.index, vertices, arrows, d.names)
    except IllFormed as e:
        raise InternalConsistencyError(f"Φ is not functorial on this system: {e}", witness=e.witness) from e
    report = LawReport("retract-system")
    for (i, j), f in d.all_arrows().items():
        g = system.arrow(i, j)
        subject = f"{d.names[i]!r} -> {d.names[j]!r}"
        report.check("Φ(f)∘ε_i = ε_j∘f", (g * eps[i]).map == (eps[j] * f).map, subject)
        report.check("μ_j∘Φ(f) = f∘μ_i", (mu[j] * g).map == (f * mu[i]).map, subject)
        if f.preserves_unit:
            report.check("Φ(f) preserves the unit", g.preserves_unit, subject)
    for i, e in enumerate(eps):
        report.check("ε_i preserves the unit", e.preserves_unit, f"{d.names[i]!r}")
    return RetractedSystem(system, eps, mu, report)


# --- size bounds ---

def _pow2(exponent: Optional[int], max_bits: int) -> Optional[int]:
    if exponent is None or exponent > max_bits:
        return None
    return 1 << exponent


def bound_exponent(m: int, max_bits: int = BOUND_MAX_BITS) -> Optional[int]:
    """``log2`` of the bound on ``|Φ_*(A)|`` for ``|A| = m``; None when it saturates."""
    if m <= 0:
        return 0
    phi_prev = phi_bound(m - 1, max_bits)
    if phi_prev is None:
        return None
    scaled = (1 << (m - 1)) * phi_prev
    if scaled.bit_length() > max_bits:
        return None
    return m + scaled


def phi_star_bound(m: int, max_bits: int = BOUND_MAX_BITS) -> Optional[int]:
    return _pow2(bound_exponent(m, max_bits), max_bits)


def phi_bound(m: int, max_bits: int = BOUND_MAX_BITS) -> Optional[int]:
    """Bound on ``|Φ(A)|`` over ``|A| ≤ m``: 1 up to m = 1, then ``2^{|Φ_*| bound}``."""
    if m <= 1:
        return 1
    return _pow2(phi_star_bound(m, max_bits), max_bits)


def size_bound_report(store: CoverStore, max_bits: int = BOUND_MAX_BITS) -> LawReport:
    """Size bounds over every dense entry and every sparse cover in ``store``."""
    report = LawReport("size-bounds")
    rows = []
    measured = [
        (e.key, e.obj.size, e.phi_star.size, e.phi.size.bit_length() - 1, len(e.generating_set()))
        for e in store.entries()
    ]
    sparse = sorted(store.sparse.values(), key=lambda c: (c.obj.size, c.obj.table))
    measured += [(c.key, c.obj.size, c.phi_star_size, c.atoms, c.generating_set) for c in sparse]
    for key, m, phi_star_size, phi_log2, generators in measured:
        exponent = bound_exponent(m, max_bits)
        subject = f"entry {key} (|A| = {m})"
        # a saturated bound exceeds every materialisable size
        within = exponent is None or phi_star_size <= 1 << exponent
        report.check("|Φ_*(A)| ≤ bound", within, subject, exponent)
        report.check("|Φ_*(A)| ≤ 2^|G|", phi_star_size <= 1 << generators, subject, generators)
        rows.append({
            "key": key,
            "size": m,
            "phi_star_size": phi_star_size,
            "phi_size_log2": phi_log2,
            "bound_log2": exponent,
            "generating_set": generators,
        })
    report.notes["entries"] = rows
    return report
