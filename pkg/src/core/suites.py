"""Invariant suites run over the exhaustive corpus.

Each suite builds its cases from corpus members, fans them out over a
thread pool and merges the partial reports in member order, so the report
does not depend on scheduling. The cover store is the only state shared
between workers.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import islice, product
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, TypeVar

from core.canonical import isomorphic
from core.colimit import colimit, colimit_via_free_algebra, factor_through, leg_generators
from core.congruence import lattice_congruences
from core.corpus import CORPUS_MAX_SIZE, Corpus, embeddings_between, enumerate_semilattices
from core.counterexample import counterexample
from core.cover import (
    SparseCover,
    cover_or_sparse,
    phi_iso,
    phi_morphism,
    phi_object,
    size_bound_report,
    trim_zero,
)
from core.cover_store import CoverStore
from core.diagram import Cocone, Diagram, chain_system, single_vertex, span
from core.errors import SizeCapExceeded, UnknownSuite, WorkbenchError
from core.gs import atomistic_image_check, gs_checks, gs_naturality, gs_object, lattice_images
from core.homs import automorphisms, join_homomorphisms
from core.models import LawReport, SuiteReport
from core.morphism import Morphism, identity
from core.semilattice import Semilattice, join_closure
from core.subobjects import subobject_map, subobject_poset
from core.shelter import (
    IsoSample,
    PostSample,
    birkhoff_cover,
    birkhoff_extension,
    is_retraction_morphism,
    largest_extension,
    shelter_object,
    universal_boolean,
    universal_boolean_map,
    verify_shelter_laws,
)
from core.simult import DEFAULT_MAX_ATOMS, DEFAULT_WORK_LIMIT, Exhausted, Fail, necess_check, search_simultaneous

logger = logging.getLogger(__name__)

T = TypeVar("T")

DEFAULT_SIZES = {
    "retraction": 5,
    "naturality": 4,
    "functoriality": 4,
    "shelter-laws": 5,
    "colimit-universality": 4,
    "gs": 6,
    "counterexample": 0,
    "size-bounds": 5,
    "atomistic-image": 7,
    "zero-separation": 4,
    "classical-covers": 4,
}


@dataclass
class SuiteConfig:
    """Knobs shared by every suite.

    ``max_size`` None picks the suite's own default; ``sample_limit`` None
    enumerates homomorphisms, cocones and diagrams exhaustively.
    """

    max_size: Optional[int] = None
    store: Optional[CoverStore] = None
    workers: int = 1
    max_atoms: int = DEFAULT_MAX_ATOMS
    work_limit: int = DEFAULT_WORK_LIMIT
    corpus_cap: int = CORPUS_MAX_SIZE
    sample_limit: Optional[int] = None
    _corpus: Optional[Corpus] = field(default=None, repr=False)

    def size_for(self, name: str) -> int:
        return DEFAULT_SIZES[name] if self.max_size is None else self.max_size

    def cover_store(self) -> CoverStore:
        if self.store is None:
            self.store = CoverStore()
        return self.store

    def corpus(self, n: int) -> Corpus:
        n = min(n, self.corpus_cap)
        if self._corpus is None or self._corpus.max_size < n:
            self._corpus = enumerate_semilattices(n, self.corpus_cap)
        return self._corpus


# --- internals ---

def _fan_out(config: SuiteConfig, items: Sequence[T], job: Callable[[T], LawReport]) -> List[LawReport]:
    if config.workers <= 1 or len(items) <= 1:
        return [job(item) for item in items]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(job, items))


def _take(items: Iterable[T], limit: Optional[int]) -> List[T]:
    return list(items) if limit is None else list(islice(items, limit))


def _subject(s: Semilattice, n: int) -> str:
    return f"member {n} (|S| = {s.size})"


def _guarded(report: LawReport, law: str, subject: str, run: Callable[[], None]) -> None:
    """Run ``run``; a size cap becomes a skip, any other workbench error a violation."""
    try:
        run()
    except SizeCapExceeded as e:
        report.skip(subject, str(e))
    except WorkbenchError as e:
        report.check(law, False, subject, {"error": type(e).__name__, "message": str(e), "witness": e.witness})


def _distributive(config: SuiteConfig, name: str) -> List[Semilattice]:
    n = config.size_for(name)
    return config.corpus(n).select(n, distributive=True)


def _same(f: Morphism, g: Morphism) -> bool:
    return f.map == g.map


# --- retraction ---

def _retraction(config: SuiteConfig) -> List[LawReport]:
    store = config.cover_store()
    members = _distributive(config, "retraction")

    def job(pair) -> LawReport:
        n, a = pair
        report = LawReport("retraction")
        subject = _subject(a, n)

        def run() -> None:
            entry = cover_or_sparse(a, store)
            if isinstance(entry, SparseCover):
                entry.check(report, subject)
                report.notes["sparse"] = {entry.key: {"phi_star_size": entry.phi_star_size, "phi_atoms": entry.atoms}}
                return
            ident = tuple(a.elements)
            report.check("μ_A∘ε_A = id", (entry.mu * entry.eps).map == ident, subject, list(entry.mu.map))
            report.check("μ^A∘ε^A = id", (entry.mu_upper * entry.eps_upper).map == ident, subject)
            report.check("Φ(A) is Boolean", entry.phi.is_boolean(), subject, entry.phi.size)
            report.check(
                "ε_A is a ⟨∨,0,1⟩-embedding",
                entry.eps.is_embedding and entry.eps.preserves_unit,
                subject,
                list(entry.eps.map),
            )
            report.check("μ_A is a surjective homomorphism", entry.mu.is_hom and entry.mu.surjective, subject)

        _guarded(report, "Φ(A) exists", subject, run)
        return report

    return _fan_out(config, list(enumerate(members)), job)


# --- naturality and functoriality ---

def _naturality(config: SuiteConfig) -> List[LawReport]:
    store = config.cover_store()
    members = _distributive(config, "naturality")
    maps = list(embeddings_between(members))

    def job(pair) -> LawReport:
        n, f = pair
        report = LawReport("naturality")
        subject = f"embedding {n} ({f.src.size} -> {f.dst.size})"

        def run() -> None:
            g = phi_morphism(f, store)
            x, y = phi_object(f.src, store), phi_object(f.dst, store)
            report.check("Φ(f)∘ε_X = ε_Y∘f", _same(g * x.eps, y.eps * f), subject, list(f.map))
            report.check("μ_Y∘Φ(f) = f∘μ_X", _same(y.mu * g, f * x.mu), subject, list(f.map))
            report.check("Φ(f) is an embedding", g.is_embedding, subject, list(g.map))
            lower = subobject_map(f)
            src, dst = subobject_poset(f.src), subobject_poset(f.dst)
            image = set(lower)
            closed = all(
                j in image
                for k in image
                for j, y in enumerate(dst.subobjects)
                if set(y) <= set(dst.subobjects[k])
            )
            report.check("M(f) is a lower embedding", len(image) == len(lower) and closed, subject, list(lower))
            report.check(
                "M(X) and M(Y) have equal length iff f is an isomorphism",
                (src.length == dst.length) == f.is_iso,
                subject,
                [src.length, dst.length],
            )

        _guarded(report, "Φ(f) squares commute", subject, run)
        return report

    return _fan_out(config, list(enumerate(maps)), job)


def _functoriality(config: SuiteConfig) -> List[LawReport]:
    store = config.cover_store()
    members = _distributive(config, "functoriality")
    maps = list(embeddings_between(members))

    def identities(pair) -> LawReport:
        n, a = pair
        report = LawReport("functoriality")
        subject = _subject(a, n)

        def run() -> None:
            phi_id = phi_morphism(identity(a), store)
            report.check("Φ(id) = id", phi_id.map == tuple(phi_id.src.elements), subject)
            auts = automorphisms(a)
            images = {g.map: phi_iso(g, store)[1] for g in auts}
            for g, h in product(auts, auts):
                lhs = images[(g * h).map]
                report.check(
                    "Φ(g∘h) = Φ(g)∘Φ(h) on automorphisms",
                    _same(lhs, images[g.map] * images[h.map]),
                    subject,
                    [g.map, h.map],
                )

        _guarded(report, "Φ on identities and automorphisms", subject, run)
        return report

    def composites(pair) -> LawReport:
        n, f = pair
        report = LawReport("functoriality")
        subject = f"embedding {n}"

        def run() -> None:
            phi_f = phi_morphism(f, store)
            for m, g in enumerate(maps):
                if not f.dst.same_structure(g.src):
                    continue
                lhs = phi_morphism(g * f, store)
                rhs = phi_morphism(g, store) * phi_f
                report.check("Φ(g∘f) = Φ(g)∘Φ(f)", _same(lhs, rhs), f"{subject} then {m}", [f.map, g.map])

        _guarded(report, "Φ(g∘f) = Φ(g)∘Φ(f)", subject, run)
        return report

    return _fan_out(config, list(enumerate(members)), identities) + _fan_out(
        config, list(enumerate(maps)), composites
    )


# --- shelter laws ---

def _extension_maximality(g: Morphism, report: LawReport, subject: str) -> None:
    """``g^B`` extends g and dominates every other extension along η."""
    eta = shelter_object(g.src).eta
    h = largest_extension(g, eta)
    target = g.dst
    found = False
    for k in join_homomorphisms(eta.dst, target):
        if (k * eta).map != g.map:
            continue
        found = found or k.map == h.map
        below = all(target.leq(k(x), h(x)) for x in eta.dst.elements)
        report.check("every extension lies below g^B", below, subject, {"k": k.map, "h": h.map})
    report.check("g^B is among the extensions", found, subject, list(h.map))


def _shelter_laws(config: SuiteConfig) -> List[LawReport]:
    n = config.size_for("shelter-laws")
    corpus = config.corpus(n)
    sources = corpus.select(n)
    targets = corpus.select(n, distributive=True)
    limit = config.sample_limit

    def job(pair) -> LawReport:
        m, s = pair
        report = LawReport("shelter-laws")
        auts = automorphisms(s)
        samples: List = []
        for a in targets:
            homs = _take(join_homomorphisms(s, a), limit)
            samples += [IsoSample(f, g) for f in auts for g in homs]
            samples += [PostSample(h, u) for h in homs for u in automorphisms(a)]
            for k, g in enumerate(homs):
                subject = f"{_subject(s, m)} into {a.size}-element target, map {k}"
                _guarded(report, "largest extension", subject, lambda: _extension_maximality(g, report, subject))
        _guarded(report, "shelter laws", _subject(s, m), lambda: verify_shelter_laws(samples, report))
        return report

    return _fan_out(config, list(enumerate(sources)), job)


# --- colimits ---

def _diagram_family(members: Sequence[Semilattice], limit: Optional[int]) -> List[Diagram]:
    out: List[Diagram] = [single_vertex(s) for s in members]
    maps = list(embeddings_between(members))
    out += _take((chain_system([f.src, f.dst], [f]) for f in maps if f.src.size < f.dst.size), limit)
    spans = []
    for f, g in product(maps, maps):
        if f.src.same_structure(g.src) and 1 < f.src.size < min(f.dst.size, g.dst.size):
            spans.append(span(f.src, f, g))
    return out + _take(spans, limit)


def _maximal_points(d: Diagram) -> List[int]:
    return [i for i in range(d.size) if not any(a == i for a, _ in d.covers)]


def _cocones(d: Diagram, t: Semilattice, limit: Optional[int]) -> Iterator[Cocone]:
    """Cocones into ``t``: homs on the maximal points, pulled back along arrows."""
    tops = _maximal_points(d)
    above = {i: next(j for j in tops if d.index.leq(i, j)) for i in range(d.size)}
    choices = [_take(join_homomorphisms(d.vertex(j), t), limit) for j in tops]
    count = 0
    for picked in product(*choices):
        chosen = dict(zip(tops, picked))
        components = tuple(
            chosen[i] if i in chosen else chosen[above[i]] * d.arrow(i, above[i]) for i in range(d.size)
        )
        cocone = Cocone(t, components)
        try:
            cocone.validate(d)
        except WorkbenchError:
            continue
        yield cocone
        count += 1
        if limit is not None and count >= limit:
            return


def _colimit_universality(config: SuiteConfig) -> List[LawReport]:
    n = config.size_for("colimit-universality")
    corpus = config.corpus(n + 1)
    members = corpus.select(n)
    targets = corpus.select(n + 1)
    diagrams = _diagram_family(members, config.sample_limit)
    limit = config.sample_limit

    def job(pair) -> LawReport:
        m, d = pair
        report = LawReport("colimit-universality")
        subject = f"diagram {m} ({d.size} points)"

        def run() -> None:
            c = colimit(d)
            q, legs = colimit_via_free_algebra(d)
            to_q = factor_through(c, Cocone(q, legs))
            report.check("closed-tuple colimit ≅ free-algebra quotient", to_q.is_iso, subject, list(to_q.map))
            generated = join_closure(c.apex, leg_generators(c))
            report.check("leg images generate the apex", len(generated) == c.apex.size, subject)
            rebuilt = [c.apex.join_all(c.legs[i](x) for i, x in gens) for gens in c.generator_map.values()]
            report.check("generator map rebuilds the apex", rebuilt == list(c.apex.elements), subject)
            for t in targets:
                mediating: Dict[tuple, List[tuple]] = {}
                for g in join_homomorphisms(c.apex, t):
                    mediating.setdefault(tuple((g * leg).map for leg in c.legs), []).append(g.map)
                for k, cocone in enumerate(_cocones(d, t, limit)):
                    case = f"{subject} into {t.size}-element target, cocone {k}"
                    h = factor_through(c, cocone)
                    found = mediating.get(tuple(comp.map for comp in cocone.components), [])
                    report.check("cocone factors uniquely", found == [h.map], case, len(found))
            report.check("isomorphic to the reference colimit", isomorphic(c.apex, q), subject)

        _guarded(report, "colimit universality", subject, run)
        return report

    return _fan_out(config, list(enumerate(diagrams)), job)


# --- Grätzer–Schmidt ---

def _gs(config: SuiteConfig) -> List[LawReport]:
    n = config.size_for("gs")
    corpus = config.corpus(n)
    lattices = corpus.select(n, min_size=2)

    def job(pair) -> LawReport:
        m, k = pair
        report = LawReport("gs")

        def run() -> None:
            gs_checks(k, report, f"GS of {_subject(k, m)}")
            count = len(lattice_congruences(gs_object(k).extended))
            report.check("GS(K) has exactly two lattice congruences", count == 2, _subject(k, m), count)

        _guarded(report, "GS extension", _subject(k, m), run)
        return report

    reports = _fan_out(config, list(enumerate(lattices)), job)
    naturality = LawReport("gs")
    small = corpus.select(min(n, 4))
    _guarded(naturality, "GS naturality", "corpus embeddings", lambda: gs_naturality(embeddings_between(small), naturality))
    return reports + [naturality]


# --- counterexample ---

def _counterexample(config: SuiteConfig) -> List[LawReport]:
    report = LawReport("counterexample")
    cx = counterexample()
    for name, ok in cx.constraints:
        report.check(name, ok, "counterexample square")
    sys = cx.system
    s, a1, a2, a = (sys.point(v) for v in ("S", "A1", "A2", "A"))
    p = cx.element("S", "p")
    verdict = necess_check(sys, s, a, p)
    report.check("necessary condition fails for p", isinstance(verdict, Fail), "p ∈ J(S)")
    if isinstance(verdict, Fail):
        witnesses = {(ob.k, ob.r) for ob in verdict.obstructions}
        for point, vertex, name in ((a1, "A1", "r1"), (a2, "A2", "r2")):
            report.check(
                f"obstruction ⟨{vertex}, {name}⟩",
                (point, cx.element(vertex, name)) in witnesses,
                "p ∈ J(S)",
                sorted(witnesses),
            )
        report.notes["witnesses"] = [
            {"q": ob.q, "point": sys.names[ob.k], "r": ob.r, "reason": ob.reason} for ob in verdict.obstructions
        ]
    result = search_simultaneous(
        sys, config.max_atoms, work_limit=config.work_limit, workers=config.workers, check_necessary_condition=False
    )
    bound = f"max_atoms = {config.max_atoms}"
    report.check("no simultaneous lattice embedding", isinstance(result, Exhausted), bound)
    report.check("search explored the square", result.work > 0, bound, result.work)
    report.notes["search"] = {"work": result.work, "reason": getattr(result, "reason", "found")}
    return [report]


# --- size bounds and trimming ---

def _size_bounds(config: SuiteConfig) -> List[LawReport]:
    store = config.cover_store()
    ensure = LawReport("size-bounds")
    for n, a in enumerate(_distributive(config, "size-bounds")):
        _guarded(ensure, "Φ(A) exists", _subject(a, n), lambda: cover_or_sparse(a, store))
    return [ensure, size_bound_report(store)]


def _atomistic_image(config: SuiteConfig) -> List[LawReport]:
    n = config.size_for("atomistic-image")
    lattices = config.corpus(n).select(n, atomistic=True)

    def job(pair) -> LawReport:
        m, l = pair
        report = LawReport("atomistic-image")
        for g in lattice_images(l):
            _guarded(report, "atomistic image", _subject(l, m), lambda: atomistic_image_check(l, g, report))
        return report

    return _fan_out(config, list(enumerate(lattices)), job)


def _zero_separation(config: SuiteConfig) -> List[LawReport]:
    store = config.cover_store()
    members = _distributive(config, "zero-separation")
    ensure = LawReport("zero-separation")
    for n, a in enumerate(members):
        _guarded(ensure, "Φ(A) exists", _subject(a, n), lambda: phi_object(a, store))
    trimmed = trim_zero(store, list(embeddings_between(members)))
    return [ensure, trimmed.report]


# --- classical Boolean covers ---

def _classical_covers(config: SuiteConfig) -> List[LawReport]:
    """Bool(D) and the Birkhoff cover on the corpus, for comparison with Φ."""
    members = _distributive(config, "classical-covers")
    maps = _take(embeddings_between(members), config.sample_limit)

    def objects(pair) -> LawReport:
        n, a = pair
        report = LawReport("classical-covers")
        subject = _subject(a, n)

        def run() -> None:
            _, eps = universal_boolean(a)
            report.check("Bool(D) ε is a ⟨∨,0,1⟩-embedding", eps.is_embedding and eps.preserves_unit, subject)
            _, eps, mu = birkhoff_cover(a)
            report.check("Birkhoff μ∘ε = id", (mu * eps).map == tuple(a.elements), subject, list(mu.map))
            report.check("Birkhoff ε is a ⟨∨,0,1⟩-embedding", eps.is_embedding and eps.preserves_unit, subject)

        _guarded(report, "classical covers exist", subject, run)
        return report

    def arrows(pair) -> LawReport:
        n, f = pair
        report = LawReport("classical-covers")
        subject = f"embedding {n} ({f.src.size} -> {f.dst.size})"

        def run() -> None:
            g = universal_boolean_map(f)
            _, eps_d = universal_boolean(f.src)
            _, eps_e = universal_boolean(f.dst)
            report.check("Bool(f)∘ε_D = ε_E∘f", _same(g * eps_d, eps_e * f), subject, list(f.map))
            report.check("Bool(f) is a lattice embedding", g.is_lattice_hom and g.injective, subject, list(g.map))
            _, eps_x, mu_x = birkhoff_cover(f.src)
            _, eps_y, mu_y = birkhoff_cover(f.dst)
            h = birkhoff_extension(f)
            report.check(
                "ε_Y∘f∘μ_X lies over f",
                is_retraction_morphism(f, h, (eps_x, mu_x), (eps_y, mu_y)),
                subject,
                list(h.map),
            )
            if not h.injective:
                report.notes["non_injective_extensions"] = [list(f.map)]

        _guarded(report, "classical covers on embeddings", subject, run)
        return report

    return _fan_out(config, list(enumerate(members)), objects) + _fan_out(config, list(enumerate(maps)), arrows)

SUITES: Dict[str, Callable[[SuiteConfig], List[LawReport]]] = {
    "retraction": _retraction,
    "naturality": _naturality,
    "functoriality": _functoriality,
    "shelter-laws": _shelter_laws,
    "colimit-universality": _colimit_universality,
    "gs": _gs,
    "counterexample": _counterexample,
    "size-bounds": _size_bounds,
    "atomistic-image": _atomistic_image,
    "zero-separation": _zero_separation,
    "classical-covers": _classical_covers,
}


# --- API ---

def suite_names() -> List[str]:
    return list(SUITES)


def run_suite(name: str, config: Optional[SuiteConfig] = None) -> SuiteReport:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}", witness=name)
    config = config or SuiteConfig()
    start = time.perf_counter()
    logger.debug("running suite %s (max size %s, %d workers)", name, config.size_for(name), config.workers)
    report = SuiteReport(name)
    for part in SUITES[name](config):
        report.merge(part)
    report.notes.setdefault("max_size", config.size_for(name))
    report.wall_time_ms = int((time.perf_counter() - start) * 1000)
    if report.violations:
        logger.warning("suite %s: %d violations in %d cases", name, len(report.violations), report.cases)
    return report


def run_suites(names: Iterable[str], config: Optional[SuiteConfig] = None) -> List[SuiteReport]:
    config = config or SuiteConfig()
    return [run_suite(name, config) for name in names]
