from __future__ import annotations

import pytest
from hypothesis import given, settings

from core.canonical import content_key, isomorphic
from core.cover import (
    SparseCover,
    bound_exponent,
    build_rho,
    cover_or_sparse,
    phi_bound,
    phi_for,
    phi_iso,
    phi_morphism,
    phi_star,
    phi_star_bound,
    retract_system,
    size_bound_report,
    sparse_cover,
    trim_zero,
)
from core.cover_store import CoverStore
from core.diagram import chain_system
from core.errors import MissingDependency, NotDistributive, NotEmbedding, NotIso, SizeCapExceeded
from core.free import free_join_semilattice
from core.homs import join_homomorphisms
from core.models import LawReport
from core.morphism import Morphism, identity
from core.semilattice import chain
from strategies import distributive_lattices, homomorphisms, relabel


def boolean_retractions(a, boolean):
    """Every pair (e, m) with e a ⟨∨,0,1⟩-embedding into ``boolean`` and m∘e = id."""
    ident = tuple(a.elements)
    for e in join_homomorphisms(a, boolean, embeddings_only=True):
        if not e.preserves_unit:
            continue
        for m in join_homomorphisms(boolean, a):
            if (m * e).map == ident:
                yield e.map, m.map


class TestSmallCovers:
    def test_one_element(self, store):
        entry = phi_for(chain(1), store)
        assert entry.phi.size == 1
        assert entry.phi_star.size == 1

    def test_two_element_chain(self, store):
        entry = phi_for(chain(2), store)
        assert entry.phi.size == 2
        assert entry.eps.map == (0, 1)
        assert entry.mu.map == (0, 1)

    def test_three_element_chain(self, store):
        entry = phi_for(chain(3), store)
        assert isomorphic(entry.phi_star, chain(3))
        assert entry.phi.same_structure(free_join_semilattice(2))
        assert entry.eps.map == (0, 1, 3)
        assert entry.mu.map == (0, 1, 2, 2)
        assert len(store) == 3

    def test_chain_cover_is_a_brute_force_retraction(self, store):
        entry = phi_for(chain(3), store)
        assert list(boolean_retractions(chain(3), chain(2))) == []
        pairs = set(boolean_retractions(chain(3), entry.phi))
        assert (entry.eps.map, entry.mu.map) in pairs
        # the other retraction swaps the two atoms of Φ
        assert len(pairs) == 2

    def test_chain_cover_is_the_only_natural_retraction(self, store):
        entry = phi_for(chain(3), store)
        c3 = entry.obj
        inclusions = [Morphism(chain(2), c3, [0, 1]), Morphism(chain(2), c3, [0, 2])]
        actions = [(phi_morphism(f, store), phi_for(f.src, store), f) for f in inclusions]

        def natural(e, m):
            return all(
                [e[y] for y in f.map] == list((phi_f * x.eps).map)
                and [m[y] for y in phi_f.map] == list((f * x.mu).map)
                for phi_f, x, f in actions
            )

        pairs = set(boolean_retractions(c3, entry.phi))
        assert {(e, m) for e, m in pairs if natural(e, m)} == {(entry.eps.map, entry.mu.map)}

    def test_retraction_laws_on_the_square(self, store, sq):
        entry = phi_for(sq, store)
        assert (entry.mu * entry.eps).map == (0, 1, 2, 3)
        assert entry.eps.is_embedding and entry.eps.preserves_unit
        assert entry.phi.is_boolean()
        assert entry.obj is sq

    def test_relabelled_presentation(self, store):
        copy = relabel(chain(3), [2, 0, 1]).dst
        entry = phi_for(copy, store)
        assert (entry.mu * entry.eps).map == (0, 1, 2)
        assert entry.key == content_key(chain(3))

    def test_stored_entries_are_reused(self, store):
        first = phi_for(chain(3), store)
        assert phi_for(chain(3), store) is first

    def test_phi_star_components(self, store):
        star, eps_upper, stars, mu_upper = phi_star(chain(3), store)
        assert sorted(stars) == [(0,), (0, 1), (0, 2)]
        assert (mu_upper * eps_upper).map == (0, 1, 2)
        assert star.size == 3


class TestPreconditions:
    def test_not_distributive(self, store, m3):
        with pytest.raises(NotDistributive):
            phi_for(m3, store)

    def test_size_cap(self):
        with pytest.raises(SizeCapExceeded):
            phi_for(chain(3), CoverStore(phi_max_size=2))

    def test_missing_dependency(self, store):
        with pytest.raises(MissingDependency):
            build_rho(chain(2), store)

    def test_rho_after_entries(self, store):
        phi_for(chain(3), store)
        d = build_rho(chain(3), store)
        assert d.size == 7

    def test_phi_morphism_needs_embedding(self, store, c3, c2):
        with pytest.raises(NotEmbedding):
            phi_morphism(Morphism(c3, c2, [0, 0, 1]), store)

    def test_phi_iso_needs_iso(self, store, c3_into_square):
        with pytest.raises(NotIso):
            phi_iso(c3_into_square, store)


class TestFunctoriality:
    def test_identity(self, store, sq):
        phi_id = phi_morphism(identity(sq), store)
        assert phi_id.map == tuple(phi_id.src.elements)

    def test_chain_into_square(self, store, c3_into_square):
        f = c3_into_square
        phi_f = phi_morphism(f, store)
        x, y = phi_for(f.src, store), phi_for(f.dst, store)
        assert phi_f.is_embedding and phi_f.preserves_unit
        assert (phi_f * x.eps).map == (y.eps * f).map
        assert (y.mu * phi_f).map == (f * x.mu).map

    def test_composition(self, store, c2, c3, sq):
        f = Morphism(c2, c3, [0, 2])
        g = Morphism(c3, sq, [0, 1, 3])
        assert phi_morphism(g * f, store).map == (phi_morphism(g, store) * phi_morphism(f, store)).map

    def test_swap_of_the_square(self, store, sq):
        swap = Morphism(sq, sq, [0, 2, 1, 3])
        bar, phi_g = phi_iso(swap, store)
        assert bar.is_iso and phi_g.is_iso
        again, _ = phi_iso(swap * swap, store)
        assert again.map == tuple(again.src.elements)

    @pytest.mark.slow
    @given(homomorphisms(4, embeddings_only=True))
    @settings(max_examples=30, deadline=None)
    def test_naturality(self, f):
        if not (f.src.is_distributive() and f.dst.is_distributive()):
            return
        store = CoverStore()
        phi_f = phi_morphism(f, store)
        x, y = phi_for(f.src, store), phi_for(f.dst, store)
        assert (phi_f * x.eps).map == (y.eps * f).map
        assert (y.mu * phi_f).map == (f * x.mu).map


class TestTrimZero:
    def test_chains_are_unchanged(self, store, c2, c3):
        phi_for(c3, store)
        trimmed = trim_zero(store, [Morphism(c2, c3, [0, 2])])
        assert trimmed.report.passed
        assert trimmed.report.notes["changed"] == []
        eps, mu = trimmed.cover_of(c3)
        assert eps.map == (0, 1, 3)

    def test_entry_laws_hold_after_trimming(self, store, sq):
        phi_for(sq, store)
        trimmed = trim_zero(store)
        assert trimmed.report.passed
        for t in trimmed.entries():
            assert [y for y in t.phi.elements if t.mu(y) == t.entry.obj.zero] == [t.phi.zero]

    def test_size_four_entry_changes(self, store, sq):
        phi_for(sq, store)
        phi_for(chain(4), store)
        trimmed = trim_zero(store)
        assert trimmed.report.passed
        changed = trimmed.report.notes["changed"]
        assert changed
        assert set(changed) <= {content_key(sq), content_key(chain(4))}
        for key in changed:
            t = trimmed.entry(key)
            assert t.base != t.entry.phi.zero
            assert t.phi.size < t.entry.phi.size
            assert t.phi.is_boolean()
            assert [y for y in t.phi.elements if t.mu(y) == t.entry.obj.zero] == [t.phi.zero]
            assert (t.mu * t.eps).map == tuple(t.entry.obj.elements)


class TestRetractSystem:
    def test_tower(self, store, c2, c3, sq):
        d = chain_system([c2, c3, sq], [Morphism(c2, c3, [0, 2]), Morphism(c3, sq, [0, 1, 3])])
        result = retract_system(d, store)
        assert result.report.passed
        assert all(v.is_boolean() for v in result.system.vertices)
        assert all(e.is_embedding for e in result.eps)
        for e, m in zip(result.eps, result.mu):
            assert (m * e).map == tuple(e.src.elements)

    def test_non_distributive_vertex(self, store, m3):
        d = chain_system([chain(1), m3], [Morphism(chain(1), m3, [0])])
        with pytest.raises(NotDistributive):
            retract_system(d, store)


class TestSizeBounds:
    def test_recurrence(self):
        assert bound_exponent(0) == 0
        assert bound_exponent(1) == 2
        assert bound_exponent(2) == 4
        assert phi_star_bound(2) == 16
        assert phi_bound(1) == 1
        assert phi_bound(2) == 65536
        assert bound_exponent(3) == 262147
        assert phi_star_bound(3) is None
        assert bound_exponent(4) is None

    def test_report(self, store):
        phi_for(chain(3), store)
        report = size_bound_report(store)
        assert report.passed
        assert [row["size"] for row in report.notes["entries"]] == [1, 2, 3]

    @pytest.mark.slow
    @given(distributive_lattices(5))
    @settings(max_examples=20, deadline=None)
    def test_every_small_distributive_lattice(self, d):
        store = CoverStore()
        entry = cover_or_sparse(d, store)
        if isinstance(entry, SparseCover):
            assert tuple(entry.mu(m) for m in entry.eps) == tuple(d.elements)
        else:
            assert (entry.mu * entry.eps).map == tuple(d.elements)
        assert size_bound_report(store).passed


class TestSparseCover:
    def test_three_element_chain_past_the_dense_cap(self):
        store = CoverStore(dense_cap=2)
        cover = cover_or_sparse(chain(3), store)
        assert isinstance(cover, SparseCover)
        assert cover.phi_star_size == 3
        assert cover.atoms == 2
        assert cover.eps == (0, 1, 3)
        assert cover.mu_atoms == (1, 2)
        assert [cover.mu(m) for m in range(4)] == [0, 1, 2, 2]

    def test_agrees_with_the_dense_entry(self, store):
        a = chain(4)
        entry = phi_for(a, store)
        cover = sparse_cover(a, store)
        assert cover.phi_star_size == entry.phi_star.size
        assert cover.atoms == len(entry.phi_star.meet_irreducibles)
        assert cover.phi_size == entry.phi.size
        assert cover.generating_set == len(entry.generating_set())
        assert [bin(m).count("1") for m in cover.eps] == [bin(y).count("1") for y in entry.eps.map]
        assert sorted(cover.mu_atoms) == sorted(entry.mu(1 << i) for i in range(cover.atoms))

    def test_square(self, store, sq):
        entry = phi_for(sq, store)
        cover = sparse_cover(sq, store)
        assert cover.phi_star_size == entry.phi_star.size
        assert sorted(cover.mu_atoms) == sorted(entry.mu(1 << i) for i in range(cover.atoms))

    def test_retraction_laws(self, store):
        report = LawReport("retraction")
        sparse_cover(chain(4), store).check(report, "chain")
        assert report.passed, report.violations
        assert report.cases == 4

    def test_relabelled_presentation(self, store):
        copy = relabel(chain(3), [2, 0, 1]).dst
        cover = sparse_cover(copy, store)
        assert cover.obj is copy
        assert tuple(cover.mu(m) for m in cover.eps) == (0, 1, 2)
        assert cover.retract_upper == (0, 1, 2)
        assert cover.key == content_key(chain(3))

    def test_scan_cap_is_reported(self):
        with pytest.raises(SizeCapExceeded) as exc:
            sparse_cover(chain(3), CoverStore(free_algebra_cap=2))
        assert exc.value.witness["subobjects"] == 4
        assert exc.value.witness["cap"] == 2
        assert "free algebra" in str(exc.value)

    def test_not_distributive(self, store, m3):
        with pytest.raises(NotDistributive):
            sparse_cover(m3, store)

    def test_size_bounds_include_sparse_covers(self):
        store = CoverStore(dense_cap=2)
        cover_or_sparse(chain(3), store)
        report = size_bound_report(store)
        assert report.passed
        rows = report.notes["entries"]
        assert [row["size"] for row in rows] == [1, 2, 3]
        assert rows[-1]["phi_size_log2"] == 2
