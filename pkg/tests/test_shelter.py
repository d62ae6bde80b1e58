from __future__ import annotations

import pytest
from hypothesis import given, settings

from core.errors import NotDistributive, NotEmbedding, NotIso
from core.homs import join_homomorphisms
from core.morphism import Morphism, identity
from core.shelter import (
    IsoSample,
    PostSample,
    birkhoff_cover,
    birkhoff_extension,
    is_retraction_morphism,
    largest_extension,
    shelter_extension,
    shelter_iso,
    shelter_object,
    universal_boolean,
    universal_boolean_map,
    verify_shelter_laws,
)
from strategies import distributive_lattices, lattices, relabelings


class TestShelterObject:
    def test_chain(self, c3):
        sh = shelter_object(c3)
        assert sh.mirr == (0, 1)
        assert sh.booleanized.size == 4
        assert sh.eta.map == (0, 1, 3)

    def test_square(self, sq):
        sh = shelter_object(sq)
        assert sh.mirr_labels == ("a", "b")
        assert sh.eta.map == (0, 2, 1, 3)
        assert sh.eta.is_iso

    @given(lattices(7))
    @settings(max_examples=50)
    def test_eta_is_a_bounded_embedding(self, s):
        sh = shelter_object(s)
        assert sh.eta.is_embedding
        assert sh.eta.preserves_unit
        assert sh.booleanized.is_boolean()

    def test_shelter_iso(self, sq):
        swap = Morphism(sq, sq, [0, 2, 1, 3])
        assert shelter_iso(swap).map == (0, 2, 1, 3)
        assert shelter_iso(identity(sq)).map == (0, 1, 2, 3)
        with pytest.raises(NotIso):
            shelter_iso(Morphism(sq, sq, [0, 1, 1, 1]))

    @given(relabelings(lattices(6)))
    def test_shelter_iso_is_natural(self, f):
        a, b = shelter_object(f.src), shelter_object(f.dst)
        assert (shelter_iso(f) * a.eta).map == (b.eta * f).map


class TestLargestExtension:
    def test_along_the_chain_embedding(self, c3, c2, c3_into_square):
        g = Morphism(c3, c2, [0, 0, 1])
        h = largest_extension(g, c3_into_square)
        assert h.map == (0, 0, 1, 1)

    def test_is_largest(self, c3, c2, c3_into_square):
        g = Morphism(c3, c2, [0, 0, 1])
        h = largest_extension(g, c3_into_square)
        for k in join_homomorphisms(c3_into_square.dst, c2):
            if (k * c3_into_square).map == g.map:
                assert all(c2.leq(k(y), h(y)) for y in k.src.elements)

    def test_shelter_extension_of_identity(self, c3):
        assert shelter_extension(identity(c3)).map == (0, 1, 2, 2)

    def test_rejects_non_distributive_target(self, c2, m3):
        with pytest.raises(NotDistributive):
            largest_extension(Morphism(c2, m3, [0, 4]), identity(c2))

    def test_rejects_non_embedding(self, c3, c2):
        with pytest.raises(NotEmbedding):
            largest_extension(identity(c2), Morphism(c3, c2, [0, 0, 1]))

    @given(distributive_lattices(5), lattices(5))
    @settings(max_examples=40)
    def test_extension_extends(self, d, s):
        eta = shelter_object(s).eta
        for g in list(join_homomorphisms(s, d))[:6]:
            h = shelter_extension(g)
            assert (h * eta).map == g.map
            assert h.is_hom


class TestShelterLaws:
    def test_samples_pass(self, sq, c2, c3):
        swap = Morphism(sq, sq, [0, 2, 1, 3])
        g = Morphism(sq, c2, [0, 1, 0, 1])
        h = Morphism(c3, c2, [0, 0, 1])
        report = verify_shelter_laws([IsoSample(swap, g), PostSample(h, identity(c2))])
        assert report.passed
        assert report.cases == 5


class TestClassicalComparisons:
    def test_universal_boolean(self, c3):
        boolean, eps = universal_boolean(c3)
        assert boolean.size == 4
        assert eps.map == (0, 1, 3)

    def test_universal_boolean_map_is_natural(self, c3_into_square):
        f = c3_into_square
        _, eps_d = universal_boolean(f.src)
        _, eps_e = universal_boolean(f.dst)
        mapped = universal_boolean_map(f)
        assert mapped.map == (0, 5, 2, 7)
        assert mapped.is_lattice_hom and mapped.injective
        assert (mapped * eps_d).map == (eps_e * f).map

    def test_birkhoff_cover(self, c3, m3):
        boolean, eps, mu = birkhoff_cover(c3)
        assert eps.map == (0, 1, 3)
        assert mu.map == (0, 1, 2, 2)
        with pytest.raises(NotDistributive):
            birkhoff_cover(m3)

    def test_birkhoff_extension_of_identity_is_not_injective(self, c3, sq):
        assert not birkhoff_extension(identity(c3)).injective
        assert birkhoff_extension(identity(sq)).map == (0, 1, 2, 3)

    def test_identity_lies_over_identity(self, c3):
        boolean, eps, mu = birkhoff_cover(c3)
        assert is_retraction_morphism(identity(c3), identity(boolean), (eps, mu), (eps, mu))
        swap = Morphism(boolean, boolean, [0, 2, 1, 3])
        assert not is_retraction_morphism(identity(c3), swap, (eps, mu), (eps, mu))
