from __future__ import annotations

import pytest
from hypothesis import given

from core.errors import IllFormed, NotIso, NotJoinPreserving, NotZeroPreserving
from core.morphism import (
    Morphism,
    check_morphism,
    compose,
    compose_all,
    corestrict,
    generated_subsemilattice,
    identity,
    inverse,
)
from core.semilattice import chain
from strategies import homomorphisms, lattices, relabelings


class TestMorphism:
    def test_flags_of_chain_into_square(self, c3_into_square):
        f = c3_into_square
        assert f.is_embedding
        assert f.preserves_unit
        assert not f.surjective
        assert not f.is_iso
        assert f.is_lattice_hom
        assert f.image() == (0, 1, 3)

    def test_check_rejects_non_join_preserving(self, sq, c2):
        with pytest.raises(NotJoinPreserving) as exc:
            check_morphism([0, 0, 0, 1], sq, c2)
        assert exc.value.witness is not None

    def test_check_rejects_non_zero_preserving(self, c2):
        with pytest.raises(NotZeroPreserving):
            check_morphism([1, 1], c2, c2)

    def test_bad_shapes(self, c2, c3):
        with pytest.raises(IllFormed):
            Morphism(c2, c3, [0])
        with pytest.raises(IllFormed):
            Morphism(c2, c3, [0, 3])

    def test_composition_order(self, c2, c3, sq):
        f = Morphism(c2, c3, [0, 2])
        g = Morphism(c3, sq, [0, 1, 3])
        h = compose(g, f)
        assert h.map == (0, 3)
        assert h.src is c2 and h.dst is sq
        assert compose_all([identity(sq), g, f]) == h

    def test_compose_mismatch(self, c2, sq):
        with pytest.raises(IllFormed):
            identity(c2) * identity(sq)

    def test_inverse(self, sq):
        swap = Morphism(sq, sq, [0, 2, 1, 3])
        assert swap.is_iso
        assert inverse(swap) == swap
        with pytest.raises(NotIso):
            inverse(Morphism(sq, sq, [0, 1, 1, 1]))

    def test_generated_subsemilattice(self, sq):
        sub, incl = generated_subsemilattice(sq, [1])
        assert sub.size == 2
        assert incl.map == (0, 1)
        assert incl.is_embedding

    def test_corestrict(self, sq, c2):
        f = Morphism(sq, c2, [0, 1, 0, 1])
        onto, incl = corestrict(f)
        assert onto.surjective
        assert compose(incl, onto) == f

    def test_meet_witness(self, sq, c2):
        # join-preserving but not meet-preserving: a ∧ b = 0 while f(a) ∧ f(b) = 1
        f = Morphism(sq, c2, [0, 1, 1, 1])
        assert f.is_hom
        assert not f.preserves_meet
        assert f.meet_witness == (1, 2)


class TestLaws:
    @given(homomorphisms())
    def test_identity_laws(self, f):
        assert identity(f.dst) * f == f
        assert f * identity(f.src) == f

    @given(lattices(5), homomorphisms(3))
    def test_enumerated_maps_are_homomorphisms(self, s, f):
        assert f.is_hom
        assert identity(s).is_iso

    @given(relabelings(lattices(5)))
    def test_relabeling_is_iso(self, f):
        assert f.is_iso
        assert inverse(f) * f == identity(f.src)
        assert f * inverse(f) == identity(f.dst)

    def test_chain_flags(self):
        f = Morphism(chain(2), chain(3), [0, 1])
        assert f.flags() == {
            "preserves_join": True,
            "preserves_zero": True,
            "preserves_unit": False,
            "injective": True,
            "is_embedding": True,
            "is_lattice_hom": True,
        }
