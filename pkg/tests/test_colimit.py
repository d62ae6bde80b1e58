from __future__ import annotations

import pytest
from hypothesis import given, settings

from core.canonical import isomorphic
from core.colimit import (
    colimit,
    colimit_via_free_algebra,
    factor_through,
    leg_generators,
    pushout_amalgamate,
    scan_closed_tuples,
)
from core.diagram import Cocone, Diagram, chain_system, single_vertex, span
from core.errors import DenseCapExceeded, NotACocone, NotEmbedding, SizeCapExceeded
from core.morphism import Morphism, identity
from core.poset import Poset
from core.semilattice import chain
from strategies import homomorphisms


class TestColimit:
    def test_single_vertex(self, sq):
        result = colimit(single_vertex(sq))
        assert isomorphic(result.apex, sq)
        assert result.leg(0).is_iso
        assert len(leg_generators(result)) == 2
        assert result.generator_map[result.apex.zero] == ()

    def test_chain_system_reaches_the_last_vertex(self, c2, c3, sq):
        d = chain_system([c2, c3, sq], [Morphism(c2, c3, [0, 2]), Morphism(c3, sq, [0, 1, 3])])
        result = colimit(d)
        assert isomorphic(result.apex, sq)
        assert result.leg(2).is_iso
        assert all(leg.is_embedding for leg in result.legs)
        result.cocone().validate(d)

    def test_coproduct_is_the_product(self, c2, sq):
        one = chain(1)
        d = span(one, Morphism(one, c2, [0]), Morphism(one, c2, [0]))
        result = colimit(d)
        assert isomorphic(result.apex, sq)
        assert result.legs[1].image() != result.legs[2].image()

    def test_generator_map_rebuilds_the_apex(self, c2, c3):
        result = colimit(chain_system([c2, c3], [Morphism(c2, c3, [0, 2])]))
        for e, gens in result.generator_map.items():
            assert result.apex.join_all(result.legs[i](x) for i, x in gens) == e

    def test_cap(self, boolean8):
        with pytest.raises(SizeCapExceeded):
            colimit(single_vertex(boolean8), cap=4)

    @given(homomorphisms(4))
    @settings(max_examples=40)
    def test_matches_free_algebra_reference(self, f):
        d = Diagram(Poset.chain(2), [f.src, f.dst], {(0, 1): f})
        result = colimit(d)
        reference, legs = colimit_via_free_algebra(d)
        assert isomorphic(result.apex, reference)
        assert isomorphic(result.apex, f.dst)
        assert all(leg.is_hom for leg in legs)


class TestFactorization:
    def test_self_factorization_is_identity(self, c2, c3, sq):
        d = chain_system([c2, c3, sq], [Morphism(c2, c3, [0, 2]), Morphism(c3, sq, [0, 1, 3])])
        result = colimit(d)
        h = factor_through(result, result.cocone())
        assert h.map == tuple(result.apex.elements)

    def test_factor_through_a_quotient(self, sq, c2):
        result = colimit(single_vertex(sq))
        k = Cocone(c2, (Morphism(sq, c2, [0, 1, 0, 1]),))
        h = factor_through(result, k)
        assert (h * result.leg(0)).map == (0, 1, 0, 1)
        assert h.is_hom

    def test_rejects_a_non_cocone(self, c2, c3):
        d = chain_system([c2, c3], [Morphism(c2, c3, [0, 2])])
        result = colimit(d)
        k = Cocone(c3, (Morphism(c2, c3, [0, 1]), identity(c3)))
        with pytest.raises(NotACocone):
            factor_through(result, k)


class TestPushout:
    def test_amalgam_of_two_chains(self, c2, c3):
        phi = Morphism(c2, c3, [0, 2])
        apex, leg1, leg2 = pushout_amalgamate(phi, phi)
        assert apex.size == 5
        assert (leg1 * phi).map == (leg2 * phi).map
        assert leg1.is_embedding and leg2.is_embedding
        reference, _ = colimit_via_free_algebra(span(c2, phi, phi))
        assert isomorphic(apex, reference)

    def test_boolean_amalgam(self, c2, c3):
        phi = Morphism(c2, c3, [0, 2])
        apex, leg1, leg2 = pushout_amalgamate(phi, phi, boolean=True)
        assert apex.is_boolean()
        assert (leg1 * phi).map == (leg2 * phi).map

    def test_requires_embeddings(self, c2, c3):
        with pytest.raises(NotEmbedding):
            pushout_amalgamate(Morphism(c3, c2, [0, 0, 1]), identity(c3))


class TestTupleScan:
    def test_matches_the_dense_colimit(self, c2, c3, sq):
        d = chain_system([c2, c3, sq], [Morphism(c2, c3, [0, 2]), Morphism(c3, sq, [0, 1, 3])])
        scan = scan_closed_tuples(d)
        dense = colimit(d)
        assert scan.size == dense.apex.size
        assert {tuple(int(x) for x in row) for row in scan.rows} == set(dense.tuples)
        assert int(scan.meet_irreducible.sum()) == len(dense.apex.meet_irreducibles)

    def test_meet_irreducibles_of_the_coproduct(self, c2):
        one = chain(1)
        scan = scan_closed_tuples(span(one, Morphism(one, c2, [0]), Morphism(one, c2, [0])))
        assert scan.size == 4
        flagged = {tuple(int(x) for x in row) for row in scan.mirr}
        assert flagged == {(0, 1, 0), (0, 0, 1)}

    def test_units_are_leg_images(self, sq):
        scan = scan_closed_tuples(single_vertex(sq))
        assert scan.units(0, sq.elements).tolist() == [[x] for x in sq.elements]
        assert scan.leq(scan.units(0, [1]), scan.units(0, [0, 1, 2, 3])).tolist() == [[False, True, False, True]]

    @given(homomorphisms(4))
    @settings(max_examples=20)
    def test_sizes_agree_on_arrows(self, f):
        d = Diagram(Poset.chain(2), [f.src, f.dst], {(0, 1): f})
        scan = scan_closed_tuples(d)
        dense = colimit(d)
        assert scan.size == dense.apex.size
        assert int(scan.meet_irreducible.sum()) == len(dense.apex.meet_irreducibles)

    def test_cap(self, boolean8):
        with pytest.raises(SizeCapExceeded) as exc:
            scan_closed_tuples(single_vertex(boolean8), cap=4)
        assert exc.value.witness["generators"] == 3

    def test_dense_cap_is_distinguished(self, boolean8):
        with pytest.raises(DenseCapExceeded):
            colimit(single_vertex(boolean8), dense_cap=4)
