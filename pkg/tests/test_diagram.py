from __future__ import annotations

import pytest

from core.diagram import Cocone, Diagram, DirectSystem, chain_system, single_vertex, span
from core.errors import IllFormed, NotACocone, NotEmbedding, NotJoinPreserving
from core.morphism import Morphism, identity
from core.poset import Poset
from core.semilattice import chain


@pytest.fixture
def tower(c2, c3, sq):
    return chain_system([c2, c3, sq], [Morphism(c2, c3, [0, 2]), Morphism(c3, sq, [0, 1, 3])])


class TestDiagram:
    def test_composites_are_derived(self, tower):
        assert tower.arrow(0, 2).map == (0, 3)
        assert tower.arrow(1, 1).map == (0, 1, 2)
        assert len(tower.all_arrows()) == 6
        assert tower.covers == ((0, 1), (1, 2))

    def test_no_arrow_downward(self, tower):
        with pytest.raises(IllFormed):
            tower.arrow(2, 0)

    def test_missing_cover_arrow(self, c2):
        with pytest.raises(IllFormed):
            Diagram(Poset.chain(2), [c2, c2], {})

    def test_arrow_against_order(self, c2):
        with pytest.raises(IllFormed):
            Diagram(Poset.chain(2), [c2, c2], {(1, 0): identity(c2)})

    def test_arrow_must_be_a_homomorphism(self, c2):
        with pytest.raises(NotJoinPreserving):
            Diagram(Poset.chain(2), [c2, c2], {(0, 1): Morphism(c2, c2, [1, 1])})

    def test_paths_must_commute(self, c2):
        zero = Morphism(c2, c2, [0, 0])
        one = identity(c2)
        index = Poset(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
        arrows = {(0, 1): one, (0, 2): one, (1, 3): one, (2, 3): zero}
        with pytest.raises(IllFormed) as exc:
            Diagram(index, [c2] * 4, arrows)
        assert exc.value.witness[0] == 0

    def test_given_composite_must_agree(self, c2):
        arrows = {(0, 1): identity(c2), (1, 2): identity(c2), (0, 2): Morphism(c2, c2, [0, 0])}
        with pytest.raises(IllFormed):
            Diagram(Poset.chain(3), [c2] * 3, arrows)

    def test_names(self, sq):
        d = single_vertex(sq, name="top")
        assert d.point("top") == 0
        with pytest.raises(IllFormed):
            d.point("missing")
        with pytest.raises(IllFormed):
            Diagram(Poset(2), [sq, sq], {}, names=["x", "x"])

    def test_direct_system_requires_embeddings(self, c2, c3):
        with pytest.raises(NotEmbedding):
            chain_system([c3, c2], [Morphism(c3, c2, [0, 0, 1])])
        d = span(chain(1), Morphism(chain(1), c2, [0]), Morphism(chain(1), c3, [0]))
        assert isinstance(DirectSystem.from_diagram(d), DirectSystem)


class TestCocone:
    def test_valid_cocone(self, tower, sq):
        legs = (Morphism(tower.vertex(0), sq, [0, 3]), tower.arrow(1, 2), identity(sq))
        Cocone(sq, legs).validate(tower)

    def test_non_commuting_cocone(self, tower, sq):
        legs = (Morphism(tower.vertex(0), sq, [0, 1]), tower.arrow(1, 2), identity(sq))
        with pytest.raises(NotACocone) as exc:
            Cocone(sq, legs).validate(tower)
        assert exc.value.witness == (0, 1, 1)

    def test_wrong_component_count(self, tower, sq):
        with pytest.raises(NotACocone):
            Cocone(sq, (identity(sq),)).validate(tower)
