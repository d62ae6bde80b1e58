from __future__ import annotations

import pytest
from hypothesis import given

from core.congruence import (
    class_index,
    congruence_closure,
    discrete,
    is_lattice_simple,
    lattice_congruence_generated,
    lattice_congruences,
    partition_pairs,
    quotient,
)
from core.errors import NotACongruence
from core.semilattice import chain
from strategies import lattices


class TestClosure:
    def test_join_closure_on_square(self, sq):
        # a ~ 0 forces b = 0∨b ~ a∨b = 1
        assert congruence_closure(sq, [(0, 1)]) == ((0, 1), (2, 3))

    def test_lattice_closure_on_diamond_is_total(self, m3):
        assert lattice_congruence_generated(m3, [(0, 1)]) == ((0, 1, 2, 3, 4),)
        assert is_lattice_simple(m3)

    def test_square_is_not_simple(self, sq):
        assert not is_lattice_simple(sq)
        assert not is_lattice_simple(chain(1))
        assert is_lattice_simple(chain(2))

    def test_lattice_congruences_of_chain(self, c3):
        congs = lattice_congruences(c3)
        assert congs == [((0,), (1,), (2,)), ((0,), (1, 2)), ((0, 1), (2,)), ((0, 1, 2),)]

    def test_lattice_congruences_of_square(self, sq):
        assert len(lattice_congruences(sq)) == 4

    def test_helpers(self, sq):
        p = ((0, 1), (2, 3))
        assert class_index(p, 4) == [0, 0, 1, 1]
        assert partition_pairs(p) == [(0, 1), (2, 3)]
        assert discrete(sq) == ((0,), (1,), (2,), (3,))

    @given(lattices(6))
    def test_closure_is_compatible(self, s):
        if s.size < 2:
            return
        part = congruence_closure(s, [(s.zero, s.atoms[0])])
        q, proj = quotient(s, part)
        assert proj.is_hom
        assert proj.surjective
        assert q.size == len(part)


class TestQuotient:
    def test_quotient_of_square(self, sq):
        q, proj = quotient(sq, [(0, 1), (2, 3)])
        assert q.same_structure(chain(2))
        assert proj.map == (0, 0, 1, 1)
        assert q.labels == ("[0]", "[b]")

    def test_rejects_incompatible(self, sq):
        with pytest.raises(NotACongruence) as exc:
            quotient(sq, [(0, 1), (2,), (3,)])
        assert len(exc.value.witness) == 3

    def test_rejects_incomplete(self, sq):
        with pytest.raises(NotACongruence):
            quotient(sq, [(0, 1), (2,)])
