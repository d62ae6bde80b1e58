from __future__ import annotations

import json

import pytest

from core.canonical import is_canonical
from core.corpus import (
    KNOWN_COUNTS,
    embeddings_between,
    enumerate_semilattices,
    lattices_by_brute_force,
)
from core.errors import CapExceeded
from core.semilattice import chain


@pytest.fixture(scope="module")
def corpus7():
    return enumerate_semilattices(7)


class TestCorpus:
    def test_known_counts(self, corpus7):
        assert corpus7.counts() == {n + 1: c for n, c in enumerate(KNOWN_COUNTS)}

    @pytest.mark.parametrize("n", range(1, 8))
    def test_matches_brute_force(self, corpus7, n):
        assert [s.table for s in corpus7.by_size(n)] == [s.table for s in lattices_by_brute_force(n)]

    def test_members_are_canonical_and_sorted(self, corpus7):
        assert all(is_canonical(s) for s in corpus7.members)
        keys = [(s.size, s.table) for s in corpus7.members]
        assert keys == sorted(keys)

    def test_small_sizes(self):
        corpus = enumerate_semilattices(4)
        assert corpus.counts() == {1: 1, 2: 1, 3: 1, 4: 2}
        assert corpus.by_size(3)[0].same_structure(chain(3))

    def test_cap(self):
        with pytest.raises(CapExceeded):
            enumerate_semilattices(8)

    def test_select(self, corpus7):
        distributive = corpus7.select(5, distributive=True)
        assert [s.size for s in distributive] == [1, 2, 3, 4, 4, 5, 5, 5]
        assert len(corpus7.select(5, min_size=5)) == 5
        assert all(s.size >= 2 for s in corpus7.select(4, min_size=2))
        atomistic = corpus7.select(5, atomistic=True)
        assert [s.size for s in atomistic] == [1, 2, 4, 5]

    def test_to_dict_is_deterministic(self):
        first = json.dumps(enumerate_semilattices(5).to_dict(), sort_keys=True)
        second = json.dumps(enumerate_semilattices(5).to_dict(), sort_keys=True)
        assert first == second
        record = json.loads(first)
        assert record["counts"] == {"1": 1, "2": 1, "3": 1, "4": 2, "5": 5}
        assert set(record["members"][0]) == {"semilattice", "flags"}

    def test_embeddings_between(self):
        members = enumerate_semilattices(3).select(3)
        maps = list(embeddings_between(members))
        assert all(f.is_embedding for f in maps)
        # 1 into each chain; 2 into itself and twice into 3; 3 into itself
        assert len(maps) == 3 + 1 + 2 + 1
