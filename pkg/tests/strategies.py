"""Hypothesis strategies for corpus members, relabelings and homomorphisms."""

from __future__ import annotations

from functools import lru_cache
from typing import List, Sequence

import hypothesis.strategies as st

from core.corpus import enumerate_semilattices
from core.homs import join_homomorphisms
from core.morphism import Morphism
from core.semilattice import Semilattice


@lru_cache(maxsize=None)
def corpus_members(max_size: int, distributive: bool = False) -> List[Semilattice]:
    corpus = enumerate_semilattices(max_size)
    return corpus.select(max_size, distributive=True if distributive else None)


def lattices(max_size: int = 5) -> st.SearchStrategy[Semilattice]:
    return st.sampled_from(corpus_members(max_size))


def distributive_lattices(max_size: int = 5) -> st.SearchStrategy[Semilattice]:
    return st.sampled_from(corpus_members(max_size, True))


def relabel(s: Semilattice, perm: Sequence[int]) -> Morphism:
    """A copy of ``s`` with element x renamed ``perm[x]``, and the isomorphism onto it."""
    inv = [0] * s.size
    for x, y in enumerate(perm):
        inv[y] = x
    table = [[perm[s.join(inv[a], inv[b])] for b in range(s.size)] for a in range(s.size)]
    copy = Semilattice(table, perm[s.zero])
    return Morphism(s, copy, perm)


@st.composite
def relabelings(draw, source: st.SearchStrategy[Semilattice]) -> Morphism:
    s = draw(source)
    perm = draw(st.permutations(range(s.size)))
    return relabel(s, perm)


@st.composite
def homomorphisms(draw, max_size: int = 4, embeddings_only: bool = False) -> Morphism:
    members = corpus_members(max_size)
    s = draw(st.sampled_from(members))
    t = draw(st.sampled_from(members))
    maps = list(join_homomorphisms(s, t, embeddings_only=embeddings_only))
    if not maps:
        # the zero map always exists; an embedding into a smaller target does not
        maps = list(join_homomorphisms(s, s, embeddings_only=embeddings_only))
    return draw(st.sampled_from(maps))
