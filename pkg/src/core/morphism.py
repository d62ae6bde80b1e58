"""Element maps between semilattices with derived preservation flags."""

from __future__ import annotations

import logging
from functools import cached_property
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from core.errors import IllFormed, NotIso, NotJoinPreserving, NotZeroPreserving
from core.semilattice import Semilattice, join_closure, restrict

logger = logging.getLogger(__name__)


class Morphism:
    """A total map ``src -> dst`` given as an index tuple.

    Flags are computed on first access. ``g * f`` is ``g ∘ f`` (apply f, then g).
    """

    def __init__(self, src: Semilattice, dst: Semilattice, mapping: Sequence[int]) -> None:
        mapping = tuple(int(v) for v in mapping)
        if len(mapping) != src.size:
            raise IllFormed(f"map has {len(mapping)} entries, source has {src.size}")
        for x, v in enumerate(mapping):
            if not 0 <= v < dst.size:
                raise IllFormed(f"map sends {x} to {v}, outside target", witness=(x, v))
        self.src = src
        self.dst = dst
        self.map = mapping

    def __call__(self, x: int) -> int:
        return self.map[x]

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.map, dtype=np.intp)

    # --- flags ---
    @cached_property
    def join_witness(self) -> Optional[Tuple[int, int]]:
        m = self.array
        lhs = m[self.src.array]
        rhs = self.dst.array[m[:, None], m[None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return int(bad[0][0]), int(bad[0][1])
        return None

    @cached_property
    def meet_witness(self) -> Optional[Tuple[int, int]]:
        m = self.array
        lhs = m[self.src.meet_array]
        rhs = self.dst.meet_array[m[:, None], m[None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return int(bad[0][0]), int(bad[0][1])
        return None

    @property
    def preserves_join(self) -> bool:
        return self.join_witness is None

    @property
    def preserves_zero(self) -> bool:
        return self.map[self.src.zero] == self.dst.zero

    @property
    def preserves_unit(self) -> bool:
        return self.map[self.src.top] == self.dst.top

    @property
    def preserves_meet(self) -> bool:
        return self.meet_witness is None

    @cached_property
    def injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    @cached_property
    def surjective(self) -> bool:
        return len(set(self.map)) == self.dst.size

    @property
    def is_hom(self) -> bool:
        return self.preserves_join and self.preserves_zero

    @property
    def is_embedding(self) -> bool:
        return self.is_hom and self.injective

    @property
    def is_lattice_hom(self) -> bool:
        return self.preserves_join and self.preserves_meet

    @property
    def is_iso(self) -> bool:
        return self.is_embedding and self.surjective

    def flags(self) -> dict:
        return {
            "preserves_join": self.preserves_join,
            "preserves_zero": self.preserves_zero,
            "preserves_unit": self.preserves_unit,
            "injective": self.injective,
            "is_embedding": self.is_embedding,
            "is_lattice_hom": self.is_lattice_hom,
        }

    # --- algebra ---
    def __mul__(self, other: "Morphism") -> "Morphism":
        if not other.dst.same_structure(self.src):
            raise IllFormed("cannot compose: codomain and domain differ")
        return Morphism(other.src, self.dst, [self.map[y] for y in other.map])

    def image(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.map)))

    def same_map(self, other: "Morphism") -> bool:
        return (
            self.map == other.map
            and self.src.same_structure(other.src)
            and self.dst.same_structure(other.dst)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.same_map(other)

    def __hash__(self) -> int:
        return hash((self.map, self.src.size, self.dst.size))

    def __repr__(self) -> str:
        return f"Morphism({self.src.size}->{self.dst.size}, {list(self.map)})"


# ----- Operations -----

def check_morphism(mapping: Sequence[int], src: Semilattice, dst: Semilattice) -> Morphism:
    """Wrap ``mapping`` and insist it is a ⟨∨,0⟩-homomorphism."""
    f = Morphism(src, dst, mapping)
    w = f.join_witness
    if w is not None:
        a, b = w
        raise NotJoinPreserving(
            f"f({a}∨{b}) = {f(src.join(a, b))} but f({a})∨f({b}) = {dst.join(f(a), f(b))}",
            witness=w,
        )
    if not f.preserves_zero:
        raise NotZeroPreserving(
            f"f({src.zero}) = {f(src.zero)}, expected {dst.zero}", witness=(src.zero,)
        )
    return f


def identity(s: Semilattice) -> Morphism:
    return Morphism(s, s, range(s.size))


def compose(g: Morphism, f: Morphism) -> Morphism:
    return g * f


def compose_all(morphisms: Iterable[Morphism]) -> Morphism:
    """``compose_all([h, g, f])`` is ``h ∘ g ∘ f``."""
    items = list(morphisms)
    result = items[-1]
    for m in reversed(items[:-1]):
        result = m * result
    return result


def inverse(f: Morphism) -> Morphism:
    if not f.is_iso:
        raise NotIso("morphism is not an isomorphism", witness=list(f.map))
    inv = [0] * f.dst.size
    for x, y in enumerate(f.map):
        inv[y] = x
    return Morphism(f.dst, f.src, inv)


def inclusion(s: Semilattice, subset: Sequence[int]) -> Tuple[Semilattice, Morphism]:
    """Sub-semilattice on a sorted join-closed subset and its inclusion."""
    sub = restrict(s, subset)
    return sub, Morphism(sub, s, subset)


def generated_subsemilattice(s: Semilattice, seed: Iterable[int]) -> Tuple[Semilattice, Morphism]:
    """Smallest ⟨∨,0⟩-subsemilattice containing ``seed``, with its inclusion."""
    closed = join_closure(s, seed)
    logger.debug("seed generates %d of %d elements", len(closed), s.size)
    return inclusion(s, closed)


def corestrict(f: Morphism) -> Tuple[Morphism, Morphism]:
    """Factor ``f`` as ``incl ∘ f'`` through the image sub-semilattice.

    The image of a ⟨∨,0⟩-homomorphism is join-closed, so ``f'`` is a
    surjective homomorphism (an isomorphism when ``f`` is an embedding).
    """
    img = f.image()
    sub, incl = inclusion(f.dst, img)
    index = {y: k for k, y in enumerate(img)}
    return Morphism(f.src, sub, [index[y] for y in f.map]), incl
