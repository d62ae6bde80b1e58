"""Integer bitmask helpers for finite subsets of ``range(n)``."""

from __future__ import annotations

from typing import Iterable, Iterator


def mask_of(indices: Iterable[int]) -> int:
    """Pack indices into a bitmask."""
    mask = 0
    for i in indices:
        if i < 0:
            raise ValueError(f"index not greater than or equal to 0, index == {i}")
        mask |= 1 << i
    return mask


def bits(mask: int) -> Iterator[int]:
    """Iterate over set bit positions in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, ascending."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def format_mask(mask: int, names: list[str] | tuple[str, ...] | None = None) -> str:
    """Render a mask as ``{a,b}``; uses indices when no names are given."""
    items = [names[i] if names else str(i) for i in bits(mask)]
    return "{" + ",".join(items) + "}" if items else "∅"
