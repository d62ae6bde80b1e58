"""Free ⟨∨,0⟩-semilattices and finite products."""

from __future__ import annotations

import logging
import math
from typing import List, Sequence, Tuple

import numpy as np

from core.errors import DenseCapExceeded, SizeCapExceeded
from core.morphism import Morphism
from core.semilattice import Semilattice
from utils.bitsets import format_mask

logger = logging.getLogger(__name__)

DENSE_MAX_SIZE = 1024


def free_join_semilattice(
    n: int, cap: int = DENSE_MAX_SIZE, names: Sequence[str] | None = None
) -> Semilattice:
    """Subsets of ``{0..n-1}`` under union; element index is the subset bitmask."""
    if n < 0:
        raise SizeCapExceeded(f"generator count must be non-negative, got {n}")
    if (1 << n) > cap:
        raise DenseCapExceeded(
            f"free semilattice on {n} generators has {1 << n} elements, cap is {cap}",
            witness=n,
        )
    idx = np.arange(1 << n, dtype=np.intp)
    table = idx[:, None] | idx[None, :]
    labels = [format_mask(m, names) for m in range(1 << n)]
    return Semilattice(table, 0, labels, validate=False)


def generator(n: int, i: int) -> int:
    """Index of the singleton ``{i}`` in ``free_join_semilattice(n)``."""
    return 1 << i


def product(
    factors: Sequence[Semilattice], cap: int = DENSE_MAX_SIZE
) -> Tuple[Semilattice, List[Morphism], List[Morphism]]:
    """Componentwise product with its injections and projections.

    Element index is mixed-radix with the first factor least significant.
    """
    sizes = [f.size for f in factors]
    total = math.prod(sizes)
    if total > cap:
        raise SizeCapExceeded(f"product has {total} elements, cap is {cap}", witness=sizes)
    strides = []
    acc = 1
    for n in sizes:
        strides.append(acc)
        acc *= n
    idx = np.arange(total, dtype=np.intp)
    table = np.zeros((total, total), dtype=np.intp)
    zero = 0
    for f, n, stride in zip(factors, sizes, strides):
        coord = (idx // stride) % n
        table += stride * f.array[coord[:, None], coord[None, :]]
        zero += stride * f.zero
    coords = [[(e // stride) % n for stride, n in zip(strides, sizes)] for e in range(total)]
    labels = [
        "(" + ",".join(f.label(c) for f, c in zip(factors, cs)) + ")" for cs in coords
    ]
    prod = Semilattice(table, zero, labels, validate=False)
    injections = []
    projections = []
    for i, (f, stride) in enumerate(zip(factors, strides)):
        base = zero - stride * f.zero
        injections.append(Morphism(f, prod, [base + stride * x for x in f.elements]))
        projections.append(Morphism(prod, f, [cs[i] for cs in coords]))
    logger.debug("product of %s has %d elements", sizes, total)
    return prod, injections, projections
