"""Canonical representatives of isomorphism classes.

Labelings are restricted to orders sorting elements by an invariant key
whose first component is the height, so every admissible labeling is a
linear extension. Among those, the labeling whose strict-order matrix read
column by column is lexicographically least is chosen; the canonical join
table is derived from it.
"""

from __future__ import annotations

import hashlib
import json
import logging
from typing import Dict, List, Tuple

from core.errors import SizeCapExceeded
from core.morphism import Morphism
from core.semilattice import Semilattice

logger = logging.getLogger(__name__)

DEFAULT_CAP = 24

Key = Tuple[int, int, int, int, int]


def element_keys(s: Semilattice) -> List[Key]:
    """Isomorphism-invariant key per element."""
    return [
        (
            s.heights[x],
            int(s.down_count[x]),
            int(s.up_count[x]),
            len(s.lower_covers[x]),
            len(s.upper_covers[x]),
        )
        for x in s.elements
    ]


def _twin_classes(s: Semilattice) -> List[int]:
    """Representative per element of its class of order-twins.

    Twins share strict down-set and strict up-set, so swapping them is an
    automorphism and only one needs to be tried at each position.
    """
    order = s.order
    seen: Dict[Tuple[bytes, bytes], int] = {}
    rep = []
    for x in s.elements:
        col = order[:, x].copy()
        row = order[x].copy()
        col[x] = row[x] = False
        sig = (col.tobytes(), row.tobytes())
        rep.append(seen.setdefault(sig, x))
    return rep


def canonical_form(s: Semilattice, cap: int = DEFAULT_CAP) -> Tuple[Semilattice, Morphism]:
    """Return the canonical copy of ``s`` and the isomorphism ``s -> canonical``."""
    if s.size > cap:
        raise SizeCapExceeded(
            f"canonical form limited to {cap} elements, got {s.size}", witness=s.size
        )
    keys = element_keys(s)
    slots = sorted(keys)
    by_key: Dict[Key, List[int]] = {}
    for x in s.elements:
        by_key.setdefault(keys[x], []).append(x)
    twins = _twin_classes(s)
    order = s.order

    frontier: List[Tuple[int, ...]] = [()]
    for k in range(s.size):
        cell = by_key[slots[k]]
        best = None
        nxt: List[Tuple[int, ...]] = []
        for prefix in frontier:
            used = set(prefix)
            tried = set()
            for x in cell:
                if x in used or twins[x] in tried:
                    continue
                tried.add(twins[x])
                column = tuple(bool(order[y, x]) for y in prefix)
                if best is None or column < best:
                    best = column
                    nxt = [prefix + (x,)]
                elif column == best:
                    nxt.append(prefix + (x,))
        frontier = nxt
    labeling = frontier[0]
    pos = [0] * s.size
    for k, x in enumerate(labeling):
        pos[x] = k
    table = [[pos[s.join(labeling[i], labeling[j])] for j in range(s.size)] for i in range(s.size)]
    canon = Semilattice(table, pos[s.zero], validate=False)
    logger.debug("canonical form of %d elements kept %d optimal labelings", s.size, len(frontier))
    return canon, Morphism(s, canon, pos)


def canonical_table(s: Semilattice, cap: int = DEFAULT_CAP) -> Tuple[Tuple[int, ...], ...]:
    return canonical_form(s, cap)[0].table


def is_canonical(s: Semilattice, cap: int = DEFAULT_CAP) -> bool:
    return s.labels is None and canonical_form(s, cap)[0].same_structure(s)


def content_key(s: Semilattice) -> str:
    """Stable hash of a join table, used as a cache key for canonical objects."""
    payload = json.dumps({"zero": s.zero, "join": s.table}, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:24]


def isomorphic(s: Semilattice, t: Semilattice, cap: int = DEFAULT_CAP) -> bool:
    if s.size != t.size:
        return False
    return canonical_form(s, cap)[0].same_structure(canonical_form(t, cap)[0])
