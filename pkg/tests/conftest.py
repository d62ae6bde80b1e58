from __future__ import annotations

import numpy as np
import pytest

from core.cover_store import CoverStore
from core.morphism import Morphism
from core.poset import Poset
from core.semilattice import Semilattice, chain, ideal_lattice


def square() -> Semilattice:
    """2²: 0 < a, b < 1 with a = 1, b = 2, top = 3."""
    return Semilattice(
        [[0, 1, 2, 3], [1, 1, 3, 3], [2, 3, 2, 3], [3, 3, 3, 3]], 0, ["0", "a", "b", "1"]
    )


def diamond() -> Semilattice:
    """M3: three atoms 1, 2, 3 below the top 4."""
    table = [[max(a, b) if min(a, b) == 0 else (a if a == b else 4) for b in range(5)] for a in range(5)]
    return Semilattice(table, 0)


def pentagon() -> Semilattice:
    """N5: 0 < a < c < 1 and 0 < b < 1."""
    leq = [
        # 0  a  b  c  1
        [1, 1, 1, 1, 1],
        [0, 1, 0, 1, 1],
        [0, 0, 1, 0, 1],
        [0, 0, 0, 1, 1],
        [0, 0, 0, 0, 1],
    ]
    return Semilattice.from_order(np.array(leq, dtype=bool), ["0", "a", "b", "c", "1"])


@pytest.fixture
def c2() -> Semilattice:
    return chain(2)


@pytest.fixture
def c3() -> Semilattice:
    return chain(3)


@pytest.fixture
def sq() -> Semilattice:
    return square()


@pytest.fixture
def m3() -> Semilattice:
    return diamond()


@pytest.fixture
def n5() -> Semilattice:
    return pentagon()


@pytest.fixture
def boolean8() -> Semilattice:
    return ideal_lattice(Poset.antichain(3))


@pytest.fixture
def store() -> CoverStore:
    """Memory-only cover store."""
    return CoverStore()


@pytest.fixture
def c3_into_square(c3: Semilattice, sq: Semilattice) -> Morphism:
    return Morphism(c3, sq, [0, 1, 3])


@pytest.fixture(autouse=True)
def _isolated_dirs(tmp_path, monkeypatch):
    """Keep config and cache writes inside the test's temporary directory."""
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "config"))
    monkeypatch.setenv("XDG_CACHE_HOME", str(tmp_path / "cache"))
    monkeypatch.delenv("SEMILATTICE_WORKBENCH_CACHE", raising=False)
