"""Structural classification of finite semilattices."""

from __future__ import annotations

from core.congruence import is_lattice_simple
from core.models import Classification
from core.semilattice import Semilattice


def classify(s: Semilattice) -> Classification:
    witness = s.distributivity_witness()
    distributive = witness is None
    atomistic = s.is_atomistic()
    return Classification(
        size=s.size,
        distributive=distributive,
        boolean=distributive and atomistic and s.is_boolean(),
        atomistic=atomistic,
        lattice_simple=is_lattice_simple(s),
        join_irreducibles=list(s.join_irreducibles),
        meet_irreducibles=list(s.meet_irreducibles),
        distributivity_witness=witness,
    )
