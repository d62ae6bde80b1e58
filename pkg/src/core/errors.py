"""Exception hierarchy for the workbench.

Every error carries an optional ``witness`` (indices, pairs or names) so that
callers and reports can show exactly where a law or precondition failed.
"""

from __future__ import annotations

from typing import Any


class WorkbenchError(Exception):
    """Base class for all workbench failures."""

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


# ----- Semilattice axioms -----

class AxiomViolation(WorkbenchError):
    pass


class MalformedTable(AxiomViolation):
    pass


class NotIdempotent(AxiomViolation):
    pass


class NotCommutative(AxiomViolation):
    pass


class NotAssociative(AxiomViolation):
    pass


class ZeroNotNeutral(AxiomViolation):
    pass


# ----- Morphisms -----

class MorphismError(WorkbenchError):
    pass


class NotJoinPreserving(MorphismError):
    pass


class NotZeroPreserving(MorphismError):
    pass


class NotEmbedding(MorphismError):
    pass


class NotIso(MorphismError):
    pass


class NotSurjective(MorphismError):
    pass


class NotLatticeHom(MorphismError):
    pass


class NotMeetPreserving(MorphismError):
    pass


# ----- Structure preconditions -----

class NotDistributive(WorkbenchError):
    pass


class NotJoinIrreducible(WorkbenchError):
    pass


class NotACongruence(WorkbenchError):
    pass


class NotACocone(WorkbenchError):
    pass


class IllFormed(WorkbenchError):
    pass


class Inconsistent(WorkbenchError):
    """A universal factorization demanded two different images; always a bug."""


class InternalConsistencyError(WorkbenchError):
    """A postcondition guaranteed by theory did not hold."""


class MissingDependency(WorkbenchError):
    pass


# ----- Limits -----

class SizeCapExceeded(WorkbenchError):
    pass


class DenseCapExceeded(SizeCapExceeded):
    """A dense table would be too large; a sparse representation may still fit."""


class CapExceeded(WorkbenchError):
    pass


class BoundTooLarge(WorkbenchError):
    pass


# ----- Surfaces -----

class UnknownSuite(WorkbenchError):
    pass


class UnknownSetting(WorkbenchError):
    pass


class CodecError(WorkbenchError):
    pass
