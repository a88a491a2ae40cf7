"""Exception hierarchy shared by all modules.

Every error carries an ``exit_code`` used by the command-line front end:
1 for domain errors, 2 for exceeded resource bounds.
"""

from __future__ import annotations


class SRingError(Exception):
    exit_code = 1


class InvalidFactorError(SRingError, ValueError):
    pass


class ResourceError(SRingError):
    """A configured size bound was exceeded."""

    exit_code = 2


class NestingError(SRingError, ValueError):
    pass


class NotABijectionError(SRingError, ValueError):
    pass


class UsageError(SRingError, ValueError):
    pass


class DomainMismatchError(SRingError, ValueError):
    pass


class PartitionError(SRingError, ValueError):
    """The input sets do not form a partition of the group."""

    def __init__(self, message: str, witness: dict | None = None):
        self.witness = witness or {}
        super().__init__(message)

    def to_json(self) -> dict:
        return {"axiom": "partition", "witness": self.witness}


class AxiomViolation(SRingError):
    """A partition of the group fails one of the S-ring axioms.

    ``axiom`` is one of ``"S1"``, ``"S2"``, ``"S3"``; ``witness`` is a
    JSON-ready dict pinpointing the failure.
    """

    def __init__(self, axiom: str, witness: dict):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"axiom {axiom} violated: {witness}")

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "witness": self.witness}


class NotAnAGroupError(SRingError, ValueError):
    pass


class NotASectionError(SRingError, ValueError):
    pass


class InconsistencyError(SRingError):
    """An identity that holds for every valid S-ring failed."""


class NotAnAutomorphismError(SRingError, ValueError):
    pass


class PreconditionError(SRingError, ValueError):
    pass


class GluingError(SRingError, ValueError):
    def __init__(self, message: str, witness: dict | None = None):
        self.witness = witness or {}
        super().__init__(message)


class HypothesisError(SRingError, ValueError):
    pass


class CertificateError(SRingError):
    pass
