"""Exception hierarchy.

Every error raised by the library derives from :class:`MuThetaError`.  The
command line maps :class:`ParseError` to exit status 2 and
:class:`DomainError` to exit status 3.
"""

from __future__ import annotations


class MuThetaError(Exception):
    """Base class for all library errors."""


class ParseError(MuThetaError):
    """Input text or document could not be read structurally."""


class DomainError(MuThetaError):
    """Input was well formed but violates a mathematical constraint."""


# -- datum -----------------------------------------------------------------


class DatumError(DomainError):
    pass


class SignatureMismatch(DatumError):
    pass


class StarOrbitMismatch(DatumError):
    pass


class DuplicateEmbedding(DatumError):
    pass


class BadCmType(DatumError):
    pass


class UnknownEmbedding(DatumError):
    pass


class DifferentOrbits(DatumError):
    pass


class CaseCUnsupported(DomainError):
    """Raised by slope and crystal computations on symplectic data."""


# -- weights ---------------------------------------------------------------


class WeightError(DomainError):
    pass


class LengthMismatch(WeightError):
    pass


class NotDominant(WeightError):
    pass


class NotPositive(WeightError):
    pass


class NotSimple(WeightError):
    pass


class NotSymmetric(WeightError):
    pass


class UpsilonEmpty(WeightError):
    pass


class NotSupported(WeightError):
    pass


# -- schur -----------------------------------------------------------------


class BoundsExceeded(DomainError):
    pass


class BadPartition(DomainError):
    pass


# -- crystal ---------------------------------------------------------------


class ZeroSignature(DomainError):
    pass


class PreconditionViolated(DomainError):
    pass


# -- operators -------------------------------------------------------------


class NotApplicable(DomainError):
    """An operator's hypotheses fail for the given weight."""

    def __init__(self, reason: str) -> None:
        super().__init__(reason)
        self.reason = reason


class DepthLimit(DomainError):
    """Exploration exceeded its node budget."""
