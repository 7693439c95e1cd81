"""
Error types for cwres.

Library code raises these; the CLI turns them into structured error objects
with a kind, a location and a message.
"""

from typing import Any, Dict, List, Optional


class CwresError(ValueError):
    """Base class for every error raised by the library."""

    def __init__(self, message: str, location: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.location = location

    @property
    def kind(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "location": self.location, "message": self.message}


class InputError(CwresError):
    pass


class ConfigError(CwresError):
    pass


class InvalidField(CwresError):
    pass


class DimensionMismatch(CwresError):
    pass


class NotAComplex(CwresError):
    pass


class NotASubcomplex(CwresError):
    pass


class NotACycle(CwresError):
    pass


class CoordinateSolveFailed(CwresError):
    pass


class DuplicateId(CwresError):
    pass


class UnknownElement(CwresError):
    pass


class CycleDetected(CwresError):
    pass


class TransitiveCover(CwresError):
    pass


class NotComparable(CwresError):
    pass


class NoLeastElement(CwresError):
    pass


class NotRanked(CwresError):
    """Raised with a witness element and two maximal chains of different length."""

    def __init__(self, witness: Any, short_chain: List[Any], long_chain: List[Any]):
        super().__init__(
            f"maximal chains ending at {witness!r} have lengths "
            f"{len(short_chain) - 1} and {len(long_chain) - 1}",
            location=str(witness),
        )
        self.witness = witness
        self.short_chain = short_chain
        self.long_chain = long_chain


class NotCWPoset(CwresError):
    def __init__(self, message: str, witness: Any = None):
        super().__init__(message, location=None if witness is None else str(witness))
        self.witness = witness


class EntryNotUnit(CwresError):
    pass


class MissingMultidegrees(CwresError):
    pass


class NonMonotoneLabels(CwresError):
    pass


class NonMonotoneGrading(CwresError):
    pass


class EmptyGeneratorList(CwresError):
    pass
