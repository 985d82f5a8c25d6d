"""Exception types shared across the pipeline modules."""

from __future__ import annotations


class MatchdexError(Exception):
    """Base class for all package-specific errors."""


class InvalidState(MatchdexError):
    """A score state violates the scoring vocabulary or is unreachable."""


class MatchOver(MatchdexError):
    """A transition was requested from a terminal (match-won) state."""


class EmptySequence(MatchdexError):
    """An operation requiring a nonempty sequence received an empty one."""


class LengthMismatch(MatchdexError):
    """Paired sequences differ in length."""


class UnorderedSegments(MatchdexError):
    """Segments are overlapping or not in temporal order."""


class BadDimensions(MatchdexError):
    """An image or frame stack has unusable dimensions."""


class DimensionMismatch(MatchdexError):
    """Feature/weight dimensions are inconsistent."""


class DegenerateData(MatchdexError):
    """Training data cannot support the requested fit (e.g. one class)."""


class TooFewFrames(MatchdexError):
    """A temporal operation needs more frames than the stack provides."""


class DegenerateStack(MatchdexError):
    """A frame stack carries no gradient signal at all."""


class NoCandidate(MatchdexError):
    """Scorecard search found no candidate region."""


class BadSpec(MatchdexError):
    """A synthetic-data spec is out of its documented ranges."""


class SchemaError(MatchdexError):
    """A persisted document failed schema validation.

    ``location`` is a JSON-pointer-style path to the offending node.
    """

    def __init__(self, message: str, location: str = "") -> None:
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class NegativeInput(MatchdexError):
    """A nonnegative-only operation received negative components."""
