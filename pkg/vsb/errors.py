"""
VSBraid - Errors
=================
Every domain failure raised by the library is a BraidError. BraidError is a
ValueError, so callers that only expect ValueError keep working.

Search results ("not found within budget") and validation verdicts are
return values, not exceptions.
"""


class BraidError(ValueError):
    """Base class for domain errors."""


class WordParseError(BraidError):
    """Malformed token, bad index, or malformed word JSON."""


class PreconditionError(BraidError):
    """An operation was called outside its precondition."""


class DiagramError(BraidError):
    """Malformed or invalid Morse diagram."""


class ScriptFormatError(BraidError):
    """Malformed rewrite script or Markov trace JSON."""
