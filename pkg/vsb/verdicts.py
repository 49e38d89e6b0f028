"""
VSBraid - Verdicts
===================
Return values of the checkers: script replay, diagram validation, and lemma
verification. A failed check is a value, not an exception.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Valid:
    ok = True

    def __str__(self) -> str:
        return "Valid"


@dataclass(frozen=True)
class Invalid:
    at: int
    reason: str
    ok = False

    def __str__(self) -> str:
        return f"Invalid at {self.at}: {self.reason}"


@dataclass(frozen=True)
class Verified:
    detail: str = ""
    ok = True

    def __str__(self) -> str:
        return f"Verified ({self.detail})" if self.detail else "Verified"


@dataclass(frozen=True)
class Failed:
    detail: str
    ok = False

    def __str__(self) -> str:
        return f"Failed ({self.detail})"
