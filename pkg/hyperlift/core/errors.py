"""
Exception hierarchy for hyperlift.

Verification outcomes are reported as values (see VerificationReport); the
exceptions below signal that a computation could not be carried out at all.
"""

from __future__ import annotations

from typing import Any


class HyperliftError(Exception):
    """Base class for every error raised by hyperlift."""


class DomainError(HyperliftError, ValueError):
    """A precondition failed: singular parameters, bad sizes, unmet constraints."""


class ParameterError(DomainError):
    """Malformed user input: non-rational text, decimals, unknown names."""


class ConvergenceError(HyperliftError):
    """A numeric series did not meet its tail bound within the term budget."""

    def __init__(self, message: str, partial_sum: Any) -> None:
        super().__init__(message)
        self.partial_sum = partial_sum


class ConsistencyError(HyperliftError):
    """An internal invariant broke, e.g. a raising relation left a remainder."""
