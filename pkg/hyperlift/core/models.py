"""
Core data models for hyperlift.

These are plain dataclasses with no dependencies beyond the standard library.
Numbers are stored in their ``p/q`` text form (or as decimal strings in numeric
mode), so every model serializes deterministically and crosses process
boundaries unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Literal

type Mode = Literal["exact", "numeric"]
type OutputFormat = Literal["text", "json"]
type Command = Literal["qpoly", "roots", "verify-transform", "verify-summation", "suite"]
type ErrorKind = Literal["domain", "convergence", "consistency"]


@dataclass(frozen=True)
class Mismatch:
    """The first coefficient (or value) at which two sides differ."""

    index: int
    lhs: str
    rhs: str

    def to_dict(self) -> dict[str, Any]:
        return {"index": self.index, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class VerificationReport:
    """
    Outcome of one verification.

    ``extra`` carries case-specific fields (N, m, variant, ...) that are merged
    into the serialized object after the fixed keys.
    """

    identity: str
    k: int | None
    params: dict[str, str]
    order: int | None
    mode: Mode
    passed: bool
    first_mismatch: Mismatch | None = None
    seed: int | None = None
    elapsed_ms: float = 0.0
    max_difference: str | None = None
    extra: dict[str, Any] = field(default_factory=dict)
    error: ErrorKind | None = None
    detail: str | None = None

    def to_dict(self) -> dict[str, Any]:
        """Serialize with a fixed key order: the core fields first, then extras."""
        d: dict[str, Any] = {
            "identity": self.identity,
            "k": self.k,
            "params": dict(self.params),
            "order": self.order,
            "mode": self.mode,
            "pass": self.passed,
            "first_mismatch": self.first_mismatch.to_dict() if self.first_mismatch else None,
            "seed": self.seed,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }
        for key in sorted(self.extra):
            d[key] = self.extra[key]
        if self.max_difference is not None:
            d["max_difference"] = self.max_difference
        if self.error is not None:
            d["error"] = self.error
            d["detail"] = self.detail
        return d


@dataclass(frozen=True)
class PolynomialRecord:
    """A printed polynomial: family descriptor, coefficients and optional negated roots."""

    family: str
    k: int
    params: dict[str, str]
    coefficients: list[str]
    text: str
    roots: list[str] | None = None

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "family": self.family,
            "k": self.k,
            "params": dict(self.params),
            "coefficients": list(self.coefficients),
            "text": self.text,
        }
        if self.roots is not None:
            d["negated_roots"] = list(self.roots)
        return d


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI invocation needs, already validated against Settings."""

    command: Command
    name: str | None = None
    k: int = 0
    params: dict[str, str] = field(default_factory=dict)
    sizes: dict[str, int] = field(default_factory=dict)
    variant: str | None = None
    perturb: dict[str, str] = field(default_factory=dict)
    order: int = 16
    precision_bits: int = 256
    max_terms: int = 20000
    seed: int = 42
    fmt: OutputFormat = "text"
    cases: int = 20
    k_max: int = 3
    size_max: int = 6
    pairing_cases: int = 10
    workers: int = 1
    tail_exponent: float | None = None
