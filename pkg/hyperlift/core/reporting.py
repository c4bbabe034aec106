"""
Building, formatting and scoring VerificationReports.

Every verifier in the core ends in make_report (or failure_report when the
computation itself could not be carried out). emit_report is the one
serializer both report sinks use, so text and JSON output stay in step.
"""

from __future__ import annotations

import json
import time
from collections.abc import Mapping, Sequence
from typing import Any

import mpmath

from hyperlift.core.errors import ConsistencyError, ConvergenceError, DomainError
from hyperlift.core.exact import Scalar, format_exact, is_exact, to_approx
from hyperlift.core.models import (
    ErrorKind,
    Mismatch,
    OutputFormat,
    VerificationReport,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_CONSISTENCY = 3

# Growing parameter values 10^t used by the limit checks.
LIMIT_EXPONENTS = (4, 6, 8, 10)


def numeric_threshold(precision_bits: int, fraction: float = 0.15) -> Any:
    """Pass threshold 10^-(fraction * precision_bits) for numeric comparisons."""
    return mpmath.mpf(10) ** (-mpmath.mpf(fraction) * precision_bits)


def threshold_override(exponent: float | None) -> Any:
    """10^-exponent, or None to keep the precision-based default."""
    return None if exponent is None else mpmath.mpf(10) ** -mpmath.mpf(exponent)


def elapsed_ms(started: float) -> float:
    """Milliseconds since a ``time.perf_counter()`` reading."""
    return (time.perf_counter() - started) * 1000.0


def format_params(params: Mapping[str, Scalar | None]) -> dict[str, str]:
    """Text form of a parameter record, dropping unset entries."""
    return {name: format_exact(value) for name, value in params.items() if value is not None}


def compare_sequences(
    lhs: Sequence[Scalar], rhs: Sequence[Scalar], tol: Any = None
) -> tuple[Mismatch | None, Any]:
    """
    Compare two coefficient (or value) sequences index by index.

    Exact pairs must be equal. As soon as one side of a pair is numeric the
    pair is compared relatively: |l − r| <= tol · max(1, |l|, |r|).

    Returns:
        The first mismatch (or None) and the largest difference seen in
        numeric mode (None when every pair was exact).
    """
    if len(lhs) != len(rhs):
        raise DomainError(f"cannot compare sequences of lengths {len(lhs)} and {len(rhs)}")
    first: Mismatch | None = None
    largest: Any = None
    for index, (left, right) in enumerate(zip(lhs, rhs, strict=True)):
        if is_exact(left) and is_exact(right):
            equal = left == right
        else:
            x, y = to_approx(left), to_approx(right)
            difference = abs(x - y)
            largest = difference if largest is None else max(largest, difference)
            bound = (tol if tol is not None else mpmath.mpf(0)) * max(1, abs(x), abs(y))
            equal = difference <= bound
        if not equal and first is None:
            first = Mismatch(index, format_exact(left), format_exact(right))
    return first, largest


def make_report(
    identity: str,
    lhs: Sequence[Scalar],
    rhs: Sequence[Scalar],
    *,
    k: int | None,
    params: Mapping[str, Scalar | None],
    order: int | None,
    tol: Any = None,
    seed: int | None = None,
    started: float | None = None,
    extra: Mapping[str, Any] | None = None,
) -> VerificationReport:
    """Compare both sides and package the outcome."""
    mismatch, largest = compare_sequences(lhs, rhs, tol)
    exact = all(is_exact(v) for v in (*lhs, *rhs))
    return VerificationReport(
        identity=identity,
        k=k,
        params=format_params(params),
        order=order,
        mode="exact" if exact else "numeric",
        passed=mismatch is None,
        first_mismatch=mismatch,
        seed=seed,
        elapsed_ms=elapsed_ms(started) if started is not None else 0.0,
        max_difference=None if largest is None else mpmath.nstr(largest, 5),
        extra=dict(extra or {}),
    )


def decay_report(
    identity: str,
    gaps: Sequence[Scalar],
    *,
    k: int | None,
    params: Mapping[str, Scalar | None],
    started: float | None = None,
    extra: Mapping[str, Any] | None = None,
) -> VerificationReport:
    """
    Pass when each gap is zero or at most a tenth of the one before it.

    Used for limits checked along a growing parameter (d, f, C = 10^t).
    """
    mismatch: Mismatch | None = None
    for index in range(1, len(gaps)):
        previous, current = abs(gaps[index - 1]), abs(gaps[index])
        if current != 0 and current * 10 > previous:
            mismatch = Mismatch(index, format_exact(current), f"<= {format_exact(previous / 10)}")
            break
    details = dict(extra or {})
    details["gaps"] = [format_exact(g, 8) for g in gaps]
    return VerificationReport(
        identity=identity,
        k=k,
        params=format_params(params),
        order=None,
        mode="exact" if all(is_exact(g) for g in gaps) else "numeric",
        passed=mismatch is None,
        first_mismatch=mismatch,
        elapsed_ms=elapsed_ms(started) if started is not None else 0.0,
        extra=details,
    )


def error_kind(exc: BaseException) -> ErrorKind:
    """Map a hyperlift exception to its report category."""
    if isinstance(exc, ConsistencyError):
        return "consistency"
    if isinstance(exc, ConvergenceError):
        return "convergence"
    return "domain"


def failure_report(
    identity: str,
    exc: Exception,
    *,
    k: int | None = None,
    params: Mapping[str, Scalar | None] | None = None,
    order: int | None = None,
    seed: int | None = None,
    extra: Mapping[str, Any] | None = None,
) -> VerificationReport:
    """A failing report for a case whose computation raised."""
    return VerificationReport(
        identity=identity,
        k=k,
        params=format_params(params or {}),
        order=order,
        mode="exact",
        passed=False,
        seed=seed,
        extra=dict(extra or {}),
        error=error_kind(exc),
        detail=str(exc),
    )


def report_line(report: VerificationReport) -> str:
    """One human-readable line, e.g. ``PASS thmA2 k=0 N=12 a=1 b=1/3 c=1/5``."""
    parts = ["PASS" if report.passed else "FAIL", report.identity]
    if report.k is not None:
        parts.append(f"k={report.k}")
    if report.order is not None:
        parts.append(f"N={report.order}")
    parts.extend(f"{name}={value}" for name, value in report.params.items())
    parts.extend(f"{name}={value}" for name, value in sorted(report.extra.items()))
    if report.max_difference is not None:
        parts.append(f"max_diff={report.max_difference}")
    if report.first_mismatch is not None:
        m = report.first_mismatch
        parts.append(f"first_mismatch@{m.index}: {m.lhs} != {m.rhs}")
    if report.error is not None:
        parts.append(f"[{report.error}]")
    if report.detail:
        parts.append(report.detail)
    return " ".join(parts)


def emit_report(reports: Sequence[VerificationReport], fmt: OutputFormat) -> str:
    """
    Deterministic serialization of a report stream.

    JSON mode emits one object per line; text mode one report_line per report.
    An empty stream serializes to the empty string.
    """
    if fmt == "json":
        lines = [json.dumps(r.to_dict(), ensure_ascii=False) for r in reports]
    else:
        lines = [report_line(r) for r in reports]
    return "".join(line + "\n" for line in lines)


def exit_status(reports: Sequence[VerificationReport]) -> int:
    """0 when everything passed, 3 on any consistency error, otherwise 1."""
    if any(r.error == "consistency" for r in reports):
        return EXIT_CONSISTENCY
    if all(r.passed for r in reports):
        return EXIT_OK
    return EXIT_FAILED
