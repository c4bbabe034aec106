"""
Command execution for the hyperlift CLI.

run() takes a validated RunConfig and a ReportSink, performs the command and
returns the process exit status. It is the only place where core exceptions
are mapped to exit codes: ParameterError is a usage error (2), other domain
and convergence errors become failing reports (1) and a ConsistencyError
anywhere wins with status 3.
"""

from __future__ import annotations

import sys
from collections.abc import Mapping
from fractions import Fraction
from typing import cast

import mpmath
from loguru import logger

from hyperlift.core.errors import ConsistencyError, HyperliftError, ParameterError
from hyperlift.core.exact import format_exact, parse_exact
from hyperlift.core.identities import build_identity
from hyperlift.core.models import PolynomialRecord, RunConfig, VerificationReport
from hyperlift.core.polynomial import Polynomial
from hyperlift.core.ports import ReportSink
from hyperlift.core.qpoly import (
    BOLD_TAGS,
    Q_TAGS,
    BoldQFamily,
    BoldTag,
    QFamily,
    QTag,
    bold_q,
    hat_q2,
    negated_roots,
    p_poly,
    q_poly,
)
from hyperlift.core.reporting import (
    EXIT_CONSISTENCY,
    EXIT_FAILED,
    EXIT_OK,
    EXIT_USAGE,
    exit_status,
    failure_report,
    format_params,
    threshold_override,
)
from hyperlift.core.suite import run_suite
from hyperlift.core.summations import SummationCase, run_summation
from hyperlift.core.transforms import verify_transform

_VALID_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}

POLYNOMIAL_FAMILIES = (*Q_TAGS, *BOLD_TAGS, "hatQ2", "P")


def _setup_logging(level: str) -> None:
    """
    Configure loguru for CLI output.

    Removes the default loguru stderr handler and replaces it with one that
    uses a consistent timestamp+level format.

    Args:
        level: Log level string (case-insensitive), e.g. "INFO", "DEBUG".

    Raises:
        SystemExit: With status 2 if the level is not a valid log level name.
    """
    normalised = level.upper()
    if normalised not in _VALID_LOG_LEVELS:
        valid = ", ".join(sorted(_VALID_LOG_LEVELS))
        print(f"error: invalid --log-level '{level}'. Valid values: {valid}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)

    logger.remove()  # remove loguru's built-in default handler
    logger.add(
        sys.stderr,
        level=normalised,
        format=("<green>{time:YYYY-MM-DD HH:mm:ss}</green> <level>{level:<8}</level> {message}"),
        colorize=True,
    )


def _parse(params: Mapping[str, str]) -> dict[str, Fraction]:
    return {name: parse_exact(value) for name, value in params.items()}


# ── polynomials ────────────────────────────────────────────────────────


def build_polynomial(
    family: str, k: int, params: Mapping[str, Fraction]
) -> tuple[Polynomial, QFamily | None]:
    """
    The polynomial named by ``family`` plus, for Q families, its QFamily.

    ``P`` reads its A and B from the a and b parameters.

    Raises:
        ParameterError: For an unknown family or missing parameters.
    """
    if family not in POLYNOMIAL_FAMILIES:
        raise ParameterError(
            f"unknown family '{family}'; choose one of {', '.join(POLYNOMIAL_FAMILIES)}"
        )
    quadratic = family in ("Q2", "BQ2", "hatQ2")
    needed = ["a", "b"] + (["c"] if quadratic else [])
    missing = [name for name in needed if name not in params]
    if missing:
        raise ParameterError(f"{family} needs {', '.join('--' + m for m in missing)}")
    a, b, c = params["a"], params["b"], params.get("c") if quadratic else None
    if family == "P":
        return p_poly(k, a, b), None
    if family in Q_TAGS:
        f = QFamily(cast(QTag, family), k, a, b, c, params.get("d"))
        return q_poly(f), f
    bold_tag = "BQ2" if family == "hatQ2" else family
    bold = BoldQFamily(cast(BoldTag, bold_tag), k, a, b, c)
    return (hat_q2(bold) if family == "hatQ2" else bold_q(bold)), None


def polynomial_record(
    family: str,
    k: int,
    params: Mapping[str, Fraction],
    q: Polynomial,
    roots: list[str] | None = None,
) -> PolynomialRecord:
    return PolynomialRecord(
        family=family,
        k=k,
        params=format_params(params),
        coefficients=[format_exact(c) for c in q.coefficients],
        text=str(q),
        roots=roots,
    )


def _run_polynomial(config: RunConfig, sink: ReportSink, *, with_roots: bool) -> int:
    assert config.name is not None
    params = _parse(config.params)
    q, family = build_polynomial(config.name, config.k, params)
    roots: list[str] | None = None
    if with_roots:
        with mpmath.workprec(config.precision_bits):
            xis = negated_roots(q, config.precision_bits, family)
            roots = [format_exact(xi, 30) for xi in xis]
    sink.write_polynomial(polynomial_record(config.name, config.k, params, q, roots))
    return EXIT_OK


# ── verifications ──────────────────────────────────────────────────────


def _verify_transform(config: RunConfig) -> VerificationReport:
    assert config.name is not None
    identity = build_identity(
        config.name,
        config.k,
        config.params,
        precision_bits=config.precision_bits,
        rhs_overrides=config.perturb,
    )
    return verify_transform(
        identity, config.order, seed=config.seed, tol=threshold_override(config.tail_exponent)
    )


def _verify_summation(config: RunConfig) -> VerificationReport:
    assert config.name is not None
    case = SummationCase(
        name=config.name,
        k=config.k,
        sizes=dict(config.sizes),
        params=_parse(config.params),
        variant=config.variant,
        precision_bits=config.precision_bits,
        max_terms=config.max_terms,
    )
    return run_summation(case)


def run(config: RunConfig, sink: ReportSink) -> int:
    """
    Execute one command and return its exit status.

    0 when every verification passed, 1 on any failure, 2 on a usage error and
    3 on an internal-consistency error.
    """
    try:
        if config.command in ("qpoly", "roots"):
            return _run_polynomial(config, sink, with_roots=config.command == "roots")
        if config.command == "suite":
            reports = run_suite(config, on_report=sink.write_report)
            sink.finish(reports)
            return exit_status(reports)
        single = _verify_transform if config.command == "verify-transform" else _verify_summation
        try:
            report = single(config)
        except ParameterError:
            raise
        except HyperliftError as exc:
            logger.warning("{} {}: {}", config.command, config.name, exc)
            report = failure_report(
                config.name or config.command,
                exc,
                k=config.k,
                params=_parse(config.params),
                seed=config.seed,
            )
        sink.write_report(report)
        sink.finish([report])
        return exit_status([report])
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except HyperliftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
