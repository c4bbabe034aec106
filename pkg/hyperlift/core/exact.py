"""
Exact and approximate scalars.

Exact work is done over ``fractions.Fraction``; numeric mode uses mpmath
multiprecision numbers. This module parses and formats the ``p/q`` text form
used in configs and reports, and provides the Pochhammer symbol over any ring
the rest of the package needs (rationals, mpmath numbers, polynomials in n).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any

import mpmath

from hyperlift.core.errors import DomainError, ParameterError

MIN_PRECISION_BITS = 64
DEFAULT_PRECISION_BITS = 256

# A scalar is a Fraction in exact mode, an mpmath mpf/mpc in numeric mode.
type Scalar = Any

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?$")


def parse_exact(text: str) -> Fraction:
    """
    Parse the ``p`` / ``p/q`` text form into a Fraction.

    Decimal notation is rejected rather than converted, so that a verification
    never runs on an inexact value by accident.

    Args:
        text: Rational in text form, e.g. "3", "-7/2" (a Unicode minus is accepted).

    Returns:
        The canonical Fraction.

    Raises:
        ParameterError: If the text is not an exact rational or the denominator is 0.
    """
    match = _RATIONAL_RE.match(text.replace("−", "-"))
    if match is None:
        raise ParameterError(f"'{text}' is not an exact rational (expected p or p/q)")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ParameterError(f"'{text}' has a zero denominator")
    return Fraction(numerator, denominator)


def format_exact(value: Scalar, digits: int = 30) -> str:
    """Render a scalar: ``p/q`` for rationals, ``digits`` significant digits otherwise."""
    if isinstance(value, int | Fraction):
        return str(Fraction(value))
    return str(mpmath.nstr(value, digits))


def is_exact(value: Scalar) -> bool:
    """True for ints and Fractions."""
    return isinstance(value, int | Fraction)


def to_approx(value: Scalar) -> Any:
    """Convert a scalar to an mpmath number at the current working precision."""
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    if isinstance(value, int):
        return mpmath.mpf(value)
    return mpmath.mpmathify(value)


def align(*values: Scalar) -> tuple[Any, ...]:
    """
    Return ``values`` unchanged when all are exact, else all as mpmath numbers.

    mpmath numbers do not combine with Fractions directly, so any computation
    mixing the two modes goes through here first.
    """
    if all(is_exact(v) for v in values):
        return values
    return tuple(to_approx(v) for v in values)


def check_precision(precision_bits: int) -> int:
    """Return ``precision_bits`` unchanged, or raise DomainError below the supported minimum."""
    if precision_bits < MIN_PRECISION_BITS:
        raise DomainError(
            f"precision_bits must be at least {MIN_PRECISION_BITS}, got {precision_bits}"
        )
    return precision_bits


def numeric_tolerance() -> Any:
    """Half the working precision, as an absolute tolerance."""
    return mpmath.mpf(2) ** (-(mpmath.mp.prec // 2))


def is_zero(value: Scalar, tol: Any = None) -> bool:
    """Exact zero test for rationals; ``|value| <= tol`` for mpmath numbers."""
    if is_exact(value):
        return bool(value == 0)
    return bool(abs(value) <= (numeric_tolerance() if tol is None else tol))


def is_close(x: Scalar, y: Scalar, tol: Any = None) -> bool:
    """Equality for rationals, tolerance comparison as soon as one side is numeric."""
    if is_exact(x) and is_exact(y):
        return bool(x == y)
    return is_zero(to_approx(x) - to_approx(y), tol)


def is_nonpositive_integer(value: Scalar) -> bool:
    """True when ``value`` is one of 0, -1, -2, ... (exactly, for mpmath inputs)."""
    if isinstance(value, int):
        return value <= 0
    if isinstance(value, Fraction):
        return value.denominator == 1 and value <= 0
    if isinstance(value, mpmath.mpc) and value.imag != 0:
        return False
    real = mpmath.re(value)
    return bool(mpmath.isint(real) and real <= 0)


def nonpositive_integer_value(value: Scalar) -> int | None:
    """Return M when ``value == -M`` for an integer M >= 0, else None."""
    if not is_nonpositive_integer(value):
        return None
    return -int(mpmath.re(value)) if not is_exact(value) else -int(value)


def pochhammer(c: Any, n: int) -> Any:
    """
    Rising factorial (c)_n = c (c+1) ... (c+n-1).

    Works for any ring element supporting ``+ int`` and ``*``: Fractions, mpmath
    numbers and Polynomials (for polynomial-valued symbols such as (-n)_j).

    Raises:
        DomainError: If ``n`` is negative.
    """
    if n < 0:
        raise DomainError(f"Pochhammer length must be nonnegative, got {n}")
    result = c - c + 1
    for i in range(n):
        result = result * (c + i)
    return result


def snap_rational(value: Scalar, max_denominator: int = 10**6) -> Fraction | None:
    """
    Best small-denominator rational approximation of a real mpmath value.

    Returns None for values with a non-negligible imaginary part. The caller is
    responsible for confirming exactness (e.g. by exact re-evaluation).
    """
    if isinstance(value, mpmath.mpc):
        if not is_zero(value.imag):
            return None
        value = value.real
    text = mpmath.nstr(value, max(mpmath.mp.dps, 20))
    return Fraction(text).limit_denominator(max_denominator)
