"""
Univariate polynomials in the summation index n.

Coefficients are stored constant term first and are Fractions in exact mode
(mpmath numbers in numeric mode). Trailing zeros are stripped on construction,
so the zero polynomial is the empty tuple and ``degree`` is -1 for it.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal

import mpmath
from loguru import logger

from hyperlift.core.errors import ConsistencyError, ConvergenceError, DomainError
from hyperlift.core.exact import (
    Scalar,
    align,
    check_precision,
    format_exact,
    is_exact,
    is_zero,
    to_approx,
)

type PolyOp = Literal["add", "sub", "mul", "scale", "compose_affine"]

_SCALAR_TYPES = (int, Fraction, mpmath.mpf, mpmath.mpc)


def _canonical(value: Any) -> Any:
    return Fraction(value) if isinstance(value, int) else value


@dataclass(frozen=True)
class Polynomial:
    """An immutable polynomial in n, coefficients constant term first."""

    coefficients: tuple[Any, ...] = ()

    def __post_init__(self) -> None:
        coeffs = list(align(*(_canonical(c) for c in self.coefficients)))
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    # ── constructors ──────────────────────────────────────────────────────

    @classmethod
    def zero(cls) -> Polynomial:
        return cls(())

    @classmethod
    def one(cls) -> Polynomial:
        return cls((Fraction(1),))

    @classmethod
    def constant(cls, value: Scalar) -> Polynomial:
        return cls((value,))

    @classmethod
    def variable(cls) -> Polynomial:
        """The polynomial ``n``."""
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar], leading: Scalar = 1) -> Polynomial:
        """Build ``leading * prod(n - r)``."""
        n = cls.variable()
        result = cls.constant(leading)
        for root in roots:
            result = result * (n - root)
        return result

    # ── properties ────────────────────────────────────────────────────────

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> Scalar:
        if self.is_zero:
            raise DomainError("the zero polynomial has no leading coefficient")
        return self.coefficients[-1]

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coefficients)

    def coefficient(self, index: int) -> Scalar:
        """Coefficient of n**index (zero beyond the degree)."""
        if 0 <= index < len(self.coefficients):
            return self.coefficients[index]
        return Fraction(0) if self.is_exact else mpmath.mpf(0)

    def numeric(self) -> Polynomial:
        """The same polynomial with mpmath coefficients at the working precision."""
        if not self.is_exact:
            return self
        return Polynomial(tuple(to_approx(c) for c in self.coefficients))

    def is_negligible(self, tol: Any = None) -> bool:
        """Exactly zero, or every coefficient within ``tol`` of zero in numeric mode."""
        return all(is_zero(c, tol) for c in self.coefficients)

    # ── arithmetic ────────────────────────────────────────────────────────

    def _pair(self, other: object) -> tuple[Polynomial, Polynomial] | None:
        """Both operands as Polynomials in a common (exact or numeric) mode."""
        if isinstance(other, Polynomial):
            rhs = other
        elif isinstance(other, _SCALAR_TYPES):
            rhs = Polynomial((other,))
        else:
            return None
        if self.is_exact == rhs.is_exact:
            return self, rhs
        return self.numeric(), rhs.numeric()

    def __add__(self, other: object) -> Polynomial:
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        lhs, rhs = pair
        size = max(len(lhs.coefficients), len(rhs.coefficients))
        return Polynomial(tuple(lhs.coefficient(i) + rhs.coefficient(i) for i in range(size)))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: object) -> Polynomial:
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[0] + (-pair[1])

    def __rsub__(self, other: object) -> Polynomial:
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[1] + (-pair[0])

    def __mul__(self, other: object) -> Polynomial:
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        lhs, rhs = pair
        if lhs.is_zero or rhs.is_zero:
            return Polynomial.zero()
        product: list[Any] = [0] * (lhs.degree + rhs.degree + 1)
        for i, x in enumerate(lhs.coefficients):
            for j, y in enumerate(rhs.coefficients):
                product[i + j] = product[i + j] + x * y
        return Polynomial(tuple(product))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> Polynomial:
        if not isinstance(other, _SCALAR_TYPES):
            return NotImplemented
        divisor = _canonical(other)
        if is_exact(divisor) and divisor == 0:
            raise DomainError("polynomial divided by zero")
        return self.scale(Fraction(1) / divisor if is_exact(divisor) else 1 / divisor)

    def __divmod__(self, divisor: Polynomial) -> tuple[Polynomial, Polynomial]:
        """Euclidean division; the remainder has degree below the divisor's."""
        if divisor.is_zero:
            raise DomainError("division by the zero polynomial")
        dividend, divisor = self._pair(divisor) or (self, divisor)
        remainder = list(dividend.coefficients)
        shift = divisor.degree
        lead = divisor.leading
        quotient: list[Any] = [0] * max(len(remainder) - shift, 0)
        for i in range(len(remainder) - 1 - shift, -1, -1):
            factor = remainder[i + shift] / lead
            quotient[i] = factor
            for j, dc in enumerate(divisor.coefficients):
                remainder[i + j] = remainder[i + j] - factor * dc
        return Polynomial(tuple(quotient)), Polynomial(tuple(remainder[:shift]))

    def scale(self, factor: Scalar) -> Polynomial:
        coeffs = align(*self.coefficients, factor)
        return Polynomial(tuple(c * coeffs[-1] for c in coeffs[:-1]))

    def __call__(self, value: Any) -> Any:
        """Horner evaluation; a Polynomial argument yields the composition."""
        if self.is_zero:
            return value * 0
        coeffs: list[Any] = list(self.coefficients)
        if not isinstance(value, Polynomial):
            *coeffs, value = align(*coeffs, value)
        acc: Any = coeffs[-1]
        for c in reversed(coeffs[:-1]):
            acc = acc * value + c
        if isinstance(value, Polynomial) and not isinstance(acc, Polynomial):
            return Polynomial.constant(acc)
        return acc

    def compose_affine(self, s: Scalar, t: Scalar) -> Polynomial:
        """Return p(s*n + t)."""
        composed = self(Polynomial((t, s)))
        return composed if isinstance(composed, Polynomial) else Polynomial.constant(composed)

    def shift(self, t: Scalar) -> Polynomial:
        """Return p(n + t)."""
        return self.compose_affine(1, t)

    def forward_difference(self) -> Polynomial:
        """Return p(n+1) - p(n)."""
        return self.shift(1) - self

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts: list[str] = []
        for power in range(self.degree, -1, -1):
            coeff = self.coefficients[power]
            if coeff == 0:
                continue
            negative = bool(mpmath.re(coeff) < 0) if not is_exact(coeff) else coeff < 0
            magnitude = -coeff if negative else coeff
            parts.append(("-" if negative else "+") + _monomial(magnitude, power))
        text = " ".join(f"{p[0]} {p[1:]}" for p in parts)
        if text.startswith("+ "):
            return text[2:]
        return "-" + text[2:]


def _monomial(magnitude: Scalar, power: int) -> str:
    variable = "" if power == 0 else ("n" if power == 1 else f"n^{power}")
    if power == 0:
        return format_exact(magnitude, 20)
    if magnitude == 1:
        return variable
    text = format_exact(magnitude, 20)
    if isinstance(magnitude, Fraction) and magnitude.denominator == 1:
        return f"{text}{variable}"
    return f"({text}){variable}"


def poly_arith(op: PolyOp, p: Polynomial, *operands: Any) -> Polynomial:
    """
    Dispatch one polynomial operation by name.

    ``add``/``sub``/``mul`` take one Polynomial operand, ``scale`` one scalar and
    ``compose_affine`` the pair (s, t), returning p(s*n + t).

    Raises:
        DomainError: On an unknown operation or a wrong number of operands.
    """
    arity = {"add": 1, "sub": 1, "mul": 1, "scale": 1, "compose_affine": 2}
    if op not in arity:
        raise DomainError(f"unknown polynomial operation '{op}'")
    if len(operands) != arity[op]:
        raise DomainError(f"'{op}' takes {arity[op]} operand(s), got {len(operands)}")
    match op:
        case "add":
            return p + operands[0]
        case "sub":
            return p - operands[0]
        case "mul":
            return p * operands[0]
        case "scale":
            return p.scale(operands[0])
        case _:
            return p.compose_affine(operands[0], operands[1])


def poly_eval(p: Polynomial, value: Scalar) -> Scalar:
    """Exact (or numeric) evaluation p(value)."""
    if p.is_zero:
        return Fraction(0) if is_exact(value) else to_approx(0)
    return p(value)


def poly_roots(p: Polynomial, precision_bits: int) -> list[Any]:
    """
    All complex roots of ``p`` with multiplicity, as mpmath numbers.

    Uses mpmath's simultaneous (Durand-Kerner) iteration at twice the requested
    precision, so that roots of multiplicity two still come out accurate to
    ``precision_bits``. Roots are ordered by (|imag|, real) as mpmath returns them.

    Raises:
        DomainError: For the zero polynomial or a precision below the minimum.
        ConvergenceError: If the iteration does not converge.
        ConsistencyError: If a returned root fails the residual check.
    """
    check_precision(precision_bits)
    if p.is_zero:
        raise DomainError("poly_roots: the zero polynomial has no finite root set")
    if p.degree == 0:
        return []
    with mpmath.workprec(precision_bits):
        coeffs = [to_approx(c) for c in reversed(p.coefficients)]
        try:
            roots = mpmath.polyroots(
                coeffs,
                maxsteps=max(200, 4 * precision_bits),
                extraprec=2 * precision_bits,
                cleanup=True,
            )
        except mpmath.mp.NoConvergence as exc:
            raise ConvergenceError(f"poly_roots did not converge: {exc}", None) from exc
        lead = coeffs[0]
        bound = mpmath.mpf(2) ** (-(precision_bits // 2))
        for root in roots:
            residual = abs(mpmath.polyval(coeffs, root) / lead)
            if residual >= bound:
                raise ConsistencyError(f"root {root} has residual {residual}")
    logger.debug("poly_roots: degree {} at {} bits", p.degree, precision_bits)
    return list(roots)
