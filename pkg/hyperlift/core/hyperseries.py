"""
Generalized hypergeometric series with polynomial weights.

A WeightedSeries F[(α);(β) | Q(n) | x] has n-th coefficient
Π(α_i)_n / (n! Π(β_j)_n) · Q(n) · scale^n. Everything here works on truncated
formal power series, so exact identities reduce to comparing finitely many
rationals. Terminating sums at x = 1 and monitored numeric summation cover the
few places where a value rather than a series is needed.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import mpmath
from loguru import logger

from hyperlift.core.errors import ConvergenceError, DomainError
from hyperlift.core.exact import (
    Scalar,
    align,
    format_exact,
    is_close,
    is_exact,
    is_nonpositive_integer,
    nonpositive_integer_value,
    numeric_tolerance,
    snap_rational,
    to_approx,
)
from hyperlift.core.polynomial import Polynomial, poly_roots

type ParamArray = tuple[Scalar, ...]


def _canonical(value: Any) -> Any:
    return Fraction(value) if isinstance(value, int) else value


def as_params(values: Iterable[Scalar]) -> ParamArray:
    """Freeze an iterable of parameters, promoting ints to Fractions."""
    return tuple(_canonical(v) for v in values)


def same_parameters(left: Sequence[Scalar], right: Sequence[Scalar], tol: Any = None) -> bool:
    """Order-insensitive (multiset) equality of two parameter arrays."""
    if len(left) != len(right):
        return False
    remaining = list(right)
    for value in left:
        for index, candidate in enumerate(remaining):
            if is_close(value, candidate, tol):
                del remaining[index]
                break
        else:
            return False
    return True


def delta_array(m: int, mu: Scalar) -> ParamArray:
    """Return Δ(m; μ) = (μ/m, (μ+1)/m, ..., (μ+m-1)/m)."""
    if m < 1:
        raise DomainError(f"delta_array needs m >= 1, got {m}")
    mu = _canonical(mu)
    return tuple((mu + i) / m for i in range(m))


@dataclass(frozen=True)
class WeightedSeries:
    """
    Parameter arrays plus a weight polynomial Q(n) and an argument scale.

    The series variable is ``scale * x``. Q(0) = 1 is enforced unless
    ``normalized`` is False, which only P_k-weighted sums use.
    """

    upper: ParamArray
    lower: ParamArray = ()
    weight: Polynomial = field(default_factory=Polynomial.one)
    scale: Scalar = Fraction(1)
    normalized: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "upper", as_params(self.upper))
        object.__setattr__(self, "lower", as_params(self.lower))
        object.__setattr__(self, "scale", _canonical(self.scale))
        if self.weight.is_zero:
            raise DomainError("weight polynomial must not be identically zero")
        if self.normalized and not is_close(self.weight(0), 1):
            raise DomainError(
                f"weight is not normalized: Q(0) = {format_exact(self.weight(0))}, expected 1"
            )

    @property
    def is_exact(self) -> bool:
        values = (*self.upper, *self.lower, self.scale)
        return all(is_exact(v) for v in values) and self.weight.is_exact

    def describe(self) -> dict[str, Any]:
        """JSON-compatible description: upper, lower, weight, scale."""
        return {
            "upper": [format_exact(v) for v in self.upper],
            "lower": [format_exact(v) for v in self.lower],
            "weight": [format_exact(c) for c in self.weight.coefficients],
            "scale": format_exact(self.scale),
        }


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients c_0..c_N of a formal power series."""

    coefficients: tuple[Any, ...]

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise DomainError("a truncated series needs at least the constant coefficient")
        coeffs = align(*(_canonical(c) for c in self.coefficients))
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def constant(cls, value: Scalar, order: int) -> TruncatedSeries:
        return cls((value, *([Fraction(0)] * order)))

    @classmethod
    def variable(cls, order: int) -> TruncatedSeries:
        """The series x, truncated at ``order`` (order >= 1)."""
        return cls((Fraction(0), Fraction(1), *([Fraction(0)] * (order - 1))))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coefficients)

    def __getitem__(self, index: int) -> Scalar:
        return self.coefficients[index]

    def __len__(self) -> int:
        return len(self.coefficients)

    def truncate(self, order: int) -> TruncatedSeries:
        return TruncatedSeries(self.coefficients[: order + 1])

    def _aligned(self, other: TruncatedSeries) -> tuple[tuple[Any, ...], tuple[Any, ...], int]:
        order = min(self.order, other.order)
        left, right = self.coefficients[: order + 1], other.coefficients[: order + 1]
        if self.is_exact != other.is_exact:
            left = tuple(to_approx(c) for c in left)
            right = tuple(to_approx(c) for c in right)
        return left, right, order

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        left, right, order = self._aligned(other)
        return TruncatedSeries(tuple(left[i] + right[i] for i in range(order + 1)))

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        left, right, order = self._aligned(other)
        return TruncatedSeries(tuple(left[i] - right[i] for i in range(order + 1)))

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        left, right, order = self._aligned(other)
        product: list[Any] = []
        for i in range(order + 1):
            total: Any = 0
            for j in range(i + 1):
                if left[j] != 0 and right[i - j] != 0:
                    total = total + left[j] * right[i - j]
            product.append(total)
        return TruncatedSeries(tuple(product))

    def scale(self, factor: Scalar) -> TruncatedSeries:
        *coeffs, factor = align(*self.coefficients, factor)
        return TruncatedSeries(tuple(c * factor for c in coeffs))


def parametric_excess(s: WeightedSeries, *, count_weight: bool = True) -> Scalar:
    """
    S = Σ lower − Σ upper.

    A weight of degree ℓ stands for ℓ unit-difference pairs (1+ξ, ξ), each of
    which lowers S by one; ``count_weight`` includes that contribution.
    """
    values = align(*s.lower, *s.upper)
    split = len(s.lower)
    excess: Any = sum(values[:split], 0) - sum(values[split:], 0)
    if isinstance(excess, int):
        excess = Fraction(excess)
    if count_weight and s.weight.degree > 0:
        excess -= s.weight.degree
    return excess


def lower_poles(s: WeightedSeries) -> list[Scalar]:
    """Lower parameters that are nonpositive integers, whether or not they are reached."""
    return [b for b in s.lower if is_nonpositive_integer(b)]


def hypergeometric_terms(
    upper: Sequence[Scalar], lower: Sequence[Scalar], order: int, scale: Scalar = 1
) -> list[Any]:
    """
    Unweighted terms Π(α)_n / (n! Π(β)_n) · scale^n for n = 0..order.

    Termination takes precedence: once an upper parameter −M has been passed the
    remaining terms are zero, even if a lower parameter would hit a pole later.

    Raises:
        DomainError: If a lower parameter reaches a pole before termination.
    """
    if order < 0:
        raise DomainError(f"order must be nonnegative, got {order}")
    *params, scale = align(*upper, *lower, scale)
    upper, lower = params[: len(upper)], params[len(upper) :]
    one: Any = Fraction(1) if is_exact(scale) else mpmath.mpf(1)
    terms: list[Any] = []
    term: Any = one
    terminated = False
    for n in range(order + 1):
        terms.append(one * 0 if terminated else term)
        if terminated or n == order:
            continue
        if any(a + n == 0 for a in upper):
            terminated = True
            continue
        for b in lower:
            if b + n == 0:
                raise DomainError(
                    f"lower parameter {format_exact(b)} reaches a pole at n = {n + 1}"
                )
        numerator: Any = one
        for a in upper:
            numerator = numerator * (a + n)
        denominator: Any = one * (n + 1)
        for b in lower:
            denominator = denominator * (b + n)
        term = term * numerator / denominator * scale
    return terms


def series_coefficients(s: WeightedSeries, order: int) -> TruncatedSeries:
    """Exact (or numeric) coefficients c_0..c_order of a weighted series."""
    terms = hypergeometric_terms(s.upper, s.lower, order, s.scale)
    weight = s.weight
    if not s.is_exact:
        terms = [to_approx(t) for t in terms]
        weight = weight.numeric()
    if weight.degree == 0 and weight.coefficients[0] == 1:
        return TruncatedSeries(tuple(terms))
    return TruncatedSeries(tuple(t * weight(n) if t != 0 else t for n, t in enumerate(terms)))


def terminating_length(s: WeightedSeries) -> int:
    """Smallest M such that −M is an upper parameter."""
    sizes = [m for m in (nonpositive_integer_value(a) for a in s.upper) if m is not None]
    if not sizes:
        raise DomainError("series does not terminate: no nonpositive-integer upper parameter")
    return min(sizes)


def terminating_sum(s: WeightedSeries) -> Scalar:
    """Exact finite sum of a terminating series at x = 1 (times the scale)."""
    length = terminating_length(s)
    coefficients = series_coefficients(s, length).coefficients
    return sum(coefficients[1:], coefficients[0])


def apply_contiguity(t: TruncatedSeries, e: Scalar) -> TruncatedSeries:
    """Apply 1 + θ/e, i.e. c_n ↦ (1 + n/e) c_n; raises an upper parameter e to e+1."""
    if is_exact(e) and e == 0:
        raise DomainError("contiguity parameter e must be nonzero")
    *coefficients, e = align(*t.coefficients, _canonical(e))
    return TruncatedSeries(tuple(c * (e + n) / e for n, c in enumerate(coefficients)))


def _exact_negated_root(weight: Polynomial, xi: Any) -> Scalar:
    if not weight.is_exact:
        return xi
    candidate = snap_rational(xi)
    if candidate is not None and weight(-candidate) == 0:
        return candidate
    return xi


def explicit_pair_form(s: WeightedSeries, precision_bits: int) -> WeightedSeries:
    """
    Trade the weight for ℓ = deg Q unit-difference pairs (1+ξ_i; ξ_i).

    Negated roots that are rational are recovered exactly; the others are mpmath
    numbers at ``precision_bits``.

    Raises:
        DomainError: If Q(0) != 1 or some ξ_i is a nonpositive integer.
    """
    if s.weight.degree <= 0:
        if not is_close(s.weight(0), 1):
            raise DomainError("explicit_pair_form needs Q(0) = 1")
        return s
    if not is_close(s.weight(0), 1):
        raise DomainError("explicit_pair_form needs Q(0) = 1")
    roots = poly_roots(s.weight, precision_bits)
    with mpmath.workprec(precision_bits):
        xis = [_exact_negated_root(s.weight, -r) for r in roots]
        tol = numeric_tolerance()
        for xi in xis:
            if is_exact(xi):
                pole = is_nonpositive_integer(xi)
            else:
                nearest = mpmath.nint(mpmath.re(xi))
                pole = nearest <= 0 and abs(xi - nearest) <= tol
            if pole:
                raise DomainError(f"negated root {format_exact(xi)} is a pole")
        return WeightedSeries(
            upper=(*s.upper, *(1 + xi for xi in xis)),
            lower=(*s.lower, *xis),
            scale=s.scale,
        )


def _find(values: Sequence[Scalar], target: Scalar, skip: int = -1) -> int:
    for index, value in enumerate(values):
        if index != skip and is_close(value, target):
            return index
    return -1


def merge_unit_pairs(s: WeightedSeries) -> tuple[WeightedSeries, bool]:
    """
    Merge pairs (1+ξ; ξ) and (2+ξ; 1+ξ) into the single pair (2+ξ; ξ).

    Repeats until no mergeable pairs remain.

    Returns:
        The reduced series and a flag telling whether anything was merged.
    """
    if s.weight.degree > 0:
        raise DomainError("merge_unit_pairs expects a series in explicit-pair form")
    upper, lower = list(s.upper), list(s.lower)
    merged = False
    changed = True
    while changed:
        changed = False
        for j1, xi in enumerate(lower):
            i1 = _find(upper, xi + 1)
            j2 = _find(lower, xi + 1, skip=j1)
            i2 = _find(upper, xi + 2, skip=i1)
            if min(i1, j2, i2) < 0:
                continue
            del upper[i1]
            del lower[j2]
            merged = changed = True
            break
    if merged:
        logger.debug("merge_unit_pairs: reduced to {} upper parameters", len(upper))
    return WeightedSeries(tuple(upper), tuple(lower), scale=s.scale), merged


def cancel_common_pairs(s: WeightedSeries, tol: Any = None) -> WeightedSeries:
    """
    Drop parameters that occur in both arrays.

    Nonpositive integer upper parameters stay, since they truncate the series.
    """
    upper, lower = list(s.upper), list(s.lower)
    for value in list(upper):
        if is_nonpositive_integer(value):
            continue
        match = next((j for j, low in enumerate(lower) if is_close(value, low, tol)), -1)
        if match >= 0:
            upper.remove(value)
            del lower[match]
    return WeightedSeries(tuple(upper), tuple(lower), s.weight, s.scale, s.normalized)


def _accelerated_sum(
    upper: Sequence[Any], lower: Sequence[Any], weight: Polynomial, argument: Any,
    max_terms: int, tail_tol: Any,
) -> Any:
    def term(n: Any) -> Any:
        index = int(n)
        numerator = mpmath.fprod(mpmath.rf(a, index) for a in upper)
        denominator = mpmath.factorial(index) * mpmath.fprod(mpmath.rf(b, index) for b in lower)
        return numerator / denominator * argument**index * to_approx(weight(index))

    try:
        return mpmath.nsum(
            term, [0, mpmath.inf], method="r+s+a", tol=tail_tol, maxterms=max_terms, strict=True
        )
    except mpmath.mp.NoConvergence as exc:
        raise ConvergenceError(f"accelerated summation did not converge: {exc}", None) from exc


def eval_numeric(
    s: WeightedSeries, x: Scalar, max_terms: int, tail_tol: Any, *, accelerate: bool = False
) -> Any:
    """
    Sum the series at ``x`` numerically in the current mpmath context.

    A terminating series is summed exactly to its last term. Otherwise summation
    stops once three consecutive terms are below tail_tol·(|partial| + 1); with
    ``accelerate`` a nonterminating series is handed to mpmath's extrapolating
    summation instead (Richardson, Shanks and the alternating-series transform),
    which is what slowly decaying alternating series at x = −1 need.

    Raises:
        ConvergenceError: If the tail criterion is not met within ``max_terms``.
    """
    upper = [to_approx(a) for a in s.upper]
    lower = [to_approx(b) for b in s.lower]
    argument = to_approx(x) * to_approx(s.scale)
    if accelerate and not any(is_nonpositive_integer(a) for a in s.upper):
        if any(is_nonpositive_integer(b) for b in s.lower):
            raise DomainError("a lower parameter is a nonpositive integer")
        return _accelerated_sum(upper, lower, s.weight.numeric(), argument, max_terms, tail_tol)
    partial = mpmath.mpf(0)
    term = mpmath.mpf(1)
    small_run = 0
    for n in range(max_terms):
        value = term * to_approx(s.weight(n))
        partial += value
        if abs(value) < tail_tol * (abs(partial) + 1):
            small_run += 1
            if small_run >= 3:
                return partial
        else:
            small_run = 0
        if any(a + n == 0 for a in upper):
            return partial
        for b in lower:
            if b + n == 0:
                raise DomainError(f"lower parameter {format_exact(b)} reaches a pole")
        numerator = mpmath.fprod(a + n for a in upper)
        denominator = (n + 1) * mpmath.fprod(b + n for b in lower)
        term = term * numerator / denominator * argument
    raise ConvergenceError(
        f"series did not converge within {max_terms} terms at x = {format_exact(x)}", partial
    )
