"""
The polynomial weight families.

Q_k^(2), Q_k^(3), Q_k^(3') (three- and four-parameter) come from their
terminating hypergeometric representations; the bold families of degree 1+4k
come from k-raising recurrences started at their k = 0 seeds; P_k comes from a
terminating 2F1 at −1. Every recurrence step is an exact polynomial division,
and a nonzero remainder is reported as a ConsistencyError.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Any, Literal

import mpmath
from loguru import logger

from hyperlift.core.errors import ConsistencyError, DomainError
from hyperlift.core.exact import (
    Scalar,
    align,
    format_exact,
    is_close,
    is_zero,
    pochhammer,
    to_approx,
)
from hyperlift.core.hyperseries import ParamArray, as_params
from hyperlift.core.lifting import CUBIC, CUBIC_SECOND, QUADRATIC, LiftingMap
from hyperlift.core.polynomial import Polynomial, poly_roots
from hyperlift.core.reporting import numeric_threshold

type QTag = Literal["Q2", "Q3", "Q3p"]
type BoldTag = Literal["BQ2", "BQ3", "BQ3p"]

Q_TAGS: tuple[QTag, ...] = ("Q2", "Q3", "Q3p")
BOLD_TAGS: tuple[BoldTag, ...] = ("BQ2", "BQ3", "BQ3p")

LIFTINGS: dict[str, LiftingMap] = {"Q2": QUADRATIC, "Q3": CUBIC, "Q3p": CUBIC_SECOND}
_BASE_TAG: dict[str, QTag] = {"BQ2": "Q2", "BQ3": "Q3", "BQ3p": "Q3p"}


def _canonical(value: Any) -> Any:
    return Fraction(value) if isinstance(value, int) else value


def _nonzero(value: Scalar, label: str) -> Scalar:
    if is_zero(value):
        raise DomainError(f"singular parameters: {label} vanishes")
    return value


def _product(*values: Scalar) -> Scalar:
    result: Any = 1
    for value in align(*values):
        result = result * value
    return result


def _rhs_gamma(tag: QTag, k: int, a: Scalar, b: Scalar, c: Scalar | None) -> ParamArray:
    match tag:
        case "Q2":
            return as_params((b, c))
        case "Q3":
            return as_params(((1 - 2 * k - 2 * b) / 2, (1 - 2 * k + 2 * b) / 2))
        case _:
            return as_params(((1 - 2 * k + 2 * a - 2 * b) / 4, (1 - 2 * k + 2 * a + 2 * b) / 4))


def _rhs_delta(tag: QTag, k: int, a: Scalar, b: Scalar, c: Scalar | None) -> ParamArray:
    match tag:
        case "Q2":
            assert c is not None
            return as_params((1 + a - b, 1 + a - c))
        case "Q3":
            return as_params(((3 + 2 * k + 2 * a + 2 * b) / 4, (3 + 2 * k + 2 * a - 2 * b) / 4))
        case _:
            return as_params(((1 + 2 * k + 2 * a + 2 * b) / 2, (1 + 2 * k + 2 * a - 2 * b) / 2))


@dataclass(frozen=True)
class QFamily:
    """
    One member Q_k(n; a; b[, c][; d]) of a Q family.

    ``c`` belongs to Q2 only; ``d`` selects the four-parameter variant.
    """

    tag: QTag
    k: int
    a: Scalar
    b: Scalar
    c: Scalar | None = None
    d: Scalar | None = None

    def __post_init__(self) -> None:
        if self.tag not in LIFTINGS:
            raise DomainError(f"unknown Q family '{self.tag}'")
        if self.k < 0:
            raise DomainError(f"k must be nonnegative, got {self.k}")
        if (self.tag == "Q2") != (self.c is not None):
            raise DomainError(f"{self.tag} takes {'a, b, c' if self.tag == 'Q2' else 'a, b'}")
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, _canonical(getattr(self, name)))

    @property
    def four_param(self) -> bool:
        return self.d is not None

    @property
    def lifting(self) -> LiftingMap:
        return LIFTINGS[self.tag]

    @property
    def degree(self) -> int:
        return 3 * self.k if self.four_param and self.tag != "Q2" else 2 * self.k

    def rhs_gamma(self) -> ParamArray:
        """The upper parameters (γ) that accompany a on the right-hand side."""
        return _rhs_gamma(self.tag, self.k, self.a, self.b, self.c)

    def rhs_delta(self) -> ParamArray:
        """The lower parameters (δ) of the right-hand side."""
        return _rhs_delta(self.tag, self.k, self.a, self.b, self.c)

    def shifted(self) -> QFamily:
        """Q_{k-1,+}: k decremented, a (and b, c for Q2, and d) incremented."""
        if self.k == 0:
            raise DomainError("cannot lower k below 0")
        quadratic = self.tag == "Q2"
        return QFamily(
            tag=self.tag,
            k=self.k - 1,
            a=self.a + 1,
            b=self.b + 1 if quadratic else self.b,
            c=self.c + 1 if self.c is not None else None,
            d=self.d + 1 if self.d is not None else None,
        )

    def params(self) -> dict[str, Scalar]:
        values = {"a": self.a, "b": self.b, "c": self.c, "d": self.d}
        return {name: value for name, value in values.items() if value is not None}

    def describe(self) -> str:
        assigned = " ".join(f"{name}={format_exact(v)}" for name, v in self.params().items())
        return f"{self.tag} k={self.k} {assigned}"


@dataclass(frozen=True)
class BoldQFamily:
    """One member of a bold family (degree 1 + 4k), BQ2 also parameterizing hat Q."""

    tag: BoldTag
    k: int
    a: Scalar
    b: Scalar
    c: Scalar | None = None

    def __post_init__(self) -> None:
        if self.tag not in _BASE_TAG:
            raise DomainError(f"unknown bold family '{self.tag}'")
        if self.k < 0:
            raise DomainError(f"k must be nonnegative, got {self.k}")
        if (self.tag == "BQ2") != (self.c is not None):
            raise DomainError(f"{self.tag} takes {'a, b, c' if self.tag == 'BQ2' else 'a, b'}")
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, _canonical(getattr(self, name)))

    @property
    def base_tag(self) -> QTag:
        return _BASE_TAG[self.tag]

    @property
    def lifting(self) -> LiftingMap:
        return LIFTINGS[self.base_tag]

    @property
    def degree(self) -> int:
        return 1 + 4 * self.k

    def rhs_gamma(self) -> ParamArray:
        return _rhs_gamma(self.base_tag, self.k, self.a, self.b, self.c)

    def rhs_delta(self) -> ParamArray:
        return _rhs_delta(self.base_tag, self.k, self.a, self.b, self.c)

    def shifted(self) -> BoldQFamily:
        if self.k == 0:
            raise DomainError("cannot lower k below 0")
        quadratic = self.tag == "BQ2"
        return BoldQFamily(
            tag=self.tag,
            k=self.k - 1,
            a=self.a + 1,
            b=self.b + 1 if quadratic else self.b,
            c=self.c + 1 if self.c is not None else None,
        )

    def params(self) -> dict[str, Scalar]:
        values = {"a": self.a, "b": self.b, "c": self.c}
        return {name: value for name, value in values.items() if value is not None}


# ── Q families from their hypergeometric representations ────────────────


def _q2(f: QFamily) -> Polynomial:
    n = Polynomial.variable()
    assert f.c is not None
    total = Polynomial.zero()
    for j in range(f.k + 1):
        weight = _product(
            Fraction(pochhammer(-f.k, j), factorial(j)),
            1 / _nonzero(pochhammer(f.b, j), f"(b)_{j}"),
            1 / _nonzero(pochhammer(f.c, j), f"(c)_{j}"),
        )
        term = pochhammer(-n, j) * pochhammer(n + f.a, j)
        if f.d is not None:
            extra = pochhammer(f.k - 1 - f.a + f.b + f.c + f.d, j)
            weight = _product(weight, extra, 1 / _nonzero(pochhammer(f.d, j), f"(d)_{j}"))
        total = total + term.scale(weight)
    return total


def _q3(f: QFamily) -> Polynomial:
    k, a, b = f.k, f.a, f.b
    n = Polynomial.variable()
    half_n = n.scale(Fraction(1, 2))
    low_plus = (1 - 2 * k + 2 * b) / 4 - half_n
    low_minus = (1 - 2 * k - 2 * b) / 4 - half_n
    prefactor = 4**k / _product(
        _nonzero(pochhammer((1 + 2 * b) / 2, k), f"(1/2+b)_{k}"),
        _nonzero(pochhammer((1 - 2 * b) / 2, k), f"(1/2-b)_{k}"),
    )
    total = Polynomial.zero()
    for j in range(k + 1):
        term = (
            pochhammer(-n, j)
            * pochhammer(half_n + a / 2, j)
            * pochhammer(low_plus + j, k - j)
            * pochhammer(low_minus + j, k - j)
        )
        weight: Any = Fraction(pochhammer(-k, j), factorial(j))
        if f.d is not None:
            term = term * pochhammer(f.d - (a + 1) / 2 - half_n, j)
            weight = _product(weight, 1 / _nonzero(pochhammer(f.d, j), f"(d)_{j}"))
        total = total + term.scale(weight)
    return total.scale(prefactor)


def _q3p(f: QFamily) -> Polynomial:
    k, a, b = f.k, f.a, f.b
    n = Polynomial.variable()
    half_n = n.scale(Fraction(1, 2))
    c_plus = (3 - 2 * k - 2 * a + 2 * b) / 4
    c_minus = (3 - 2 * k - 2 * a - 2 * b) / 4
    prefactor = 1 / _product(
        _nonzero(pochhammer(c_plus, k), f"({format_exact(c_plus)})_{k}"),
        _nonzero(pochhammer(c_minus, k), f"({format_exact(c_minus)})_{k}"),
    )
    total = Polynomial.zero()
    for j in range(k + 1):
        term = (
            pochhammer(-half_n, j)
            * pochhammer(Fraction(1, 2) - half_n, j)
            * pochhammer(c_plus - n + j, k - j)
            * pochhammer(c_minus - n + j, k - j)
        )
        weight: Any = Fraction(pochhammer(-k, j), factorial(j))
        if f.d is not None:
            term = term * pochhammer(f.d - a - n, j)
            weight = _product(weight, 1 / _nonzero(pochhammer(f.d, j), f"(d)_{j}"))
        total = total + term.scale(weight)
    return total.scale(prefactor)


def q_poly(f: QFamily) -> Polynomial:
    """
    Build Q_k by direct summation of its terminating representation.

    Raises:
        DomainError: If a Pochhammer denominator of the representation vanishes.
        ConsistencyError: If the result is not normalized to Q(0) = 1.
    """
    match f.tag:
        case "Q2":
            q = _q2(f)
        case "Q3":
            q = _q3(f)
        case _:
            q = _q3p(f)
    if not is_close(q(0), 1):
        raise ConsistencyError(f"{f.describe()}: Q(0) = {format_exact(q(0))}, expected 1")
    logger.debug("q_poly {} -> degree {}", f.describe(), q.degree)
    return q


# ── raising and lowering ───────────────────────────────────────────────


def _exact_quotient(numerator: Polynomial, denominator: Polynomial, what: str) -> Polynomial:
    quotient, remainder = divmod(numerator, denominator)
    if not remainder.is_negligible():
        logger.warning("{}: nonzero remainder {}", what, remainder)
        raise ConsistencyError(f"{what}: division leaves remainder {remainder}")
    return quotient


def _shifted_products(values: Sequence[Scalar], offset: int) -> Polynomial:
    """Π (n + offset + v) over ``values``."""
    n = Polynomial.variable()
    result = Polynomial.one()
    for value in values:
        result = result * (n + offset + value)
    return result


def master_raise(f: QFamily, q_prev: Polynomial) -> Polynomial:
    """
    Apply the master k-raising relation to Q_{k-1,+} and return Q_k.

    K·a·Πγ·Q_k(n) = A0·(n+a)Π(n+γ)·Q_{k-1,+}(n) + A1·n·Π(n−1+δ)·Q_{k-1,+}(n−1),
    with K = (n+r)/r, r = la/(l+m), and (A0, A1) = (1, m/(l x0)) for three
    parameters or ((n+ld)/(ld), −(n+a−md)/(l x0 d)) for four.

    Raises:
        DomainError: If f.k == 0 or the left-hand coefficient vanishes.
        ConsistencyError: If the division is not exact.
    """
    if f.k < 1:
        raise DomainError("master_raise needs k >= 1")
    lifting = f.lifting
    l, m, x0 = lifting.l, lifting.m, lifting.x0  # noqa: E741
    n = Polynomial.variable()
    root = _nonzero(lifting.raising_root(f.a), "la/(l+m)")
    gamma, delta = f.rhs_gamma(), f.rhs_delta()
    constant = _nonzero(_product(f.a, *gamma), "a·Πγ")
    if f.d is None:
        a0: Polynomial | Scalar = Fraction(1)
        a1: Polynomial | Scalar = Fraction(m) / (l * x0)
    else:
        ld = _nonzero(l * f.d, "d")
        a0 = (n + ld) / ld
        a1 = -(n + f.a - m * f.d) / _product(l, x0, f.d)
    lhs = (n + root).scale(_product(constant, 1 / root))
    rhs = a0 * _shifted_products((f.a, *gamma), 0) * q_prev + a1 * n * _shifted_products(
        delta, -1
    ) * q_prev.shift(-1)
    return _exact_quotient(rhs, lhs, f"master_raise {f.describe()}")


def _chain[F: (QFamily, BoldQFamily)](f: F) -> list[F]:
    """[f, f_{k-1,+}, ..., f at k = 0] with the parameter shifts applied."""
    chain = [f]
    while chain[-1].k > 0:
        chain.append(chain[-1].shifted())
    return chain


def raise_chain(f: QFamily) -> Polynomial:
    """Q_k built from Q_0 ≡ 1 by k applications of master_raise."""
    q = Polynomial.one()
    for level in reversed(_chain(f)[:-1]):
        q = master_raise(level, q)
    return q


def lower_q2(f: QFamily, q_k: Polynomial) -> Polynomial:
    """
    The k-lowering relation: bc·Δ_n Q_k / Δ_n λ with λ = n(n+a).

    The result equals k·Q_{k-1,+}.

    Raises:
        DomainError: For anything but the three-parameter Q2 family at k >= 1.
        ConsistencyError: If 2n + a + 1 does not divide bc·Δ_n Q_k.
    """
    if f.tag != "Q2" or f.four_param:
        raise DomainError("lower_q2 applies to the three-parameter Q2 family only")
    if f.k < 1:
        raise DomainError("lower_q2 needs k >= 1")
    assert f.c is not None
    n = Polynomial.variable()
    difference = q_k.forward_difference().scale(_product(f.b, f.c))
    return _exact_quotient(difference, n.scale(2) + (f.a + 1), f"lower_q2 {f.describe()}")


# ── bold and hat families ──────────────────────────────────────────────


def bold_seed(f: BoldQFamily) -> Polynomial:
    """The k = 0 member 1 + (l+m)n/(la): 1 + 2n/a, 1 + 3n/a, 1 + 3n/(2a)."""
    lifting = f.lifting
    slope = (lifting.l + lifting.m) / _product(lifting.l, _nonzero(f.a, "a"))
    return Polynomial((Fraction(1), slope))


def bold_master_raise(f: BoldQFamily, q_prev: Polynomial) -> Polynomial:
    """
    The bold master k-raising relation.

    l·a·Πγ·Q_k = A0·(n+a)Π(n+γ)·Q_{k-1,+}(n) + A1·n·Π(n−1+δ)·Q_{k-1,+}(n−1), with
    A0 = ((l+m)n + 2lk + la)/(2k+a), A1 = (m/(l x0))((l+m)n − 2mk + la)/(2k+a).
    """
    if f.k < 1:
        raise DomainError("bold_master_raise needs k >= 1")
    lifting = f.lifting
    l, m, x0 = lifting.l, lifting.m, lifting.x0  # noqa: E741
    k, a = f.k, f.a
    n = Polynomial.variable()
    scale = 1 / _nonzero(2 * k + a, "2k+a")
    gamma, delta = f.rhs_gamma(), f.rhs_delta()
    constant = _nonzero(_product(l, a, *gamma), "l·a·Πγ")
    a0 = (n.scale(l + m) + (2 * l * k + l * a)).scale(scale)
    a1 = (n.scale(l + m) + (l * a - 2 * m * k)).scale(_product(Fraction(m) / (l * x0), scale))
    rhs = a0 * _shifted_products((a, *gamma), 0) * q_prev + a1 * n * _shifted_products(
        delta, -1
    ) * q_prev.shift(-1)
    q = rhs.scale(1 / constant)
    if q.degree != f.degree:
        raise ConsistencyError(f"{f.tag} k={k}: degree {q.degree}, expected {f.degree}")
    return q


def bold_q_master(f: BoldQFamily) -> Polynomial:
    """Bold Q_k from its seed through the generic bold master relation."""
    q = bold_seed(_chain(f)[-1])
    for level in reversed(_chain(f)[:-1]):
        q = bold_master_raise(level, q)
    return q


def _hat_raise(f: BoldQFamily, hat_prev: Polynomial) -> Polynomial:
    k, a, b, c = f.k, f.a, f.b, f.c
    assert c is not None
    n = Polynomial.variable()
    half_a = a / 2
    constant = _nonzero(_product(k + half_a, 1 + a, b, c), "(k+a/2)(1+a)bc")
    lhs = (n + half_a).scale(constant)
    up = (n + (k + half_a)) * (n + a) * (n + b) * (n + c) * (n + (1 + a) / 2)
    down = (n + (half_a - k)) * n * (n + (a - b)) * (n + (a - c)) * (n + (a - 1) / 2)
    rhs = up * hat_prev + down * hat_prev.shift(-1)
    return _exact_quotient(rhs, lhs, f"hat raise BQ2 k={k}")


def hat_q2(f: BoldQFamily) -> Polynomial:
    """Hat Q_k^(2)(n; a; b, c), degree 4k, from hat Q_0 ≡ 1."""
    if f.tag != "BQ2":
        raise DomainError("hat_q2 is defined for the BQ2 family only")
    q = Polynomial.one()
    for level in reversed(_chain(f)[:-1]):
        q = _hat_raise(level, q)
    return q


def bold_q(f: BoldQFamily) -> Polynomial:
    """
    Bold Q_k, degree 1 + 4k.

    BQ2 is (1 + 2n/a) times hat Q_k^(2); BQ3 and BQ3p iterate the bold raising
    relation from 1 + 3n/a and 1 + 3n/(2a).

    Raises:
        DomainError: If a = 0, a = −2k or a raising coefficient vanishes.
        ConsistencyError: If a raising step is not an exact division.
    """
    if is_zero(2 * f.k + f.a):
        raise DomainError("singular parameters: a = -2k")
    q = bold_seed(f) * hat_q2(f) if f.tag == "BQ2" else bold_q_master(f)
    logger.debug("bold_q {} k={} -> degree {}", f.tag, f.k, q.degree)
    return q


def hat_q2_special(k: int, a: Scalar, b: Scalar, precision_bits: int) -> Polynomial:
    """
    Closed form of hat Q_k^(2)(n; a; b, 1/2−k+a/2), checked against the recurrence.

    The closed form is (α+n)_{2k}/(α)_{2k} · 3F2[−n, n+a, −k; b, 1+a/2; 1] with
    α = 1/2−k+a/2; its negated roots include α, α+1, ..., α+2k−1.

    Raises:
        ConsistencyError: If the closed form and the recurrence disagree or the
            root subset is missing.
    """
    a, b = _canonical(a), _canonical(b)
    alpha = (1 - 2 * k + a) / 2
    n = Polynomial.variable()
    total = Polynomial.zero()
    for j in range(k + 1):
        weight = _product(
            Fraction(pochhammer(-k, j), factorial(j)),
            1 / _nonzero(pochhammer(b, j), f"(b)_{j}"),
            1 / _nonzero(pochhammer(1 + a / 2, j), f"(1+a/2)_{j}"),
        )
        total = total + (pochhammer(-n, j) * pochhammer(n + a, j)).scale(weight)
    ratio = pochhammer(n + alpha, 2 * k).scale(
        1 / _nonzero(pochhammer(alpha, 2 * k), f"(alpha)_{2 * k}")
    )
    closed = ratio * total
    recurrence = hat_q2(BoldQFamily("BQ2", k, a, b, alpha))
    if not (closed - recurrence).is_negligible():
        raise ConsistencyError(f"hat_q2_special k={k}: closed form differs from the recurrence")
    if k > 0:
        xis = negated_roots(closed, precision_bits)
        with mpmath.workprec(precision_bits):
            tol = mpmath.mpf(2) ** (-(precision_bits // 4))
            for i in range(2 * k):
                if not any(is_close(xi, alpha + i, tol) for xi in xis):
                    raise ConsistencyError(
                        f"hat_q2_special k={k}: {format_exact(alpha + i)} is not a negated root"
                    )
    return closed


# ── P_k and roots ──────────────────────────────────────────────────────


def p_poly(k: int, big_a: Scalar, big_b: Scalar) -> Polynomial:
    """
    P_k(n; A, B) = (n+A)_{2k+1} · 2F1[−1−2k, n+B; −n−A−2k; −1], degree k.

    Clearing the lower parameter against (n+A)_{2k+1} leaves the polynomial sum
    Σ_j (−1−2k)_j/j! · (n+B)_j · (n+A)_{2k+1−j}. P_k is not normalized.
    """
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    big_a, big_b = _canonical(big_a), _canonical(big_b)
    n = Polynomial.variable()
    top = 2 * k + 1
    total = Polynomial.zero()
    for j in range(top + 1):
        weight = Fraction(pochhammer(-top, j), factorial(j))
        total = total + (pochhammer(n + big_b, j) * pochhammer(n + big_a, top - j)).scale(weight)
    return total


def negated_roots(
    q: Polynomial, precision_bits: int, family: QFamily | None = None
) -> list[Any]:
    """
    The values ξ_i = −r_i over the roots r_i of ``q``.

    For a Q2 family the multiset must be symmetric about a/2.

    Raises:
        DomainError: If ``q`` is constant.
        ConsistencyError: If the Q2 symmetry check fails.
    """
    if q.degree < 1:
        raise DomainError("negated_roots needs a nonconstant polynomial")
    roots = poly_roots(q, precision_bits)
    with mpmath.workprec(precision_bits):
        xis = [-r for r in roots]
        if family is not None and family.tag == "Q2":
            tol = numeric_threshold(precision_bits)
            for xi in xis:
                mirror = to_approx(family.a) - xi
                if not any(is_close(mirror, other, tol) for other in xis):
                    raise ConsistencyError(
                        f"{family.describe()}: negated roots not symmetric about a/2"
                    )
    return xis
