"""
Transformation identities as exactly verifiable truncated-series equalities.

Every theorem here has the common shape

    F_lhs(φ(x)) = Π (1 + s_i x)^{e_i} · F_rhs(x)

with φ one of the lifting maps. Both sides are expanded as formal power series
through x^N and compared coefficient by coefficient: exactly over the
rationals, or to a relative tolerance when irrational parameters force
numeric mode.
"""

from __future__ import annotations

import time
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Literal

import mpmath
from loguru import logger

from hyperlift.core.errors import ConsistencyError, DomainError
from hyperlift.core.exact import (
    DEFAULT_PRECISION_BITS,
    Scalar,
    align,
    check_precision,
    format_exact,
    is_close,
    is_exact,
    is_zero,
)
from hyperlift.core.hyperseries import (
    ParamArray,
    TruncatedSeries,
    WeightedSeries,
    as_params,
    delta_array,
    hypergeometric_terms,
    parametric_excess,
    series_coefficients,
    terminating_sum,
)
from hyperlift.core.lifting import LiftingMap, lifting_series
from hyperlift.core.models import VerificationReport
from hyperlift.core.polynomial import Polynomial
from hyperlift.core.qpoly import QFamily, q_poly
from hyperlift.core.reporting import make_report, numeric_threshold

type IdentityKind = Literal["theorem", "specialization"]


# ── series building blocks ─────────────────────────────────────────────


def power_prefactor_series(slope: Scalar, exponent: Scalar, order: int) -> TruncatedSeries:
    """
    Binomial expansion of (1 + slope·x)^exponent through x^order.

    (1 − x/x0)^e is the case slope = −1/x0. The expansion is
    1F0(−e; ; −slope·x), so a nonnegative integer exponent gives a polynomial.
    """
    slope = Fraction(slope) if isinstance(slope, int) else slope
    exponent = Fraction(exponent) if isinstance(exponent, int) else exponent
    return TruncatedSeries(tuple(hypergeometric_terms((-exponent,), (), order, -slope)))


def compose_series(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """
    Truncated composition outer(inner(x)) through the common order.

    Raises:
        DomainError: If ``inner`` has a nonzero constant term.
    """
    if not is_zero(inner[0]):
        raise DomainError(
            "compose_series needs an inner series without constant term, "
            f"got {format_exact(inner[0])}"
        )
    order = min(outer.order, inner.order)
    inner = inner.truncate(order)
    result = TruncatedSeries.constant(outer[order], order)
    for index in range(order - 1, -1, -1):
        result = result * inner + TruncatedSeries.constant(outer[index], order)
    return result


@dataclass(frozen=True)
class Prefactor:
    """The factor (1 + slope·x)^exponent."""

    slope: Scalar
    exponent: Scalar

    @classmethod
    def at_root(cls, x0: Scalar, exponent: Scalar) -> Prefactor:
        """(1 − x/x0)^exponent."""
        return cls(-1 / Fraction(x0) if is_exact(x0) else -1 / x0, exponent)

    def series(self, order: int) -> TruncatedSeries:
        return power_prefactor_series(self.slope, self.exponent, order)

    def describe(self) -> str:
        return f"(1 + ({format_exact(self.slope)})x)^({format_exact(self.exponent, 12)})"


# ── identities ─────────────────────────────────────────────────────────


@dataclass(frozen=True)
class TransformIdentity:
    """
    One fully instantiated transformation.

    ``lhs`` is the series in the lifted variable t = φ(x); ``rhs`` and the
    prefactors are in x. ``expected_excess`` is the left-hand parametric
    excess the theorem states, checked before any coefficient is compared.
    """

    name: str
    k: int
    params: Mapping[str, Scalar]
    lifting: LiftingMap
    lhs: WeightedSeries
    prefactors: tuple[Prefactor, ...]
    rhs: WeightedSeries
    kind: IdentityKind = "theorem"
    expected_excess: Scalar | None = None
    precision_bits: int = DEFAULT_PRECISION_BITS
    summary: str = field(default="", compare=False)

    @property
    def is_exact(self) -> bool:
        return (
            self.lhs.is_exact
            and self.rhs.is_exact
            and all(is_exact(p.slope) and is_exact(p.exponent) for p in self.prefactors)
        )

    def lhs_series(self, order: int) -> TruncatedSeries:
        """F_lhs composed with the lifting series, through x^order."""
        outer = series_coefficients(self.lhs, order)
        return compose_series(outer, lifting_series(self.lifting, order))

    def rhs_series(self, order: int) -> TruncatedSeries:
        """Prefactor series times F_rhs, through x^order."""
        result = series_coefficients(self.rhs, order)
        for prefactor in self.prefactors:
            result = prefactor.series(order) * result
        return result


def verify_transform(
    identity: TransformIdentity, order: int, *, seed: int | None = None, tol: Any = None
) -> VerificationReport:
    """
    Expand both sides of ``identity`` through x^order and compare them.

    Exact identities must agree coefficient for coefficient; numeric ones to
    the relative tolerance ``tol`` (default 10^-(0.15·precision_bits)).

    Raises:
        DomainError: If order < 1 or a series hits a lower-parameter pole.
        ConsistencyError: If the left-hand excess differs from the stated one.
    """
    if order < 1:
        raise DomainError(f"order must be at least 1, got {order}")
    started = time.perf_counter()
    with mpmath.workprec(check_precision(identity.precision_bits)):
        if identity.expected_excess is not None:
            excess = parametric_excess(identity.lhs)
            if not is_close(excess, identity.expected_excess):
                raise ConsistencyError(
                    f"{identity.name}: left-hand excess {format_exact(excess)}, "
                    f"expected {format_exact(identity.expected_excess)}"
                )
        lhs = identity.lhs_series(order)
        rhs = identity.rhs_series(order)
        if tol is None and not identity.is_exact:
            tol = numeric_threshold(identity.precision_bits)
        report = make_report(
            identity.name,
            lhs.coefficients,
            rhs.coefficients,
            k=identity.k,
            params=identity.params,
            order=order,
            tol=tol,
            seed=seed,
            started=started,
        )
    logger.debug("verify_transform {} k={} -> {}", identity.name, identity.k, report.passed)
    return report


# ── the companion derivation and the key lemma ─────────────────────────


def _weighted_rhs(f: QFamily, weight: Polynomial) -> WeightedSeries:
    return WeightedSeries((f.a, *f.rhs_gamma()), f.rhs_delta(), weight)


def verify_novelty(f: QFamily, order: int) -> VerificationReport:
    """
    Check the series form of the master k-raising relation.

    The right-hand series at level k with weight K(n)·Q_k(n), K = (n+r)/r and
    r = la/(l+m), must equal (1 + (m/l)x/x0) times the right-hand series at
    level k−1 with shifted parameters and weight Q_{k−1,+}.

    Raises:
        DomainError: For k = 0, four-parameter families or r = 0.
    """
    if f.k < 1:
        raise DomainError("verify_novelty needs k >= 1")
    if f.four_param:
        raise DomainError("verify_novelty covers the three-parameter families")
    started = time.perf_counter()
    lifting = f.lifting
    root = lifting.raising_root(f.a)
    if is_zero(root):
        raise DomainError("singular parameters: la/(l+m) vanishes")
    n = Polynomial.variable()
    weight = ((n + root) / root) * q_poly(f)
    left = series_coefficients(_weighted_rhs(f, weight), order)
    g = f.shifted()
    companion = Prefactor(lifting.companion_slope, 1).series(order)
    right = companion * series_coefficients(_weighted_rhs(g, q_poly(g)), order)
    return make_report(
        f"novelty-{f.tag}",
        left.coefficients,
        right.coefficients,
        k=f.k,
        params=f.params(),
        order=order,
        started=started,
    )


def _r_weight(
    lifting: LiftingMap, a: Scalar, alpha: ParamArray, beta: ParamArray, n: int
) -> Scalar:
    """R(n) = F[Δ(l;−n), Δ(m;n+a), (α); (β) | 1], a terminating sum."""
    upper = (*delta_array(lifting.l, Fraction(-n)), *delta_array(lifting.m, a + n), *alpha)
    return terminating_sum(WeightedSeries(upper, beta))


def verify_key_lemma(
    lifting: LiftingMap,
    a: Scalar,
    alpha: Sequence[Scalar],
    beta: Sequence[Scalar],
    order: int,
    *,
    require_balance: bool = True,
) -> VerificationReport:
    """
    Check the composition lemma that underlies every transformation.

    F[Δ(l+m; a), (α); (β) | φ(x)] = (1 − x/x0)^a Σ (a)_n/n! R(n) (x/x0)^n,
    where R(n) is evaluated per n as a terminating sum.

    Raises:
        DomainError: If the arrays are unbalanced (l + m + |α| != |β| + 1) and
            ``require_balance`` is set, or R(n) hits a lower-parameter pole.
    """
    alpha_params, beta_params = as_params(alpha), as_params(beta)
    if require_balance and lifting.l + lifting.m + len(alpha_params) != len(beta_params) + 1:
        raise DomainError(
            f"unbalanced arrays: l+m+|alpha| = {lifting.l + lifting.m + len(alpha_params)}, "
            f"|beta|+1 = {len(beta_params) + 1}"
        )
    started = time.perf_counter()
    a = Fraction(a) if isinstance(a, int) else a
    upper = (*delta_array(lifting.l + lifting.m, a), *alpha_params)
    lhs_series = WeightedSeries(upper, beta_params)
    lhs = compose_series(series_coefficients(lhs_series, order), lifting_series(lifting, order))
    terms = hypergeometric_terms((a,), (), order, 1 / lifting.x0)
    weighted: list[Any] = []
    for n, term in enumerate(terms):
        r_n = _r_weight(lifting, a, alpha_params, beta_params, n)
        term, r_n = align(term, r_n)
        weighted.append(term * r_n)
    rhs = Prefactor.at_root(lifting.x0, a).series(order) * TruncatedSeries(tuple(weighted))
    return make_report(
        f"key-lemma{lifting}",
        lhs.coefficients,
        rhs.coefficients,
        k=None,
        params={"a": a} | {f"alpha{i}": v for i, v in enumerate(alpha_params)}
        | {f"beta{i}": v for i, v in enumerate(beta_params)},
        order=order,
        started=started,
    )
