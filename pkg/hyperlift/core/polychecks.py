"""
Cross-checks of the polynomial families, each packaged as a VerificationReport.

The suite runs these next to the series identities: representation against
recurrence, degree laws, the k-lowering relation, the quadratic-lattice
symmetry, the d → ∞ limit, the P_k antisymmetry and generating function, the
two routes to bold Q2, the displayed k = 1 forms, and the (very) well-poised
structure of the right-hand sides.
"""

from __future__ import annotations

import time
from collections.abc import Mapping, Sequence
from fractions import Fraction
from math import factorial
from typing import Any

import mpmath

from hyperlift.core.errors import DomainError
from hyperlift.core.exact import DEFAULT_PRECISION_BITS, Scalar, check_precision
from hyperlift.core.hyperseries import (
    TruncatedSeries,
    WeightedSeries,
    explicit_pair_form,
)
from hyperlift.core.models import VerificationReport
from hyperlift.core.poisedness import classify_poisedness
from hyperlift.core.polynomial import Polynomial
from hyperlift.core.qpoly import (
    BoldQFamily,
    QFamily,
    bold_q,
    bold_q_master,
    hat_q2,
    lower_q2,
    p_poly,
    q_poly,
    raise_chain,
)
from hyperlift.core.reporting import (
    LIMIT_EXPONENTS,
    decay_report,
    make_report,
    numeric_threshold,
)
from hyperlift.core.transforms import power_prefactor_series


def _padded(p: Polynomial, length: int) -> list[Scalar]:
    return [p.coefficient(i) for i in range(length)]


def _poly_report(
    identity: str,
    left: Polynomial,
    right: Polynomial,
    *,
    k: int | None,
    params: Mapping[str, Scalar | None],
    started: float,
    extra: Mapping[str, Any] | None = None,
) -> VerificationReport:
    """Coefficient-by-coefficient comparison of two polynomials."""
    length = max(left.degree, right.degree, 0) + 1
    return make_report(
        identity,
        _padded(left, length),
        _padded(right, length),
        k=k,
        params=params,
        order=None,
        started=started,
        extra=extra,
    )


def _family_name(f: QFamily) -> str:
    return f"{f.tag}d" if f.four_param else f.tag


# ── Q families ─────────────────────────────────────────────────────────


def check_representation(f: QFamily) -> VerificationReport:
    """q_poly (direct summation) against Q_0 ≡ 1 raised k times by master_raise."""
    started = time.perf_counter()
    return _poly_report(
        f"representation-{_family_name(f)}",
        q_poly(f),
        raise_chain(f),
        k=f.k,
        params=f.params(),
        started=started,
    )


def check_degree(f: QFamily | BoldQFamily) -> VerificationReport:
    """Degree 2k, 3k (four-parameter cubics) or 1 + 4k (bold families)."""
    started = time.perf_counter()
    if isinstance(f, BoldQFamily):
        name, degree = f.tag, bold_q(f).degree
    else:
        name, degree = _family_name(f), q_poly(f).degree
    return make_report(
        f"degree-{name}",
        [Fraction(degree)],
        [Fraction(f.degree)],
        k=f.k,
        params=f.params(),
        order=None,
        started=started,
    )


def check_lowering(f: QFamily) -> VerificationReport:
    """bc·Δ_n Q_k / Δ_n λ equals k·Q_{k−1,+}."""
    started = time.perf_counter()
    lowered = lower_q2(f, q_poly(f))
    return _poly_report(
        "lowering-Q2",
        lowered,
        q_poly(f.shifted()).scale(Fraction(f.k)),
        k=f.k,
        params=f.params(),
        started=started,
    )


def check_symmetry(f: QFamily | BoldQFamily) -> VerificationReport:
    """
    Invariance under n ↦ −n − a.

    Applies to Q2 (both variants) and to hat Q2 for a BQ2 family.
    """
    started = time.perf_counter()
    if isinstance(f, BoldQFamily):
        if f.tag != "BQ2":
            raise DomainError("the lattice symmetry holds for hat Q2 only")
        p, name = hat_q2(f), "symmetry-hatQ2"
    else:
        if f.tag != "Q2":
            raise DomainError("the lattice symmetry holds for the Q2 family only")
        p, name = q_poly(f), f"symmetry-{_family_name(f)}"
    return _poly_report(
        name, p.compose_affine(-1, -f.a), p, k=f.k, params=f.params(), started=started
    )


def check_d_limit(k: int, a: Scalar, b: Scalar, c: Scalar) -> VerificationReport:
    """The four-parameter Q2 approaches the three-parameter one as d grows."""
    started = time.perf_counter()
    plain = q_poly(QFamily("Q2", k, a, b, c))
    gaps: list[Scalar] = []
    for t in LIMIT_EXPONENTS:
        difference = q_poly(QFamily("Q2", k, a, b, c, Fraction(10) ** t)) - plain
        gaps.append(max((abs(x) for x in difference.coefficients), default=Fraction(0)))
    return decay_report(
        "d-limit-Q2", gaps, k=k, params={"a": a, "b": b, "c": c}, started=started
    )


def check_bold_cross(f: BoldQFamily) -> VerificationReport:
    """BQ2 via (1 + 2n/a)·hat Q against the generic bold master relation."""
    started = time.perf_counter()
    if f.tag != "BQ2":
        raise DomainError("the hat route exists for BQ2 only")
    return _poly_report(
        "bold-cross-BQ2", bold_q(f), bold_q_master(f), k=f.k, params=f.params(), started=started
    )


# ── P_k ────────────────────────────────────────────────────────────────


def check_p_antisymmetry(k: int, big_a: Scalar, big_b: Scalar) -> VerificationReport:
    """P_k(n; A, B) = −P_k(n; B, A)."""
    started = time.perf_counter()
    return _poly_report(
        "p-antisymmetry",
        p_poly(k, big_a, big_b),
        -p_poly(k, big_b, big_a),
        k=k,
        params={"A": big_a, "B": big_b},
        started=started,
    )


def p_generating_sides(
    k_max: int, big_a: Scalar, big_b: Scalar, n: Scalar
) -> tuple[TruncatedSeries, TruncatedSeries]:
    """
    Both sides of the P_k generating function at one value of n, through t^{2K+1}.

    Σ_{k ≤ K} P_k(n; A, B) t^{1+2k}/(1+2k)! against
    ½[(1−t)^{−n−A}(1+t)^{−n−B} − (1−t)^{−n−B}(1+t)^{−n−A}].
    """
    order = 2 * k_max + 1
    coefficients: list[Scalar] = [Fraction(0)] * (order + 1)
    for k in range(k_max + 1):
        coefficients[2 * k + 1] = p_poly(k, big_a, big_b)(n) / factorial(2 * k + 1)
    first = power_prefactor_series(-1, -n - big_a, order) * power_prefactor_series(
        1, -n - big_b, order
    )
    second = power_prefactor_series(-1, -n - big_b, order) * power_prefactor_series(
        1, -n - big_a, order
    )
    return TruncatedSeries(tuple(coefficients)), (first - second).scale(Fraction(1, 2))


def check_p_generating(
    k_max: int, big_a: Scalar, big_b: Scalar, n_values: Sequence[Scalar]
) -> VerificationReport:
    """The generating function, compared at each of ``n_values``."""
    started = time.perf_counter()
    left: list[Scalar] = []
    right: list[Scalar] = []
    for n in n_values:
        lhs, rhs = p_generating_sides(k_max, big_a, big_b, Fraction(n))
        left.extend(lhs.coefficients)
        right.extend(rhs.coefficients)
    return make_report(
        "p-generating",
        left,
        right,
        k=k_max,
        params={"A": big_a, "B": big_b},
        order=2 * k_max + 1,
        started=started,
        extra={"n_values": len(n_values)},
    )


# ── displayed k = 1 forms ──────────────────────────────────────────────


def printed_forms(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> dict[str, Polynomial]:
    """The k = 1 polynomials written out in closed form."""
    n = Polynomial.variable()
    lam = n * (n + a)
    cubic = 1 - 4 * b * b
    cubic_p = (1 - 2 * a - 2 * b) * (1 - 2 * a + 2 * b)
    s = b + c + d - a
    hat = Polynomial.one() + lam * (
        lam.scale(4) + ((a - 1) * (a - 2) + (2 * b + 3) * (2 * c + 3) - 9)
    ).scale(1 / ((a + 1) * (a + 2) * b * c))
    return {
        "Q2": (lam + b * c).scale(1 / (b * c)),
        "Q3": (n * n * 12 + n.scale(4 * (1 + 2 * a)) + cubic).scale(1 / cubic),
        "Q3p": (n * n * 12 - n.scale(4 * (1 - 4 * a)) + cubic_p).scale(1 / cubic_p),
        "Q2d": (lam.scale(s) + b * c * d).scale(1 / (b * c * d)),
        "hatQ2": hat,
    }


def computed_forms(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> dict[str, Polynomial]:
    """The same k = 1 polynomials from the library's constructions."""
    return {
        "Q2": q_poly(QFamily("Q2", 1, a, b, c)),
        "Q3": q_poly(QFamily("Q3", 1, a, b)),
        "Q3p": q_poly(QFamily("Q3p", 1, a, b)),
        "Q2d": q_poly(QFamily("Q2", 1, a, b, c, d)),
        "hatQ2": hat_q2(BoldQFamily("BQ2", 1, a, b, c)),
    }


def check_printed_forms(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> VerificationReport:
    started = time.perf_counter()
    a, b, c, d = (Fraction(v) for v in (a, b, c, d))
    printed, computed = printed_forms(a, b, c, d), computed_forms(a, b, c, d)
    left: list[Scalar] = []
    right: list[Scalar] = []
    for name, expected in printed.items():
        length = max(expected.degree, computed[name].degree) + 1
        left.extend(_padded(computed[name], length))
        right.extend(_padded(expected, length))
    return make_report(
        "printed-forms",
        left,
        right,
        k=1,
        params={"a": a, "b": b, "c": c, "d": d},
        order=None,
        started=started,
        extra={"forms": ",".join(printed)},
    )


# ── poisedness of the right-hand sides ─────────────────────────────────


def check_poisedness(
    f: QFamily | BoldQFamily, precision_bits: int = DEFAULT_PRECISION_BITS
) -> VerificationReport:
    """
    Classify the quadratic right-hand side in explicit-pair form.

    With a Q2 weight the array is well poised; the bold Q2 weight adds the
    pair (1 + a/2; a/2) and makes it very well poised.
    """
    started = time.perf_counter()
    bits = check_precision(precision_bits)
    if isinstance(f, BoldQFamily):
        if f.tag != "BQ2":
            raise DomainError("the poisedness check covers the quadratic bold family")
        weight, bold = bold_q(f), True
    else:
        if f.tag != "Q2" or f.four_param:
            raise DomainError("the poisedness check covers the three-parameter Q2 family")
        weight, bold = q_poly(f), False
    series = WeightedSeries((f.a, *f.rhs_gamma()), f.rhs_delta(), weight)
    with mpmath.workprec(bits):
        explicit = explicit_pair_form(series, bits)
        report = classify_poisedness(explicit, numeric_threshold(bits, 0.16))
    observed = report.very_well_poised if bold else report.well_poised
    name = "very-well-poised-BQ2" if bold else "well-poised-Q2"
    return make_report(
        name,
        [Fraction(observed)],
        [Fraction(1)],
        k=f.k,
        params=f.params(),
        order=None,
        started=started,
    )
