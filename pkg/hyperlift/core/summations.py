"""
Terminating summation and transformation identities built on the Q families.

Every verifier evaluates both sides as exact rationals (terminating sums) and
compares them. The exceptions are the extended Kummer check, which sums a
nonterminating alternating series at x = −1 numerically, and the limit checks,
which watch a gap shrink as one parameter grows.

The registry at the bottom maps each summation name to its parameter names,
its size variable (n, N or m) and its variants, so the CLI and the suite can
drive every identity through run_summation.
"""

from __future__ import annotations

import time
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import factorial
from typing import Any

import mpmath
from loguru import logger

from hyperlift.core.errors import ConsistencyError, DomainError, ParameterError
from hyperlift.core.exact import (
    DEFAULT_PRECISION_BITS,
    Scalar,
    check_precision,
    format_exact,
    is_zero,
    pochhammer,
)
from hyperlift.core.hyperseries import (
    WeightedSeries,
    eval_numeric,
    parametric_excess,
    series_coefficients,
    terminating_sum,
)
from hyperlift.core.identities import build_identity, identity_spec
from hyperlift.core.models import VerificationReport
from hyperlift.core.poisedness import classify_poisedness
from hyperlift.core.polynomial import Polynomial
from hyperlift.core.qpoly import LIFTINGS, BoldQFamily, QFamily, bold_q, p_poly, q_poly
from hyperlift.core.reporting import (
    LIMIT_EXPONENTS,
    decay_report,
    make_report,
    numeric_threshold,
)
from hyperlift.core.transforms import TransformIdentity


def _exact(value: Scalar) -> Scalar:
    return Fraction(value) if isinstance(value, int) else value


def _size(n: int, label: str) -> int:
    if n < 0:
        raise DomainError(f"{label} must be a nonnegative integer, got {n}")
    return n


def _bracket(upper: Sequence[Scalar], lower: Sequence[Scalar], n: int) -> Scalar:
    """[u_1, ..., u_r; l_1, ..., l_s]_n = Π (u_i)_n / Π (l_j)_n."""
    numerator: Any = Fraction(1)
    denominator: Any = Fraction(1)
    for u in upper:
        numerator = numerator * pochhammer(_exact(u), n)
    for v in lower:
        denominator = denominator * pochhammer(_exact(v), n)
    if is_zero(denominator):
        raise DomainError(f"shifted factorial quotient has a vanishing denominator at n = {n}")
    return numerator / denominator


# ── three-term classics ────────────────────────────────────────────────


def sheppard_sides(n: int, a: Scalar, b: Scalar, d: Scalar, e: Scalar) -> tuple[Scalar, Scalar]:
    """
    Both sides of the terminating 3F2 transformation

    3F2[−n, A, B; D, E] = [D−A, E−A; D, E]_n 3F2[−n, A, 1−S; 1+A−D−n, 1+A−E−n]

    with S = n − A − B + D + E.
    """
    s = n - a - b + d + e
    lhs = terminating_sum(WeightedSeries((-n, a, b), (d, e)))
    rhs = _bracket((d - a, e - a), (d, e), n) * terminating_sum(
        WeightedSeries((-n, a, 1 - s), (1 + a - d - n, 1 + a - e - n))
    )
    return lhs, rhs


def verify_sheppard(n: int, a: Scalar, b: Scalar, d: Scalar, e: Scalar) -> VerificationReport:
    started = time.perf_counter()
    n = _size(n, "n")
    lhs, rhs = sheppard_sides(n, a, b, d, e)
    return make_report(
        "sheppard",
        [lhs],
        [rhs],
        k=None,
        params={"a": a, "b": b, "d": d, "e": e},
        order=None,
        started=started,
        extra={"n": n},
    )


def _whipple43_lhs(n: int, a: Scalar, b: Scalar, c: Scalar, d: Scalar, e: Scalar) -> Scalar:
    f = 1 - n + a + b + c - d - e
    return terminating_sum(WeightedSeries((-n, a, b, c), (d, e, f)))


def verify_whipple43(
    n: int, a: Scalar, b: Scalar, c: Scalar, d: Scalar, e: Scalar, f: Scalar | None = None
) -> VerificationReport:
    """
    Whipple's transformation of a balanced terminating 4F3.

    F is fixed by the balance condition D + E + F = 1 − n + A + B + C; a given
    ``f`` is only checked against it.

    Raises:
        DomainError: If ``f`` is given and the array is not balanced.
    """
    started = time.perf_counter()
    n = _size(n, "n")
    balanced = 1 - n + a + b + c - d - e
    if f is not None and f != balanced:
        raise DomainError(
            f"4F3 is not balanced: F = {format_exact(f)}, need {format_exact(balanced)}"
        )
    lhs = _whipple43_lhs(n, a, b, c, d, e)
    rhs = _bracket((d - a, e - a), (d, e), n) * terminating_sum(
        WeightedSeries(
            (-n, a, balanced - b, balanced - c), (1 + a - d - n, 1 + a - e - n, balanced)
        )
    )
    return make_report(
        "whipple43",
        [lhs],
        [rhs],
        k=None,
        params={"a": a, "b": b, "c": c, "d": d, "e": e},
        order=None,
        started=started,
        extra={"n": n, "f": format_exact(balanced)},
    )


def whipple_limit_gap(n: int, a: Scalar, b: Scalar, d: Scalar, e: Scalar, c: Scalar) -> Scalar:
    """Balanced 4F3 minus the 3F2 it tends to as C (and with it F) grows."""
    lhs_43 = _whipple43_lhs(n, a, b, c, d, e)
    lhs_32, _ = sheppard_sides(n, a, b, d, e)
    return lhs_43 - lhs_32


def verify_whipple_limit(n: int, a: Scalar, b: Scalar, d: Scalar, e: Scalar) -> VerificationReport:
    """The Whipple 4F3 reduces to the 3F2 of verify_sheppard as C → ∞."""
    started = time.perf_counter()
    n = _size(n, "n")
    gaps = [whipple_limit_gap(n, a, b, d, e, Fraction(10) ** t) for t in LIMIT_EXPONENTS]
    return decay_report(
        "whipple43-limit",
        gaps,
        k=None,
        params={"a": a, "b": b, "d": d, "e": e},
        started=started,
        extra={"n": n},
    )


# ── the three R-forms ──────────────────────────────────────────────────


def r_forms(
    tag: str, n: int, k: int, a: Scalar, b: Scalar, c: Scalar | None = None
) -> list[Scalar]:
    """
    The three equivalent expressions of R_k(n) for the Q2 or Q3 family.

    The first is a terminating 3F2, the second its Sheppard transform (which
    terminates after k + 1 terms) and the third the same shifted factorial
    quotient times Q_k(n).
    """
    a, b = _exact(a), _exact(b)
    if tag == "Q2":
        if c is None:
            raise ParameterError("the Q2 R-forms need c")
        c = _exact(c)
        first = terminating_sum(
            WeightedSeries((-n, n + a, 1 - k + a - b - c), (1 + a - b, 1 + a - c))
        )
        quotient = _bracket((b, c), (1 + a - b, 1 + a - c), n)
        second = quotient * terminating_sum(WeightedSeries((-n, n + a, -k), (b, c)))
        third = quotient * q_poly(QFamily("Q2", k, a, b, c))(n)
        return [first, second, third]
    if tag != "Q3":
        raise ParameterError(f"R-forms are defined for Q2 and Q3, not '{tag}'")
    plus, minus = (3 + 2 * k + 2 * a + 2 * b) / 4, (3 + 2 * k + 2 * a - 2 * b) / 4
    first = terminating_sum(WeightedSeries((-n, (n + a) / 2, (n + 1 + a) / 2), (plus, minus)))
    half = Fraction(n, 2)
    second = _bracket(
        ((3 + 2 * k + 2 * b) / 4 - half, (3 + 2 * k - 2 * b) / 4 - half), (plus, minus), n
    ) * terminating_sum(
        WeightedSeries(
            (-n, (n + a) / 2, -k),
            ((1 - 2 * k + 2 * b) / 4 - half, (1 - 2 * k - 2 * b) / 4 - half),
        )
    )
    third = (
        Fraction(1, 4**n)
        * _bracket((Fraction(1, 2) - k - b, Fraction(1, 2) - k + b), (plus, minus), n)
        * q_poly(QFamily("Q3", k, a, b))(n)
    )
    return [first, second, third]


def verify_r_forms(
    tag: str, n: int, k: int, a: Scalar, b: Scalar, c: Scalar | None = None
) -> VerificationReport:
    started = time.perf_counter()
    n = _size(n, "n")
    first, second, third = r_forms(tag, n, k, a, b, c)
    return make_report(
        "r-forms",
        [first, first],
        [second, third],
        k=k,
        params={"a": a, "b": b, "c": c},
        order=None,
        started=started,
        extra={"n": n, "variant": tag},
    )


# ── the pairing lemma ──────────────────────────────────────────────────


def verify_gs_pairing(base: TransformIdentity, companion: TransformIdentity) -> VerificationReport:
    """
    Couple a family A or B theorem with the k = 0 companion theorem.

    With N = (−a_base − a_comp)/(1 + m) a nonnegative integer, the x^N
    coefficient of the product of the two right-hand series equals
    (−C/x0)^N times the t^N coefficient of the product of the two left-hand
    series, C being the lifting constant. Quadratic and first cubic map only.

    Raises:
        DomainError: On mismatched liftings, l != 1, a companion that is not a
            k = 0 family C theorem, or a non-integral N.
    """
    started = time.perf_counter()
    lifting = base.lifting
    if companion.lifting != lifting:
        raise DomainError(f"{base.name} and {companion.name} use different lifting maps")
    if lifting.l != 1:
        raise DomainError(f"the pairing lemma needs l = 1, got lifting {lifting}")
    if not companion.name.startswith("thmC") or companion.k != 0:
        raise DomainError("the companion must be a family C theorem at k = 0")
    if not base.name.startswith(("thmA", "thmB")):
        raise DomainError(f"the base must be a family A or B theorem, got {base.name}")
    ratio = Fraction(-base.params["a"] - companion.params["a"]) / (1 + lifting.m)
    if ratio.denominator != 1 or ratio < 0:
        raise DomainError(
            f"(−a_base − a_comp)/(1+m) = {format_exact(ratio)} is not a nonnegative integer"
        )
    order = int(ratio)
    tilde = series_coefficients(base.rhs, order) * series_coefficients(companion.rhs, order)
    plain = series_coefficients(base.lhs, order) * series_coefficients(companion.lhs, order)
    factor = (-lifting.constant / lifting.x0) ** order
    return make_report(
        f"gs-pairing-{base.name}",
        [tilde[order]],
        [factor * plain[order]],
        k=base.k,
        params={f"base_{name}": v for name, v in base.params.items()}
        | {f"comp_{name}": v for name, v in companion.params.items()},
        order=None,
        started=started,
        extra={"N": order},
    )


# Base theorem → its companion and the base parameters past a, named e, f, g.
_GS_BASES: dict[str, tuple[str, tuple[str, ...]]] = {
    "thmA2": ("thmC2", ("b", "c")),
    "thmB2": ("thmC2", ("b", "c", "d")),
    "thmA3": ("thmC3", ("b",)),
    "thmB3": ("thmC3", ("b", "d")),
}


def gs_pair(base_name: str, k: int, big_n: int, params: Mapping[str, Scalar]) -> VerificationReport:
    """
    Build a matched base/companion pair and run verify_gs_pairing.

    ``params`` holds the companion's a, b (and c for the quadratic map) plus
    the base parameters past a as e, f, g; the base a is set to
    −a − (1+m)N so the pairing lands on order N.
    """
    if base_name not in _GS_BASES:
        raise ParameterError(f"no pairing for '{base_name}'; choose one of {sorted(_GS_BASES)}")
    companion_name, base_names = _GS_BASES[base_name]
    big_n = _size(big_n, "N")
    companion_spec = identity_spec(companion_name)
    companion_params = {name: params[name] for name in companion_spec.param_names}
    lifting = LIFTINGS[companion_spec.family]
    base_params: dict[str, Scalar] = {
        "a": -_exact(companion_params["a"]) - (1 + lifting.m) * big_n
    }
    for name, alias in zip(base_names, ("e", "f", "g"), strict=False):
        base_params[name] = params[alias]
    base = build_identity(base_name, k, base_params)
    companion = build_identity(companion_name, 0, companion_params)
    return verify_gs_pairing(base, companion)


# ── the extended Whipple transformation and Dougall's sum ──────────────


def _ext_whipple_weight(
    k: int, big_n: int, a: Scalar, d: Scalar, e: Scalar, f: Scalar | None
) -> tuple[Polynomial, Scalar]:
    """The reversed, normalized weight Q(N−n)/Q(N) and Q(N) itself."""
    family = QFamily(
        "Q2",
        k,
        -a - 2 * big_n,
        d - a - big_n,
        e - a - big_n,
        None if f is None else f - a - big_n,
    )
    q = q_poly(family)
    q_at_n = q(big_n)
    if is_zero(q_at_n):
        raise DomainError(f"{family.describe()}: Q(N) vanishes at N = {big_n}")
    return q.compose_affine(-1, big_n).scale(1 / q_at_n), q_at_n


def _ext_whipple_lhs(
    k: int, big_n: int, a: Scalar, b: Scalar, c: Scalar, d: Scalar, e: Scalar, f: Scalar | None
) -> Scalar:
    core = WeightedSeries(
        (a, 1 + a / 2, b, c, d, e, -big_n),
        (a / 2, 1 + a - b, 1 + a - c, 1 + a - d, 1 + a - e, 1 + a + big_n),
    )
    if not classify_poisedness(core).very_well_poised:
        raise ConsistencyError("extended Whipple core array is not very well poised")
    weight, _ = _ext_whipple_weight(k, big_n, a, d, e, f)
    return terminating_sum(replace(core, weight=weight))


def _ext_whipple_rhs(
    k: int,
    big_n: int,
    a: Scalar,
    b: Scalar,
    c: Scalar,
    d: Scalar,
    e: Scalar,
    f: Scalar | None,
    *,
    cancel: bool = False,
) -> Scalar:
    _, q_at_n = _ext_whipple_weight(k, big_n, a, d, e, f)
    bracket_upper: list[Scalar] = [1 + a, 1 - k + a - d - e]
    bracket_lower: list[Scalar] = [1 + a - d, 1 + a - e]
    upper: list[Scalar] = [1 + a - b - c, d, e]
    lower: list[Scalar] = [1 + a - b, 1 + a - c, k - a + d + e - big_n]
    if f is not None:
        bracket_upper.append(1 - k + a - f)
        bracket_lower.append(1 + a - f)
        upper.append(1 + a - f)
        lower.append(1 - k + a - f)
    if cancel:
        # 1 + a − b − c equals k − a + d + e − N on the Dougall line.
        del upper[0], lower[2]
    series = WeightedSeries((*upper, -big_n), tuple(lower))
    return _bracket(bracket_upper, bracket_lower, big_n) / q_at_n * terminating_sum(series)


def verify_ext_whipple(
    k: int,
    big_n: int,
    a: Scalar,
    b: Scalar,
    c: Scalar,
    d: Scalar,
    e: Scalar,
    f: Scalar | None = None,
) -> VerificationReport:
    """
    The Q2-weighted terminating very-well-poised 7F6 and its 4F3 (or, with
    ``f``, 5F4) transform.

    Raises:
        DomainError: If Q(N) vanishes or a series hits a lower-parameter pole.
        ConsistencyError: If the core array is not very well poised.
    """
    started = time.perf_counter()
    big_n = _size(big_n, "N")
    a, b, c, d, e = (_exact(v) for v in (a, b, c, d, e))
    f = None if f is None else _exact(f)
    lhs = _ext_whipple_lhs(k, big_n, a, b, c, d, e, f)
    rhs = _ext_whipple_rhs(k, big_n, a, b, c, d, e, f)
    return make_report(
        "ext-whipple",
        [lhs],
        [rhs],
        k=k,
        params={"a": a, "b": b, "c": c, "d": d, "e": e, "f": f},
        order=None,
        started=started,
        extra={"N": big_n, "variant": "i" if f is None else "ii"},
    )


def verify_dougall(
    k: int, big_n: int, a: Scalar, b: Scalar, d: Scalar, e: Scalar, f: Scalar | None = None
) -> VerificationReport:
    """
    The extended Whipple transformation on the line c = 1 + 2a − b − k − d − e + N.

    There a parameter pair on the right cancels and the 4F3 drops to a
    balanced 3F2 (5F4 to a 4F3), which is summable for k = 0.
    """
    started = time.perf_counter()
    big_n = _size(big_n, "N")
    a, b, d, e = (_exact(v) for v in (a, b, d, e))
    f = None if f is None else _exact(f)
    c = 1 + 2 * a - b - k - d - e + big_n
    lhs = _ext_whipple_lhs(k, big_n, a, b, c, d, e, f)
    rhs = _ext_whipple_rhs(k, big_n, a, b, c, d, e, f, cancel=True)
    return make_report(
        "dougall",
        [lhs],
        [rhs],
        k=k,
        params={"a": a, "b": b, "d": d, "e": e, "f": f},
        order=None,
        started=started,
        extra={"N": big_n, "c": format_exact(c), "variant": "i" if f is None else "ii"},
    )


def ext_whipple_f_gap(
    k: int, big_n: int, a: Scalar, b: Scalar, c: Scalar, d: Scalar, e: Scalar, f: Scalar
) -> Scalar:
    """Right-hand side of the f variant minus that of the plain variant."""
    values = [_exact(v) for v in (a, b, c, d, e)]
    return _ext_whipple_rhs(k, big_n, *values, _exact(f)) - _ext_whipple_rhs(
        k, big_n, *values, None
    )


def verify_ext_whipple_limit(
    k: int, big_n: int, a: Scalar, b: Scalar, c: Scalar, d: Scalar, e: Scalar
) -> VerificationReport:
    """The f variant tends to the plain variant as f → ∞."""
    started = time.perf_counter()
    big_n = _size(big_n, "N")
    gaps = [
        ext_whipple_f_gap(k, big_n, a, b, c, d, e, Fraction(10) ** t) for t in LIMIT_EXPONENTS
    ]
    return decay_report(
        "ext-whipple-limit",
        gaps,
        k=k,
        params={"a": a, "b": b, "c": c, "d": d, "e": e},
        started=started,
        extra={"N": big_n},
    )


# ── Bailey-type sums ───────────────────────────────────────────────────


def _bailey_rhs_series(
    m: int, a: Scalar, b: Scalar, c: Scalar, w: Scalar, weight: Polynomial
) -> Scalar:
    return terminating_sum(WeightedSeries((a, b, c, -m), (1 + a - b, 1 + a - c, w), weight))


def verify_bailey1(
    k: int, m: int, a: Scalar, b: Scalar, c: Scalar, w: Scalar, d: Scalar | None = None
) -> VerificationReport:
    """
    A terminating 5F4 (6F5 with ``d``) whose sum is a Q2-weighted terminating 4F3.

    Raises:
        ConsistencyError: If the left-hand excess is not 1 + k (or 1 with ``d``).
    """
    started = time.perf_counter()
    m = _size(m, "m")
    a, b, c, w = (_exact(v) for v in (a, b, c, w))
    d = None if d is None else _exact(d)
    upper: list[Scalar] = [a / 2, (1 + a) / 2, 1 - k + a - b - c, 1 + a - w, -m]
    lower: list[Scalar] = [1 + a - b, 1 + a - c, (1 + a - w - m) / 2, (2 + a - w - m) / 2]
    if d is not None:
        upper.append(k + d)
        lower.append(d)
    lhs_series = WeightedSeries(tuple(upper), tuple(lower))
    expected = Fraction(1 + k) if d is None else Fraction(1)
    excess = parametric_excess(lhs_series)
    if excess != expected:
        raise ConsistencyError(
            f"bailey1: left-hand excess {format_exact(excess)}, expected {format_exact(expected)}"
        )
    lhs = terminating_sum(lhs_series)
    weight = q_poly(QFamily("Q2", k, a, b, c, d))
    rhs = _bracket((w,), (w - a,), m) * _bailey_rhs_series(m, a, b, c, w, weight)
    return make_report(
        "bailey1",
        [lhs],
        [rhs],
        k=k,
        params={"a": a, "b": b, "c": c, "w": w, "d": d},
        order=None,
        started=started,
        extra={"m": m, "variant": "i" if d is None else "ii"},
    )


def verify_bailey2(
    k: int, m: int, a: Scalar, b: Scalar, c: Scalar, w: Scalar
) -> VerificationReport:
    """A P_k-weighted terminating 5F4 summed by the bold-Q2-weighted 4F3."""
    started = time.perf_counter()
    m = _size(m, "m")
    a, b, c, w = (_exact(v) for v in (a, b, c, w))
    shift = a - w + 2 * k - m
    weight = p_poly(k, 1 + a - w, -m)
    lhs = terminating_sum(
        WeightedSeries(
            (Fraction(1, 2) + k + a / 2, 1 + k + a / 2, 1 - k + a - b - c, 1 + a - w, -m),
            (1 + a - b, 1 + a - c, 1 + shift / 2, Fraction(3, 2) + shift / 2),
            weight,
            normalized=False,
        )
    )
    prefactor = pochhammer(1 + a - w, 1 + 2 * k) * _bracket((w,), (w - a - 1 - 2 * k,), m)
    bold = bold_q(BoldQFamily("BQ2", k, a, b, c))
    rhs = prefactor * _bailey_rhs_series(m, a, b, c, w, bold)
    return make_report(
        "bailey2",
        [lhs],
        [rhs],
        k=k,
        params={"a": a, "b": b, "c": c, "w": w},
        order=None,
        started=started,
        extra={"m": m},
    )


# ── extended Kummer summation ──────────────────────────────────────────


def kummer_rhs(k: int, a: Scalar, b: Scalar) -> Fraction:
    """
    Closed form of the Q2-weighted 2F1 at −1 for even integer a = 2h.

    (2k)!/k! · (1+h−b)_h / (1+k+h)_{k+h}, with (1+h−b)_h read as
    1/(1+a−b)_{−h} when h < 0.

    Raises:
        DomainError: If a is not an even integer, k + h < 0, or a factor vanishes.
    """
    a, b = Fraction(a), Fraction(b)
    if a.denominator != 1 or a.numerator % 2:
        raise DomainError(f"the closed form needs an even integer a, got {format_exact(a)}")
    h = int(a) // 2
    if k + h < 0:
        raise DomainError(f"the closed form needs k + a/2 >= 0, got {k + h}")
    if h >= 0:
        numerator = pochhammer(1 + h - b, h)
    else:
        denominator = pochhammer(1 + a - b, -h)
        if denominator == 0:
            raise DomainError("(1+a−b)_{−a/2} vanishes")
        numerator = 1 / denominator
    return Fraction(factorial(2 * k), factorial(k)) * numerator / pochhammer(1 + k + h, k + h)


def kummer_series(k: int, a: Scalar, b: Scalar) -> WeightedSeries:
    """Σ (a)_n (b)_n / (n! (1+a−b)_n) Q_k(n; a; b, (1+a)/2) (−1)^n."""
    a, b = _exact(a), _exact(b)
    weight = q_poly(QFamily("Q2", k, a, b, (1 + a) / 2))
    return WeightedSeries((a, b), (1 + a - b,), weight)


def verify_kummer_ext(
    k: int,
    a: Scalar,
    b: Scalar,
    *,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    max_terms: int = 20000,
) -> VerificationReport:
    """
    Sum the Q2-weighted 2F1 at x = −1 numerically and compare with kummer_rhs.

    Restricted to b < −k; the pass threshold is 10^(−bits/10).
    """
    started = time.perf_counter()
    a, b = _exact(a), _exact(b)
    if not b < -k:
        raise DomainError(f"the extended Kummer check needs b < −k, got b = {format_exact(b)}")
    bits = check_precision(precision_bits)
    with mpmath.workprec(bits):
        tol = numeric_threshold(bits, 0.1)
        lhs = eval_numeric(kummer_series(k, a, b), -1, max_terms, tol / 100, accelerate=True)
        rhs = kummer_rhs(k, a, b)
        report = make_report(
            "kummer",
            [lhs],
            [rhs],
            k=k,
            params={"a": a, "b": b},
            order=None,
            tol=tol,
            started=started,
        )
    logger.debug("kummer k={} a={} b={} -> {}", k, a, b, report.passed)
    return report


# ── registry ───────────────────────────────────────────────────────────


@dataclass(frozen=True)
class SummationCase:
    """One fully specified summation run."""

    name: str
    k: int = 0
    sizes: Mapping[str, int] = field(default_factory=dict)
    params: Mapping[str, Scalar] = field(default_factory=dict)
    variant: str | None = None
    precision_bits: int = DEFAULT_PRECISION_BITS
    max_terms: int = 20000


type Runner = Callable[[SummationCase, Callable[[str], Scalar], int], VerificationReport]


@dataclass(frozen=True)
class SummationSpec:
    """
    A registry entry.

    ``variants`` maps each variant name to the parameters it adds to
    ``param_names``; an empty mapping means the summation has no variants.
    """

    name: str
    param_names: tuple[str, ...]
    size_name: str | None
    runner: Runner
    summary: str
    variants: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    uses_k: bool = True

    def names_for(self, variant: str | None) -> tuple[str, ...]:
        if not self.variants:
            return self.param_names
        if variant not in self.variants:
            raise ParameterError(
                f"{self.name} needs a variant, one of {', '.join(self.variants)}"
            )
        return (*self.param_names, *self.variants[variant])

    def default_variant(self) -> str | None:
        return next(iter(self.variants), None)


def _optional(p: Callable[[str], Scalar], case: SummationCase, name: str) -> Scalar | None:
    return p(name) if name in case.params else None


SUMMATIONS: dict[str, SummationSpec] = {
    spec.name: spec
    for spec in (
        SummationSpec(
            "sheppard",
            ("a", "b", "d", "e"),
            "n",
            lambda case, p, n: verify_sheppard(n, p("a"), p("b"), p("d"), p("e")),
            "terminating 3F2 transformation",
            uses_k=False,
        ),
        SummationSpec(
            "whipple43",
            ("a", "b", "c", "d", "e"),
            "n",
            lambda case, p, n: verify_whipple43(
                n, p("a"), p("b"), p("c"), p("d"), p("e"), _optional(p, case, "f")
            ),
            "balanced terminating 4F3 transformation",
            uses_k=False,
        ),
        SummationSpec(
            "whipple43-limit",
            ("a", "b", "d", "e"),
            "n",
            lambda case, p, n: verify_whipple_limit(n, p("a"), p("b"), p("d"), p("e")),
            "the 4F3 transformation reduces to the 3F2 one as C grows",
            uses_k=False,
        ),
        SummationSpec(
            "r-forms",
            ("a", "b"),
            "n",
            lambda case, p, n: verify_r_forms(
                case.variant or "Q2", n, case.k, p("a"), p("b"), _optional(p, case, "c")
            ),
            "three expressions of R_k(n)",
            variants={"Q2": ("c",), "Q3": ()},
        ),
        SummationSpec(
            "ext-whipple",
            ("a", "b", "c", "d", "e"),
            "N",
            lambda case, p, n: verify_ext_whipple(
                case.k, n, p("a"), p("b"), p("c"), p("d"), p("e"), _optional(p, case, "f")
            ),
            "Q2-weighted very-well-poised 7F6 transformation",
            variants={"i": (), "ii": ("f",)},
        ),
        SummationSpec(
            "ext-whipple-limit",
            ("a", "b", "c", "d", "e"),
            "N",
            lambda case, p, n: verify_ext_whipple_limit(
                case.k, n, p("a"), p("b"), p("c"), p("d"), p("e")
            ),
            "the f variant tends to the plain one as f grows",
        ),
        SummationSpec(
            "dougall",
            ("a", "b", "d", "e"),
            "N",
            lambda case, p, n: verify_dougall(
                case.k, n, p("a"), p("b"), p("d"), p("e"), _optional(p, case, "f")
            ),
            "extended Whipple transformation on the Dougall line",
            variants={"i": (), "ii": ("f",)},
        ),
        SummationSpec(
            "bailey1",
            ("a", "b", "c", "w"),
            "m",
            lambda case, p, n: verify_bailey1(
                case.k, n, p("a"), p("b"), p("c"), p("w"), _optional(p, case, "d")
            ),
            "terminating 5F4 with a Q2-weighted 4F3 sum",
            variants={"i": (), "ii": ("d",)},
        ),
        SummationSpec(
            "bailey2",
            ("a", "b", "c", "w"),
            "m",
            lambda case, p, n: verify_bailey2(case.k, n, p("a"), p("b"), p("c"), p("w")),
            "P_k-weighted terminating 5F4 with a bold-Q2-weighted 4F3 sum",
        ),
        SummationSpec(
            "gs-pairing",
            ("a", "b"),
            "N",
            lambda case, p, n: gs_pair(
                case.variant or "thmA2",
                case.k,
                n,
                {name: p(name) for name in SUMMATIONS["gs-pairing"].names_for(case.variant)},
            ),
            "coefficient pairing of a base theorem with its k = 0 companion",
            variants={
                "thmA2": ("c", "e", "f"),
                "thmB2": ("c", "e", "f", "g"),
                "thmA3": ("e",),
                "thmB3": ("e", "f"),
            },
        ),
        SummationSpec(
            "kummer",
            ("a", "b"),
            None,
            lambda case, p, n: verify_kummer_ext(
                case.k,
                p("a"),
                p("b"),
                precision_bits=case.precision_bits,
                max_terms=case.max_terms,
            ),
            "Q2-weighted 2F1 at −1 for even integer a",
        ),
    )
}


def summation_spec(name: str) -> SummationSpec:
    """
    Look up a summation by name.

    Raises:
        ParameterError: For an unknown name.
    """
    try:
        return SUMMATIONS[name]
    except KeyError:
        raise ParameterError(
            f"unknown summation '{name}'; choose one of {', '.join(SUMMATIONS)}"
        ) from None


def run_summation(case: SummationCase) -> VerificationReport:
    """
    Dispatch one case to its verifier after checking names and sizes.

    Raises:
        ParameterError: For an unknown summation, a missing variant, size or
            parameter, or an unexpected parameter.
        DomainError: For a negative k or size, or parameters the verifier rejects.
    """
    spec = summation_spec(case.name)
    variant = case.variant if case.variant is not None else spec.default_variant()
    case = replace(case, variant=variant)
    names = spec.names_for(variant)
    optional = {"f"} if case.name == "whipple43" else set()
    unknown = set(case.params) - set(names) - optional
    if unknown:
        raise ParameterError(f"{case.name} does not take {', '.join(sorted(unknown))}")
    missing = [name for name in names if name not in case.params]
    if missing:
        raise ParameterError(f"{case.name} needs {', '.join(missing)}")
    if case.k < 0:
        raise DomainError(f"k must be nonnegative, got {case.k}")
    size = 0
    if spec.size_name is not None:
        if spec.size_name not in case.sizes:
            raise ParameterError(f"{case.name} needs --{spec.size_name}")
        size = case.sizes[spec.size_name]

    def param(name: str) -> Scalar:
        return _exact(case.params[name])

    report = spec.runner(case, param, size)
    logger.debug("summation {} k={} -> {}", case.name, case.k, report.passed)
    return report
