"""
Registry of transformation identities.

Nine theorems (families A, B and C over the quadratic and the two cubic
lifting maps) plus their named specializations. Each entry knows its parameter
names, whether it pins k, and whether its parameters force numeric mode; the
builders turn a parameter record into a TransformIdentity.

The left- and right-hand sides are built from separate parameter records, so a
right-hand side can be perturbed on its own (the negative control).
"""

from __future__ import annotations

import time
from collections.abc import Callable, Mapping
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any

import mpmath
from loguru import logger

from hyperlift.core.errors import DomainError, ParameterError
from hyperlift.core.exact import (
    DEFAULT_PRECISION_BITS,
    Scalar,
    check_precision,
    parse_exact,
    to_approx,
)
from hyperlift.core.hyperseries import (
    ParamArray,
    WeightedSeries,
    cancel_common_pairs,
    delta_array,
    explicit_pair_form,
    merge_unit_pairs,
    same_parameters,
    series_coefficients,
)
from hyperlift.core.lifting import LiftingMap
from hyperlift.core.models import VerificationReport
from hyperlift.core.qpoly import (
    LIFTINGS,
    BoldQFamily,
    BoldTag,
    QFamily,
    QTag,
    bold_q,
    q_poly,
)
from hyperlift.core.reporting import make_report, numeric_threshold
from hyperlift.core.transforms import IdentityKind, Prefactor, TransformIdentity

type Params = Mapping[str, Scalar]

_BOLD: dict[QTag, BoldTag] = {"Q2": "BQ2", "Q3": "BQ3", "Q3p": "BQ3p"}


@dataclass(frozen=True)
class _Sides:
    lhs: WeightedSeries
    prefactors: tuple[Prefactor, ...]
    rhs: WeightedSeries
    expected_excess: Scalar


type Builder = Callable[[int, Params, Params], _Sides]


@dataclass(frozen=True)
class IdentitySpec:
    """A registry entry."""

    name: str
    family: QTag
    kind: IdentityKind
    param_names: tuple[str, ...]
    builder: Builder
    summary: str
    fixed_k: int | None = None
    numeric: bool = False

    @property
    def lifting(self) -> LiftingMap:
        return LIFTINGS[self.family]


# ── shared pieces of the theorem statements ────────────────────────────


def _base_lower(tag: QTag, k: int, p: Params) -> ParamArray:
    a, b = p["a"], p["b"]
    if tag == "Q2":
        return (1 + a - b, 1 + a - p["c"])
    return ((3 + 2 * k + 2 * a + 2 * b) / 4, (3 + 2 * k + 2 * a - 2 * b) / 4)


def _quadratic_extra(tag: QTag, k: int, p: Params) -> ParamArray:
    """The (1−k+a−b−c) upper parameter that only the quadratic theorems carry."""
    if tag != "Q2":
        return ()
    return (1 - k + p["a"] - p["b"] - p["c"],)


def _q_family(tag: QTag, k: int, q: Params, with_d: bool) -> QFamily:
    return QFamily(tag, k, q["a"], q["b"], q.get("c"), q["d"] if with_d else None)


def _theorem_a(tag: QTag, with_d: bool) -> Builder:
    """Families A (no d) and B (with the extra pair (k+d; d))."""

    def build(k: int, p: Params, q: Params) -> _Sides:
        lifting = LIFTINGS[tag]
        upper = (*delta_array(lifting.l + lifting.m, p["a"]), *_quadratic_extra(tag, k, p))
        lower = _base_lower(tag, k, p)
        if with_d:
            upper, lower = (*upper, k + p["d"]), (*lower, p["d"])
        f = _q_family(tag, k, q, with_d)
        rhs = WeightedSeries((f.a, *f.rhs_gamma()), f.rhs_delta(), q_poly(f))
        excess = Fraction(1, 2) if with_d else Fraction(1, 2) + k
        return _Sides(
            WeightedSeries(upper, lower), (Prefactor.at_root(lifting.x0, q["a"]),), rhs, excess
        )

    return build


def _theorem_c(tag: QTag) -> Builder:
    """Family C: bold weights and the double prefactor."""

    def build(k: int, p: Params, q: Params) -> _Sides:
        lifting = LIFTINGS[tag]
        upper = (
            *delta_array(lifting.l + lifting.m, 1 + 2 * k + p["a"]),
            *_quadratic_extra(tag, k, p),
        )
        f = BoldQFamily(_BOLD[tag], k, q["a"], q["b"], q.get("c"))
        rhs = WeightedSeries((f.a, *f.rhs_gamma()), f.rhs_delta(), bold_q(f))
        prefactors = (
            Prefactor(lifting.companion_slope, -1 - 2 * k),
            Prefactor.at_root(lifting.x0, 1 + 2 * k + q["a"]),
        )
        lhs = WeightedSeries(upper, _base_lower(tag, k, p))
        return _Sides(lhs, prefactors, rhs, -Fraction(1, 2) - k)

    return build


# ── specializations ────────────────────────────────────────────────────


def _linconstraint(k: int, p: Params, q: Params) -> _Sides:
    b, c = p["b"], p["c"]
    lhs = WeightedSeries(
        (-(b + c) / 2, (1 - b - c) / 2, -2 * b - 2 * c), (1 - 2 * b - c, 1 - b - 2 * c)
    )
    b, c = q["b"], q["c"]
    rhs = WeightedSeries(
        (-b - c, b, c, 1 - b, 1 - c), (1 - 2 * b - c, 1 - b - 2 * c, -c, -b)
    )
    return _Sides(lhs, (Prefactor.at_root(1, -b - c),), rhs, Fraction(3, 2))


def _lastmin2(k: int, p: Params, q: Params) -> _Sides:
    a, b = p["a"], p["b"]
    lhs = WeightedSeries((a / 2, (1 - 2 * k + a - 2 * b) / 2), (1 + a - b,))
    a, b = q["a"], q["b"]
    weight = q_poly(QFamily("Q2", k, a, b, (1 + a) / 2))
    rhs = WeightedSeries((a, b), (1 + a - b,), weight)
    return _Sides(lhs, (Prefactor.at_root(1, a),), rhs, Fraction(1, 2) + k)


def _lastmin3(k: int, p: Params, q: Params) -> _Sides:
    a = p["a"]
    lhs = WeightedSeries((a / 3, (1 + a) / 3), ((5 + 6 * k + 4 * a) / 6,))
    a = q["a"]
    weight = q_poly(QFamily("Q3", k, a, (1 + 6 * k + 2 * a) / 6))
    rhs = WeightedSeries((a, (1 - 6 * k - a) / 3), ((5 + 6 * k + 4 * a) / 6,), weight)
    return _Sides(lhs, (Prefactor.at_root(Fraction(1, 4), a),), rhs, Fraction(1, 2) + k)


def _rrplus(k: int, p: Params, q: Params) -> _Sides:
    a, b, d = p["a"], p["b"], p["d"]
    lhs = WeightedSeries((a / 2, (1 - 2 * k + a - 2 * b) / 2, k + d), (1 + a - b, d))
    a, b, d = q["a"], q["b"], q["d"]
    weight = q_poly(QFamily("Q2", k, a, b, (1 + a) / 2, d))
    rhs = WeightedSeries((a, b), (1 + a - b,), weight)
    return _Sides(lhs, (Prefactor.at_root(1, a),), rhs, Fraction(1, 2))


def _sign(p: Params) -> int:
    sign = p["sign"]
    if sign not in (1, -1):
        raise ParameterError(f"sign must be 1 or -1, got {sign}")
    return int(sign)


def _linconstraint2(k: int, p: Params, q: Params) -> _Sides:
    s = _sign(p)
    root3 = mpmath.sqrt(3)
    a = (-1 + s * root3) / 2
    b = p["b"]
    lhs = WeightedSeries(
        delta_array(3, a), (1 + s * root3 / 4 + b / 2, 1 + s * root3 / 4 - b / 2)
    )
    b = q["b"]
    rhs = WeightedSeries(
        (
            a,
            (-1 - 2 * b) / 2,
            (-1 + 2 * b) / 2,
            1 + s * root3 * (1 - 2 * b) / 6,
            1 + s * root3 * (1 + 2 * b) / 6,
        ),
        (
            1 + s * root3 / 4 + b / 2,
            1 + s * root3 / 4 - b / 2,
            s * root3 * (1 + 2 * b) / 6,
            s * root3 * (1 - 2 * b) / 6,
        ),
    )
    return _Sides(lhs, (Prefactor.at_root(Fraction(1, 4), a),), rhs, Fraction(3, 2))


def curious_parameters(theta: Scalar) -> tuple[Any, Any]:
    """(a, b) of the first cubic theorem at k = 1 along the curious curve, θ = theta·π."""
    sine, cosine = mpmath.sinpi(to_approx(theta)), mpmath.cospi(to_approx(theta))
    return (-1 + 2 * mpmath.sqrt(3) * sine) / 2, cosine


def _curious_lower(theta: Any) -> ParamArray:
    sixth = mpmath.mpf(1) / 6
    return (1 + mpmath.sinpi(theta + sixth), 1 + mpmath.sinpi(theta - sixth))


def _curious(k: int, p: Params, q: Params) -> _Sides:
    theta = to_approx(p["theta"])
    a, _ = curious_parameters(theta)
    lhs = WeightedSeries(delta_array(3, a), _curious_lower(theta))
    theta = to_approx(q["theta"])
    a, cosine = curious_parameters(theta)
    third = mpmath.sqrt(3) * mpmath.sinpi(theta) / 3
    rhs = WeightedSeries(
        (a, (-1 - 2 * cosine) / 2, (-1 + 2 * cosine) / 2, (3 + 2 * third) / 2),
        (*_curious_lower(theta), (-1 + 2 * third) / 2),
    )
    return _Sides(lhs, (Prefactor.at_root(Fraction(1, 4), a),), rhs, Fraction(3, 2))


# ── the registry ───────────────────────────────────────────────────────


def _spec(
    name: str, family: QTag, names: str, builder: Builder, summary: str, **kw: Any
) -> IdentitySpec:
    kind: IdentityKind = "theorem" if name.startswith("thm") else "specialization"
    return IdentitySpec(name, family, kind, tuple(names.split()), builder, summary, **kw)


IDENTITIES: dict[str, IdentitySpec] = {
    spec.name: spec
    for spec in (
        _spec("thmA2", "Q2", "a b c", _theorem_a("Q2", False), "quadratic, Q_k^(2) weight"),
        _spec("thmA3", "Q3", "a b", _theorem_a("Q3", False), "first cubic, Q_k^(3) weight"),
        _spec("thmA3p", "Q3p", "a b", _theorem_a("Q3p", False), "second cubic, Q_k^(3') weight"),
        _spec("thmB2", "Q2", "a b c d", _theorem_a("Q2", True), "quadratic with pair (k+d; d)"),
        _spec("thmB3", "Q3", "a b d", _theorem_a("Q3", True), "first cubic with pair (k+d; d)"),
        _spec("thmB3p", "Q3p", "a b d", _theorem_a("Q3p", True), "second cubic with (k+d; d)"),
        _spec("thmC2", "Q2", "a b c", _theorem_c("Q2"), "quadratic companion, bold weight"),
        _spec("thmC3", "Q3", "a b", _theorem_c("Q3"), "first cubic companion, bold weight"),
        _spec("thmC3p", "Q3p", "a b", _theorem_c("Q3p"), "second cubic companion"),
        _spec("niblett", "Q2", "a b c", _theorem_a("Q2", False), "quadratic at k = 1", fixed_k=1),
        _spec("linconstraint", "Q2", "b c", _linconstraint, "quadratic, a = -b-c", fixed_k=1),
        _spec(
            "linconstraint2", "Q3", "b sign", _linconstraint2,
            "first cubic, a = -1/2 ± √3/2", fixed_k=1, numeric=True,
        ),
        _spec(
            "curious", "Q3", "theta", _curious,
            "first cubic on the curve with merged pairs, θ = theta·π", fixed_k=1, numeric=True,
        ),
        _spec("lastmin2", "Q2", "a b", _lastmin2, "quadratic, c = 1/2 + a/2"),
        _spec("lastmin3", "Q3", "a", _lastmin3, "first cubic, b = 1/6 + k + a/3"),
        _spec("rrplus", "Q2", "a b d", _rrplus, "quadratic with (k+d; d), c = 1/2 + a/2"),
    )
}


def identity_spec(name: str) -> IdentitySpec:
    """Look up a registry entry; ParameterError for unknown names."""
    try:
        return IDENTITIES[name]
    except KeyError:
        known = ", ".join(IDENTITIES)
        raise ParameterError(f"unknown identity '{name}' (known: {known})") from None


def _coerce(spec: IdentitySpec, values: Mapping[str, Scalar | str]) -> dict[str, Scalar]:
    unknown = sorted(set(values) - set(spec.param_names))
    if unknown:
        raise ParameterError(f"{spec.name} does not take {', '.join(unknown)}")
    missing = [name for name in spec.param_names if name not in values]
    if missing:
        raise ParameterError(f"{spec.name} needs {', '.join(missing)}")
    record: dict[str, Scalar] = {}
    for name in spec.param_names:
        value = values[name]
        record[name] = parse_exact(value) if isinstance(value, str) else value
        if isinstance(record[name], int):
            record[name] = Fraction(record[name])
    return record


def build_identity(
    name: str,
    k: int,
    params: Mapping[str, Scalar | str],
    *,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    rhs_overrides: Mapping[str, Scalar | str] | None = None,
) -> TransformIdentity:
    """
    Instantiate a registry identity.

    Args:
        name: Registry name, e.g. "thmA2" or "curious".
        k: Extension degree; identities with a pinned k reject any other value.
        params: Parameter record, rationals or their text form.
        precision_bits: Working precision for numeric identities.
        rhs_overrides: Offsets added to parameters on the right-hand side only.

    Raises:
        ParameterError: Unknown identity or parameter names, malformed values.
        DomainError: Singular parameters or a k the identity does not allow.
    """
    spec = identity_spec(name)
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    if spec.fixed_k is not None and k != spec.fixed_k:
        raise DomainError(f"{name} is the k = {spec.fixed_k} case, got k = {k}")
    lhs_params = _coerce(spec, params)
    rhs_params = dict(lhs_params)
    for key, delta in (rhs_overrides or {}).items():
        if key not in lhs_params:
            raise ParameterError(f"cannot perturb '{key}': {name} has no such parameter")
        if key == "sign":
            raise DomainError("the sign of a numeric specialization cannot be perturbed")
        offset = parse_exact(delta) if isinstance(delta, str) else delta
        rhs_params[key] = lhs_params[key] + offset
    with mpmath.workprec(check_precision(precision_bits)):
        if spec.numeric:
            p = {n: v if n == "sign" else to_approx(v) for n, v in lhs_params.items()}
            q = {n: v if n == "sign" else to_approx(v) for n, v in rhs_params.items()}
            sides = spec.builder(k, p, q)
        else:
            sides = spec.builder(k, lhs_params, rhs_params)
    logger.debug("build_identity {} k={} {}", name, k, lhs_params)
    return TransformIdentity(
        name=name,
        k=k,
        params=lhs_params,
        lifting=spec.lifting,
        lhs=sides.lhs,
        prefactors=sides.prefactors,
        rhs=sides.rhs,
        kind=spec.kind,
        expected_excess=sides.expected_excess,
        precision_bits=precision_bits,
        summary=spec.summary,
    )


def verify_curious_merge(
    theta: Scalar, order: int = 12, precision_bits: int = DEFAULT_PRECISION_BITS
) -> VerificationReport:
    """
    Rebuild the curious 4F3 from the first cubic theorem at k = 1.

    The theorem's weighted 5F4 is put in explicit-pair form and its two
    unit-separated pairs merged; the result must carry the displayed 4F3
    arrays and the same coefficients as the unmerged series. Parameters common
    to both arrays are cancelled on each side first, so an integer theta
    compares the 3F2 both sides reduce to.
    """
    started = time.perf_counter()
    with mpmath.workprec(check_precision(precision_bits)):
        a, b = curious_parameters(theta)
        f = QFamily("Q3", 1, a, b)
        weighted = WeightedSeries((f.a, *f.rhs_gamma()), f.rhs_delta(), q_poly(f))
        merged, did_merge = merge_unit_pairs(explicit_pair_form(weighted, precision_bits))
        displayed = build_identity(
            "curious", 1, {"theta": theta}, precision_bits=precision_bits
        ).rhs
        tol = numeric_threshold(precision_bits)
        reduced = cancel_common_pairs(merged, tol)
        displayed = cancel_common_pairs(displayed, tol)
        report = make_report(
            "curious-merge",
            series_coefficients(weighted, order).coefficients,
            series_coefficients(merged, order).coefficients,
            k=1,
            params={"theta": theta},
            order=order,
            tol=tol,
            started=started,
            extra={"upper": len(reduced.upper), "lower": len(reduced.lower)},
        )
        arrays_match = same_parameters(reduced.upper, displayed.upper, tol) and same_parameters(
            reduced.lower, displayed.lower, tol
        )
    if not (did_merge and arrays_match):
        return replace(report, passed=False, detail="merged arrays differ from the displayed 4F3")
    return report
