"""
Poisedness classification of an {r+1}F{r} parameter array.

With a_0 distinguished among the upper parameters and the rest paired with the
lower ones, the series is well-poised when every pair sums to a_0 + 1, nearly
poised when exactly one of the r+1 sums (counting a_0 + 1 itself) differs,
(M, N)-poised when M·a_0 + N = M·a_i + N·b_i throughout, and very well poised
when it is well-poised with a pair equal to (1 + a_0/2; a_0/2). Every choice of
a_0 and every pairing are considered.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from math import gcd
from typing import Any

from hyperlift.core.errors import DomainError
from hyperlift.core.exact import Scalar, align, is_close
from hyperlift.core.hyperseries import WeightedSeries, parametric_excess, same_parameters

# (M, N) pairs tried for (M,N)-poisedness, smallest first; (1, 1) is plain well-poisedness.
_MN_CANDIDATES = sorted(
    ((m, n) for m in range(1, 5) for n in range(1, 5) if gcd(m, n) == 1 and (m, n) != (1, 1)),
    key=lambda pair: (pair[0] + pair[1], pair[0]),
)


@dataclass(frozen=True)
class PoisednessReport:
    """Outcome of classify_poisedness."""

    excess: Scalar
    well_poised: bool
    nearly_poised: bool
    mn_poised: tuple[int, int] | None
    very_well_poised: bool


def _without(values: Sequence[Scalar], index: int) -> list[Scalar]:
    return [v for i, v in enumerate(values) if i != index]


def _leftover(pool: Sequence[Scalar], wanted: Sequence[Scalar], tol: Any) -> list[Scalar] | None:
    """Remove ``wanted`` from ``pool`` as a multiset; None if something is missing."""
    remaining = list(pool)
    for value in wanted:
        for index, candidate in enumerate(remaining):
            if is_close(value, candidate, tol):
                del remaining[index]
                break
        else:
            return None
    return remaining


def _nearly_poised(upper: Sequence[Scalar], lower: Sequence[Scalar], tol: Any) -> bool:
    for i0, a0 in enumerate(upper):
        rest = _without(upper, i0)
        target = a0 + 1
        # a_0 + 1 is the odd sum out; all pairs share another common sum.
        for b in lower:
            for a in rest:
                common = a + b
                if is_close(common, target, tol):
                    continue
                if same_parameters(rest, [common - x for x in lower], tol):
                    return True
        # exactly one pair misses a_0 + 1.
        for j, b_odd in enumerate(lower):
            others = _without(lower, j)
            left = _leftover(rest, [target - x for x in others], tol)
            if left is not None and len(left) == 1 and not is_close(left[0] + b_odd, target, tol):
                return True
    return False


def _mn_poised(
    upper: Sequence[Scalar], lower: Sequence[Scalar], tol: Any
) -> tuple[int, int] | None:
    for m, n in _MN_CANDIDATES:
        for i0, a0 in enumerate(upper):
            targets = [(m * a0 + n - n * b) / m for b in lower]
            if same_parameters(_without(upper, i0), targets, tol):
                return (m, n)
    return None


def classify_poisedness(s: WeightedSeries, tol: Any = None) -> PoisednessReport:
    """
    Classify the parameter arrays of ``s``.

    Args:
        s: Series in explicit-pair form (constant weight).
        tol: Comparison tolerance for numeric entries; exact entries compare exactly.

    Raises:
        DomainError: If ``s`` still carries a nonconstant weight.
    """
    if s.weight.degree > 0:
        raise DomainError("classify_poisedness needs explicit-pair form (constant weight)")
    values = align(*s.upper, *s.lower)
    upper, lower = list(values[: len(s.upper)]), list(values[len(s.upper) :])
    excess = parametric_excess(s)
    if len(upper) != len(lower) + 1:
        return PoisednessReport(excess, False, False, None, False)

    well = False
    very_well = False
    for i0, a0 in enumerate(upper):
        rest = _without(upper, i0)
        if not same_parameters(rest, [a0 + 1 - b for b in lower], tol):
            continue
        well = True
        half = a0 / 2
        if any(is_close(a, 1 + half, tol) for a in rest) and any(
            is_close(b, half, tol) for b in lower
        ):
            very_well = True
            break
    nearly = False if well else _nearly_poised(upper, lower, tol)
    return PoisednessReport(
        excess=excess,
        well_poised=well,
        nearly_poised=nearly,
        mn_poised=_mn_poised(upper, lower, tol),
        very_well_poised=very_well,
    )
