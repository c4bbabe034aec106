"""
Lifting maps φ_{l,m;x0}(x) = C_{l,m} (−x/x0)^l / (1 − x/x0)^{l+m}.

The three maps behind the quadratic and cubic transformations are exported as
QUADRATIC, CUBIC and CUBIC_SECOND; any other (l, m, x0) is accepted for key
lemma checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from hyperlift.core.errors import DomainError
from hyperlift.core.exact import Scalar
from hyperlift.core.hyperseries import TruncatedSeries


@dataclass(frozen=True)
class LiftingMap:
    """The triple (l, m; x0)."""

    l: int  # noqa: E741
    m: int
    x0: Fraction

    def __post_init__(self) -> None:
        if self.l < 1 or self.m < 1:
            raise DomainError(f"lifting map needs l, m >= 1, got ({self.l}, {self.m})")
        object.__setattr__(self, "x0", Fraction(self.x0))
        if self.x0 == 0:
            raise DomainError("lifting map needs x0 != 0")

    @property
    def constant(self) -> Fraction:
        """C_{l,m} = (l+m)^{l+m} / (l^l m^m)."""
        return Fraction((self.l + self.m) ** (self.l + self.m), self.l**self.l * self.m**self.m)

    def raising_root(self, a: Scalar) -> Scalar:
        """la/(l+m), the root of the K factor in the k-raising relations."""
        return self.l * a / (self.l + self.m)

    @property
    def companion_slope(self) -> Fraction:
        """(m/l)/x0, so that the companion factor is (1 + slope·x)."""
        return Fraction(self.m, self.l) / self.x0

    def __str__(self) -> str:
        return f"({self.l},{self.m};{self.x0})"


QUADRATIC = LiftingMap(1, 1, Fraction(1))
CUBIC = LiftingMap(1, 2, Fraction(1, 4))
CUBIC_SECOND = LiftingMap(2, 1, Fraction(4))


def lifting_series(lifting: LiftingMap, order: int) -> TruncatedSeries:
    """
    Exact expansion of φ(x) through x^order.

    The coefficient of x^{l+j} is C (−1)^l x0^{−l−j} binom(l+m−1+j, j); the series
    has an l-fold zero at the origin.
    """
    if order < 0:
        raise DomainError(f"order must be nonnegative, got {order}")
    l, m, x0 = lifting.l, lifting.m, lifting.x0
    coefficients = [Fraction(0)] * (order + 1)
    lead = lifting.constant * (-1) ** l
    for power in range(l, order + 1):
        j = power - l
        coefficients[power] = lead * comb(l + m - 1 + j, j) / x0**power
    return TruncatedSeries(tuple(coefficients))
