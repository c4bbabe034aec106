"""Tests for exact scalar parsing, formatting and Pochhammer symbols."""

from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperlift.core.errors import DomainError, ParameterError
from hyperlift.core.exact import (
    align,
    check_precision,
    format_exact,
    is_close,
    is_nonpositive_integer,
    nonpositive_integer_value,
    parse_exact,
    pochhammer,
    snap_rational,
)


class TestParseExact:
    def test_integer(self) -> None:
        assert parse_exact("3") == Fraction(3)

    def test_fraction_is_reduced(self) -> None:
        assert parse_exact("6/4") == Fraction(3, 2)

    def test_negative_and_unicode_minus(self) -> None:
        assert parse_exact("-7/2") == Fraction(-7, 2)
        assert parse_exact("−7/2") == Fraction(-7, 2)

    def test_decimal_rejected(self) -> None:
        with pytest.raises(ParameterError):
            parse_exact("0.5")

    def test_zero_denominator_rejected(self) -> None:
        with pytest.raises(ParameterError):
            parse_exact("1/0")

    def test_parameter_error_is_domain_error(self) -> None:
        with pytest.raises(DomainError):
            parse_exact("x")


@given(st.fractions(max_denominator=1000))
def test_format_then_parse_is_identity(value: Fraction) -> None:
    assert parse_exact(format_exact(value)) == value


def test_format_exact_integer_has_no_denominator() -> None:
    assert format_exact(Fraction(4)) == "4"
    assert format_exact(-3) == "-3"


class TestPochhammer:
    def test_known_value(self) -> None:
        assert pochhammer(3, 4) == 360

    def test_empty_product(self) -> None:
        assert pochhammer(Fraction(1, 3), 0) == 1

    def test_hits_zero_at_nonpositive_integer(self) -> None:
        assert pochhammer(-2, 3) == 0
        assert pochhammer(-2, 2) == 2

    def test_fraction(self) -> None:
        assert pochhammer(Fraction(1, 2), 2) == Fraction(3, 4)

    def test_negative_length_rejected(self) -> None:
        with pytest.raises(DomainError):
            pochhammer(1, -1)

    @given(st.fractions(max_denominator=50), st.integers(0, 6), st.integers(0, 6))
    def test_splits(self, c: Fraction, m: int, n: int) -> None:
        assert pochhammer(c, m + n) == pochhammer(c, m) * pochhammer(c + m, n)


def test_nonpositive_integer_detection() -> None:
    assert is_nonpositive_integer(0)
    assert is_nonpositive_integer(Fraction(-3))
    assert not is_nonpositive_integer(Fraction(-1, 2))
    assert not is_nonpositive_integer(1)
    assert nonpositive_integer_value(Fraction(-4)) == 4
    assert nonpositive_integer_value(Fraction(1, 2)) is None


def test_align_keeps_exact_values_exact() -> None:
    values = align(Fraction(1, 3), 2)
    assert values == (Fraction(1, 3), 2)


def test_align_promotes_mixed_values() -> None:
    with mpmath.workprec(128):
        x, y = align(Fraction(1, 4), mpmath.sqrt(2))
        assert isinstance(x, mpmath.mpf)
        assert is_close(x, mpmath.mpf("0.25"))
        assert is_close(y * y, 2)


def test_check_precision_minimum() -> None:
    assert check_precision(64) == 64
    with pytest.raises(DomainError):
        check_precision(32)


def test_snap_rational_recovers_small_fraction() -> None:
    with mpmath.workprec(128):
        assert snap_rational(mpmath.mpf(2) / 7) == Fraction(2, 7)
