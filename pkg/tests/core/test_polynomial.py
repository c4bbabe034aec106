"""Tests for Polynomial arithmetic, rendering and roots."""

from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperlift.core.errors import DomainError
from hyperlift.core.exact import is_close
from hyperlift.core.polynomial import Polynomial, poly_arith, poly_eval, poly_roots

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
polys = st.lists(small, max_size=4).map(lambda cs: Polynomial(tuple(cs)))


def test_trailing_zeros_stripped() -> None:
    p = Polynomial((Fraction(1), Fraction(2), Fraction(0)))
    assert p.degree == 1
    assert Polynomial.zero().degree == -1


def test_str_matches_printed_form() -> None:
    p = Polynomial((Fraction(1), Fraction(5, 6), Fraction(1, 6)))
    assert str(p) == "(1/6)n^2 + (5/6)n + 1"


def test_str_integer_and_negative_coefficients() -> None:
    p = Polynomial((Fraction(-3), Fraction(1), Fraction(12)))
    assert str(p) == "12n^2 + n - 3"
    assert str(-Polynomial.variable()) == "-n"
    assert str(Polynomial.zero()) == "0"


def test_from_roots() -> None:
    p = Polynomial.from_roots([1, 2])
    assert p.coefficients == (Fraction(2), Fraction(-3), Fraction(1))


def test_divmod_exact() -> None:
    numerator = Polynomial.from_roots([1, 2, 3])
    quotient, remainder = divmod(numerator, Polynomial.from_roots([2]))
    assert remainder.is_zero
    assert quotient == Polynomial.from_roots([1, 3])


def test_divmod_by_zero_rejected() -> None:
    with pytest.raises(DomainError):
        divmod(Polynomial.one(), Polynomial.zero())


def test_compose_affine() -> None:
    p = Polynomial((Fraction(0), Fraction(0), Fraction(1)))  # n^2
    assert p.compose_affine(-1, 3) == Polynomial((Fraction(9), Fraction(-6), Fraction(1)))


def test_forward_difference_lowers_degree() -> None:
    p = Polynomial.from_roots([0, 0, 0])
    assert p.forward_difference().degree == 2


@given(polys, polys, small)
def test_evaluation_is_a_ring_homomorphism(p: Polynomial, q: Polynomial, x: Fraction) -> None:
    assert poly_eval(p * q, x) == poly_eval(p, x) * poly_eval(q, x)
    assert poly_eval(p + q, x) == poly_eval(p, x) + poly_eval(q, x)


@given(polys, small, small, small)
def test_compose_affine_evaluates(p: Polynomial, s: Fraction, t: Fraction, x: Fraction) -> None:
    assert poly_eval(p.compose_affine(s, t), x) == poly_eval(p, s * x + t)


class TestPolyArith:
    def test_dispatch(self) -> None:
        n = Polynomial.variable()
        assert poly_arith("add", n, Polynomial.one()) == n + 1
        assert poly_arith("scale", n, Fraction(1, 2)) == n / 2
        assert poly_arith("compose_affine", n, 2, 1) == n.scale(2) + 1

    def test_unknown_operation(self) -> None:
        with pytest.raises(DomainError):
            poly_arith("pow", Polynomial.one(), 2)  # type: ignore[arg-type]

    def test_wrong_arity(self) -> None:
        with pytest.raises(DomainError):
            poly_arith("compose_affine", Polynomial.one(), 2)


def test_poly_roots_of_product() -> None:
    p = Polynomial.from_roots([Fraction(-1, 2), Fraction(3)])
    with mpmath.workprec(128):
        roots = sorted(poly_roots(p, 128), key=lambda r: mpmath.re(r))
        assert is_close(roots[0], Fraction(-1, 2), mpmath.mpf(10) ** -20)
        assert is_close(roots[1], 3, mpmath.mpf(10) ** -20)


def test_poly_roots_zero_polynomial_rejected() -> None:
    with pytest.raises(DomainError):
        poly_roots(Polynomial.zero(), 128)
