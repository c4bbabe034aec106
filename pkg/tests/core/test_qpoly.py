"""Tests for the weight polynomial families and their recurrences."""

from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from hyperlift.core.errors import DomainError
from hyperlift.core.exact import is_close
from hyperlift.core.polychecks import (
    check_bold_cross,
    check_d_limit,
    check_degree,
    check_lowering,
    check_p_antisymmetry,
    check_p_generating,
    check_poisedness,
    check_printed_forms,
    check_representation,
    check_symmetry,
)
from hyperlift.core.polynomial import Polynomial, poly_roots
from hyperlift.core.qpoly import (
    BoldQFamily,
    QFamily,
    bold_q,
    bold_seed,
    hat_q2,
    hat_q2_special,
    master_raise,
    negated_roots,
    p_poly,
    q_poly,
    raise_chain,
)

third, fifth = Fraction(1, 3), Fraction(1, 5)


class TestQ2:
    def test_printed_k1(self) -> None:
        q = q_poly(QFamily("Q2", 1, 5, 2, 3))
        assert str(q) == "(1/6)n^2 + (5/6)n + 1"
        assert q(1) == 2

    def test_k0_is_one(self) -> None:
        assert q_poly(QFamily("Q2", 0, 1, third, fifth)) == Polynomial.one()

    def test_normalized(self) -> None:
        q = q_poly(QFamily("Q2", 3, Fraction(7, 2), third, fifth))
        assert q(0) == 1
        assert q.degree == 6

    def test_missing_c_rejected(self) -> None:
        with pytest.raises(DomainError):
            QFamily("Q2", 1, 1, third)

    def test_singular_denominator(self) -> None:
        # (b)_2 vanishes for b = -1
        with pytest.raises(DomainError):
            q_poly(QFamily("Q2", 2, 1, -1, fifth))

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_raise_chain_matches_representation(self, k: int) -> None:
        f = QFamily("Q2", k, Fraction(3, 7), Fraction(2, 5), Fraction(-4, 3))
        assert raise_chain(f) == q_poly(f)

    def test_master_raise_needs_positive_k(self) -> None:
        with pytest.raises(DomainError):
            master_raise(QFamily("Q2", 0, 1, third, fifth), Polynomial.one())

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_lowering(self, k: int) -> None:
        assert check_lowering(QFamily("Q2", k, Fraction(5, 2), third, fifth)).passed

    @pytest.mark.parametrize("d", [None, Fraction(2, 9)])
    def test_symmetry(self, d: Fraction | None) -> None:
        assert check_symmetry(QFamily("Q2", 2, Fraction(5, 2), third, fifth, d)).passed

    def test_symmetry_rejects_cubic(self) -> None:
        with pytest.raises(DomainError):
            check_symmetry(QFamily("Q3", 1, 1, third))

    @pytest.mark.parametrize("k", [0, 1, 3])
    def test_large_d_recovers_three_parameter_family(self, k: int) -> None:
        report = check_d_limit(k, Fraction(5, 2), third, fifth)
        assert report.passed, report.first_mismatch


@pytest.mark.parametrize(
    "f",
    [
        QFamily("Q3", 1, Fraction(2, 3), Fraction(1, 7)),
        QFamily("Q3", 2, Fraction(2, 3), Fraction(1, 7)),
        QFamily("Q3p", 1, Fraction(5, 4), Fraction(1, 6)),
        QFamily("Q3p", 2, Fraction(5, 4), Fraction(1, 6)),
        QFamily("Q2", 2, Fraction(5, 4), Fraction(1, 6), Fraction(3, 8), Fraction(7, 5)),
    ],
    ids=["Q3-k1", "Q3-k2", "Q3p-k1", "Q3p-k2", "Q2d-k2"],
)
def test_representation_against_recurrence(f: QFamily) -> None:
    report = check_representation(f)
    assert report.passed, report.first_mismatch


@pytest.mark.parametrize(
    ("f", "degree"),
    [
        (QFamily("Q2", 2, 1, third, fifth), 4),
        (QFamily("Q3", 2, 1, third), 4),
        (QFamily("Q3", 2, 1, third, None, Fraction(2, 7)), 6),
        (QFamily("Q3p", 2, 1, third, None, Fraction(2, 7)), 6),
        (QFamily("Q2", 2, 1, third, fifth, Fraction(2, 7)), 4),
    ],
)
def test_degree_laws(f: QFamily, degree: int) -> None:
    assert f.degree == degree
    assert check_degree(f).passed


def test_printed_k1_forms() -> None:
    report = check_printed_forms(Fraction(2, 3), Fraction(1, 7), Fraction(3, 5), Fraction(5, 2))
    assert report.passed, report.first_mismatch


class TestBold:
    def test_seeds(self) -> None:
        n = Polynomial.variable()
        assert bold_seed(BoldQFamily("BQ2", 0, 2, 1, 1)) == n + 1
        assert bold_seed(BoldQFamily("BQ3", 0, 3, 1)) == n + 1
        assert bold_seed(BoldQFamily("BQ3p", 0, 3, 1)) == n.scale(Fraction(1, 2)) + 1

    def test_hat_q2_values(self) -> None:
        hat = hat_q2(BoldQFamily("BQ2", 1, 2, 1, 1))
        assert hat.degree == 4
        assert hat(1) == 8
        assert hat(2) == 33

    def test_bold_q2_is_seed_times_hat(self) -> None:
        q = bold_q(BoldQFamily("BQ2", 1, 2, 1, 1))
        assert q.degree == 5
        assert q(1) == 16
        assert q(2) == 99

    def test_two_routes_agree(self) -> None:
        assert check_bold_cross(BoldQFamily("BQ2", 1, 2, 1, 1)).passed
        assert check_bold_cross(BoldQFamily("BQ2", 2, Fraction(5, 3), third, fifth)).passed

    def test_hat_symmetry(self) -> None:
        assert check_symmetry(BoldQFamily("BQ2", 2, Fraction(5, 3), third, fifth)).passed

    @pytest.mark.parametrize("tag", ["BQ3", "BQ3p"])
    def test_cubic_degree(self, tag: str) -> None:
        f = BoldQFamily(tag, 1, Fraction(5, 3), third)  # type: ignore[arg-type]
        assert bold_q(f).degree == 5

    def test_a_equal_minus_2k_rejected(self) -> None:
        with pytest.raises(DomainError):
            bold_q(BoldQFamily("BQ2", 1, -2, third, fifth))

    def test_hat_only_for_bq2(self) -> None:
        with pytest.raises(DomainError):
            hat_q2(BoldQFamily("BQ3", 1, 1, third))

    def test_special_closed_form_k0(self) -> None:
        assert hat_q2_special(0, Fraction(5, 3), third, 128) == Polynomial.one()

    @pytest.mark.parametrize("k", [1, 2])
    def test_special_closed_form_matches_recurrence(self, k: int) -> None:
        assert hat_q2_special(k, Fraction(5, 3), Fraction(2, 7), 128).degree == 4 * k


class TestP:
    def test_p0_is_difference(self) -> None:
        assert p_poly(0, 5, 2) == Polynomial.constant(Fraction(3))

    def test_p1_degree(self) -> None:
        assert p_poly(1, Fraction(1, 2), Fraction(-1, 3)).degree == 1

    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_antisymmetry(self, k: int) -> None:
        assert check_p_antisymmetry(k, Fraction(3, 4), Fraction(-2, 5)).passed

    def test_generating_function(self) -> None:
        report = check_p_generating(3, Fraction(1, 3), Fraction(3, 2), [0, 1, Fraction(1, 2), -2])
        assert report.passed, report.first_mismatch


class TestNegatedRoots:
    def test_q2_roots_mirror_about_half_a(self) -> None:
        f = QFamily("Q2", 2, Fraction(5, 2), third, fifth)
        xis = negated_roots(q_poly(f), 128, f)
        assert len(xis) == 4
        with mpmath.workprec(128):
            tol = mpmath.mpf(10) ** -35
            for xi in xis:
                assert any(is_close(mpmath.mpf(5) / 2 - xi, other, tol) for other in xis)

    def test_negation_keeps_working_precision(self) -> None:
        f = QFamily("Q2", 2, Fraction(5, 2), third, fifth)
        q = q_poly(f)
        xis = negated_roots(q, 128, f)
        with mpmath.workprec(128):
            assert all(xi == -r for xi, r in zip(xis, poly_roots(q, 128), strict=True))

    def test_constant_rejected(self) -> None:
        with pytest.raises(DomainError):
            negated_roots(Polynomial.one(), 128)


class TestPoisedness:
    def test_q2_rhs_is_well_poised(self) -> None:
        assert check_poisedness(QFamily("Q2", 1, Fraction(5, 2), third, fifth)).passed

    def test_bold_q2_rhs_is_very_well_poised(self) -> None:
        assert check_poisedness(BoldQFamily("BQ2", 1, Fraction(5, 2), third, fifth)).passed
