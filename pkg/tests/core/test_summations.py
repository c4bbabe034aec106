"""Tests for the terminating summations and their registry."""

from __future__ import annotations

from fractions import Fraction

import pytest

from hyperlift.core.errors import DomainError, ParameterError
from hyperlift.core.identities import build_identity
from hyperlift.core.summations import (
    SUMMATIONS,
    SummationCase,
    gs_pair,
    kummer_rhs,
    r_forms,
    run_summation,
    sheppard_sides,
    summation_spec,
    verify_bailey1,
    verify_bailey2,
    verify_dougall,
    verify_ext_whipple,
    verify_ext_whipple_limit,
    verify_gs_pairing,
    verify_kummer_ext,
    verify_r_forms,
    verify_sheppard,
    verify_whipple43,
    verify_whipple_limit,
)

third, fifth = Fraction(1, 3), Fraction(1, 5)
a, b, c = Fraction(5, 2), third, fifth
d, e = Fraction(7, 4), Fraction(5, 6)


class TestClassics:
    def test_sheppard_n0_is_trivial(self) -> None:
        assert sheppard_sides(0, a, b, d, e) == (1, 1)

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_sheppard(self, n: int) -> None:
        report = verify_sheppard(n, third, Fraction(2, 5), d, e)
        assert report.passed, report.first_mismatch
        assert report.extra == {"n": n}

    def test_whipple43_derives_balance(self) -> None:
        report = verify_whipple43(3, third, Fraction(2, 5), Fraction(3, 7), d, e)
        assert report.passed, report.first_mismatch
        assert report.extra["f"] == str(1 - 3 + third + Fraction(2, 5) + Fraction(3, 7) - d - e)

    def test_whipple43_rejects_unbalanced_f(self) -> None:
        with pytest.raises(DomainError, match="not balanced"):
            verify_whipple43(3, third, Fraction(2, 5), Fraction(3, 7), d, e, f=1)

    def test_whipple_limit_decays(self) -> None:
        report = verify_whipple_limit(3, third, Fraction(2, 5), d, e)
        assert report.passed, report.first_mismatch
        assert len(report.extra["gaps"]) == 4

    def test_negative_size_rejected(self) -> None:
        with pytest.raises(DomainError):
            verify_sheppard(-1, a, b, d, e)


class TestRForms:
    @pytest.mark.parametrize(("n", "k"), [(0, 0), (3, 0), (3, 1), (4, 2)])
    def test_q2(self, n: int, k: int) -> None:
        first, second, third_form = r_forms("Q2", n, k, a, b, c)
        assert first == second == third_form

    @pytest.mark.parametrize(("n", "k"), [(3, 0), (3, 1), (2, 2)])
    def test_q3(self, n: int, k: int) -> None:
        report = verify_r_forms("Q3", n, k, Fraction(2, 7), fifth)
        assert report.passed, report.first_mismatch

    def test_q2_needs_c(self) -> None:
        with pytest.raises(ParameterError):
            r_forms("Q2", 2, 1, a, b)

    def test_unknown_family(self) -> None:
        with pytest.raises(ParameterError):
            r_forms("Q5", 2, 1, a, b)


class TestExtendedWhipple:
    @pytest.mark.parametrize(("k", "big_n"), [(0, 2), (1, 2), (2, 3)])
    def test_plain(self, k: int, big_n: int) -> None:
        report = verify_ext_whipple(k, big_n, Fraction(3, 4), third, fifth, Fraction(2, 7), e)
        assert report.passed, report.first_mismatch
        assert report.extra["variant"] == "i"

    def test_with_f(self) -> None:
        report = verify_ext_whipple(
            1, 2, Fraction(3, 4), third, fifth, Fraction(2, 7), e, Fraction(4, 9)
        )
        assert report.passed, report.first_mismatch
        assert report.extra["variant"] == "ii"

    @pytest.mark.parametrize("k", [0, 1])
    def test_dougall_line(self, k: int) -> None:
        report = verify_dougall(k, 2, Fraction(3, 4), third, Fraction(2, 7), e)
        assert report.passed, report.first_mismatch

    def test_f_limit(self) -> None:
        report = verify_ext_whipple_limit(1, 2, Fraction(3, 4), third, fifth, Fraction(2, 7), e)
        assert report.passed, report.first_mismatch


class TestBailey:
    @pytest.mark.parametrize(("k", "m"), [(0, 0), (0, 2), (1, 2), (2, 3)])
    def test_bailey1(self, k: int, m: int) -> None:
        report = verify_bailey1(k, m, Fraction(3, 4), third, fifth, Fraction(11, 6))
        assert report.passed, report.first_mismatch

    def test_bailey1_with_d(self) -> None:
        w, d_ = Fraction(11, 6), Fraction(5, 7)
        report = verify_bailey1(1, 2, Fraction(3, 4), third, fifth, w, d_)
        assert report.passed, report.first_mismatch

    @pytest.mark.parametrize(("k", "m"), [(0, 1), (1, 2)])
    def test_bailey2(self, k: int, m: int) -> None:
        report = verify_bailey2(k, m, Fraction(3, 4), third, fifth, Fraction(11, 6))
        assert report.passed, report.first_mismatch


class TestPairing:
    COMPANION = {"a": third, "b": Fraction(2, 7), "c": fifth}

    @pytest.mark.parametrize("k", [0, 1, 2])
    @pytest.mark.parametrize("big_n", [0, 1, 2])
    def test_quadratic(self, k: int, big_n: int) -> None:
        params = self.COMPANION | {"e": Fraction(3, 5), "f": Fraction(1, 4)}
        report = gs_pair("thmA2", k, big_n, params)
        assert report.passed, report.first_mismatch
        assert report.extra == {"N": big_n}

    @pytest.mark.parametrize("big_n", [1, 2])
    def test_first_cubic(self, big_n: int) -> None:
        params = {"a": third, "b": Fraction(2, 7), "e": Fraction(3, 5)}
        report = gs_pair("thmA3", 1, big_n, params)
        assert report.passed, report.first_mismatch

    def test_base_a_lands_on_order_n(self) -> None:
        # −a_base − a_comp = 2N for the quadratic map
        params = {"a": -third - 4, "b": Fraction(3, 5), "c": Fraction(1, 4)}
        base = build_identity("thmA2", 0, params)
        companion = build_identity("thmC2", 0, self.COMPANION)
        report = verify_gs_pairing(base, companion)
        assert report.passed, report.first_mismatch
        assert report.extra == {"N": 2}

    def test_off_by_one_offset_rejected(self) -> None:
        params = {"a": 1 - third - 4, "b": Fraction(3, 5), "c": Fraction(1, 4)}
        base = build_identity("thmA2", 0, params)
        companion = build_identity("thmC2", 0, self.COMPANION)
        with pytest.raises(DomainError, match="not a nonnegative integer"):
            verify_gs_pairing(base, companion)

    def test_unknown_base(self) -> None:
        with pytest.raises(ParameterError):
            gs_pair("thmC2", 0, 1, {})


class TestKummer:
    @pytest.mark.parametrize(
        ("k", "a_", "b_", "expected"),
        [(0, 2, -1, Fraction(3, 2)), (1, 2, -2, Fraction(2, 3)), (2, 4, -3, Fraction(3, 10))],
    )
    def test_closed_form(self, k: int, a_: int, b_: int, expected: Fraction) -> None:
        assert kummer_rhs(k, a_, b_) == expected

    @pytest.mark.parametrize(("k", "a_", "b_"), [(0, 2, -1), (1, 2, -2), (2, 4, -3)])
    def test_series_matches_closed_form(self, k: int, a_: int, b_: int) -> None:
        report = verify_kummer_ext(k, Fraction(a_), Fraction(b_))
        assert report.passed, report.first_mismatch

    def test_odd_a_rejected(self) -> None:
        with pytest.raises(DomainError, match="even integer"):
            kummer_rhs(0, 3, -1)

    def test_b_must_be_below_minus_k(self) -> None:
        with pytest.raises(DomainError):
            verify_kummer_ext(2, Fraction(2), Fraction(-1))


class TestRegistry:
    def test_names(self) -> None:
        assert set(SUMMATIONS) == {
            "sheppard",
            "whipple43",
            "whipple43-limit",
            "r-forms",
            "ext-whipple",
            "ext-whipple-limit",
            "dougall",
            "bailey1",
            "bailey2",
            "gs-pairing",
            "kummer",
        }

    def test_unknown_name(self) -> None:
        with pytest.raises(ParameterError, match="unknown summation"):
            summation_spec("gauss")

    def test_variant_parameters(self) -> None:
        spec = summation_spec("bailey1")
        assert spec.names_for("ii") == ("a", "b", "c", "w", "d")
        with pytest.raises(ParameterError):
            spec.names_for("iii")

    def test_run_dispatches_with_default_variant(self) -> None:
        case = SummationCase(
            name="ext-whipple",
            k=1,
            sizes={"N": 2},
            params={"a": Fraction(3, 4), "b": third, "c": fifth, "d": Fraction(2, 7), "e": e},
        )
        report = run_summation(case)
        assert report.passed
        assert report.extra["variant"] == "i"

    def test_run_rejects_missing_size(self) -> None:
        case = SummationCase(name="sheppard", params={"a": a, "b": b, "d": d, "e": e})
        with pytest.raises(ParameterError, match="--n"):
            run_summation(case)

    def test_run_rejects_unknown_parameter(self) -> None:
        case = SummationCase(
            name="sheppard", sizes={"n": 2}, params={"a": a, "b": b, "d": d, "e": e, "w": 1}
        )
        with pytest.raises(ParameterError, match="does not take w"):
            run_summation(case)

    def test_run_rejects_missing_parameter(self) -> None:
        with pytest.raises(ParameterError, match="needs"):
            run_summation(SummationCase(name="sheppard", sizes={"n": 2}, params={"a": a}))

    def test_run_kummer(self) -> None:
        report = run_summation(SummationCase(name="kummer", k=1, params={"a": 2, "b": -2}))
        assert report.passed
