from __future__ import annotations

import json
from fractions import Fraction

import mpmath
import pytest

from hyperlift.core.errors import ConsistencyError, ConvergenceError, DomainError
from hyperlift.core.models import Mismatch, PolynomialRecord, VerificationReport
from hyperlift.core.reporting import (
    EXIT_CONSISTENCY,
    EXIT_FAILED,
    EXIT_OK,
    compare_sequences,
    decay_report,
    emit_report,
    error_kind,
    exit_status,
    failure_report,
    format_params,
    make_report,
    report_line,
)


def _report(passed: bool = True, **kw: object) -> VerificationReport:
    return VerificationReport(
        identity="thmA2",
        k=0,
        params={"a": "1", "b": "1/3", "c": "1/5"},
        order=12,
        mode="exact",
        passed=passed,
        **kw,  # type: ignore[arg-type]
    )


def test_report_dict_key_order() -> None:
    d = _report(seed=7, extra={"variant": "i", "N": 3}).to_dict()
    assert list(d) == [
        "identity",
        "k",
        "params",
        "order",
        "mode",
        "pass",
        "first_mismatch",
        "seed",
        "elapsed_ms",
        "N",
        "variant",
    ]
    assert d["pass"] is True


def test_report_dict_carries_error() -> None:
    d = _report(False, error="domain", detail="pole").to_dict()
    assert d["error"] == "domain"
    assert d["detail"] == "pole"


def test_polynomial_record_roots_key() -> None:
    record = PolynomialRecord("Q2", 1, {"a": "5"}, ["1", "5/6", "1/6"], "(1/6)n^2 + (5/6)n + 1")
    assert "negated_roots" not in record.to_dict()
    with_roots = PolynomialRecord("Q2", 1, {}, ["1"], "1", roots=["2", "3"])
    assert with_roots.to_dict()["negated_roots"] == ["2", "3"]


class TestCompareSequences:
    def test_exact_mismatch_index(self) -> None:
        mismatch, largest = compare_sequences([1, 2, 3], [1, 2, Fraction(7, 2)])
        assert mismatch == Mismatch(2, "3", "7/2")
        assert largest is None

    def test_numeric_within_tolerance(self) -> None:
        with mpmath.workprec(128):
            x = mpmath.mpf(1) / 3
            mismatch, largest = compare_sequences([x], [Fraction(1, 3)], mpmath.mpf(10) ** -30)
        assert mismatch is None
        assert largest is not None

    def test_length_mismatch(self) -> None:
        with pytest.raises(DomainError):
            compare_sequences([1], [1, 2])


def test_make_report_fields() -> None:
    params = {"a": Fraction(1, 2), "c": None}
    report = make_report("x", [1, 2], [1, 3], k=1, params=params, order=1)
    assert not report.passed
    assert report.mode == "exact"
    assert report.params == {"a": "1/2"}
    assert report.first_mismatch is not None
    assert report.first_mismatch.index == 1


def test_format_params_drops_unset() -> None:
    assert format_params({"a": Fraction(-3, 4), "f": None}) == {"a": "-3/4"}


class TestDecayReport:
    def test_decaying_gaps_pass(self) -> None:
        gaps = [Fraction(1, 10**4), Fraction(1, 10**6), Fraction(1, 10**8)]
        assert decay_report("lim", gaps, k=None, params={}).passed

    def test_zero_gap_passes(self) -> None:
        assert decay_report("lim", [Fraction(1, 100), Fraction(0)], k=None, params={}).passed

    def test_stalled_gaps_fail(self) -> None:
        report = decay_report("lim", [Fraction(1, 10), Fraction(1, 20)], k=None, params={})
        assert not report.passed
        assert report.first_mismatch is not None
        assert report.first_mismatch.index == 1


@pytest.mark.parametrize(
    ("exc", "kind"),
    [
        (DomainError("x"), "domain"),
        (ConvergenceError("x", 0), "convergence"),
        (ConsistencyError("x"), "consistency"),
    ],
)
def test_error_kind(exc: Exception, kind: str) -> None:
    assert error_kind(exc) == kind
    report = failure_report("thmA2", exc, k=2)
    assert not report.passed
    assert report.error == kind
    assert report.detail == "x"


def test_report_line() -> None:
    line = report_line(_report(extra={"m": 3}))
    assert line == "PASS thmA2 k=0 N=12 a=1 b=1/3 c=1/5 m=3"
    failing = _report(False, first_mismatch=Mismatch(1, "2", "3"))
    assert report_line(failing).endswith("first_mismatch@1: 2 != 3")


def test_report_line_shows_detail_without_error() -> None:
    failing = _report(False, detail="merged arrays differ from the displayed 4F3")
    assert report_line(failing).endswith("c=1/5 merged arrays differ from the displayed 4F3")
    assert report_line(_report(False, error="domain", detail="pole")).endswith("[domain] pole")


def test_emit_report_json_lines() -> None:
    text = emit_report([_report(), _report(False)], "json")
    lines = text.splitlines()
    assert len(lines) == 2
    assert json.loads(lines[1])["pass"] is False


def test_emit_report_empty() -> None:
    assert emit_report([], "json") == ""
    assert emit_report([], "text") == ""


def test_exit_status_precedence() -> None:
    assert exit_status([_report()]) == EXIT_OK
    assert exit_status([_report(), _report(False)]) == EXIT_FAILED
    consistency = _report(False, error="consistency", detail="broken")
    assert exit_status([_report(False), consistency]) == EXIT_CONSISTENCY
