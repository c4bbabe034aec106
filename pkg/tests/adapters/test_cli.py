"""Tests for the hyperlift CLI: exit statuses, sinks and flag handling."""

from __future__ import annotations

import json
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path

import pytest
from _pytest.capture import CaptureFixture

from hyperlift.cli.main import main
from hyperlift.cli.runner import _setup_logging, build_polynomial, run
from hyperlift.core import suite
from hyperlift.core.errors import ParameterError
from hyperlift.core.models import PolynomialRecord, RunConfig, VerificationReport
from hyperlift.core.reporting import EXIT_FAILED, EXIT_OK, EXIT_USAGE
from hyperlift.core.suite import SuiteTask

A2 = {"a": "1", "b": "1/3", "c": "1/5"}


class CollectingSink:
    """Keeps everything it is given."""

    def __init__(self) -> None:
        self.reports: list[VerificationReport] = []
        self.polynomials: list[PolynomialRecord] = []
        self.finished: list[Sequence[VerificationReport]] = []

    def write_report(self, report: VerificationReport) -> None:
        self.reports.append(report)

    def write_polynomial(self, record: PolynomialRecord) -> None:
        self.polynomials.append(record)

    def finish(self, reports: Sequence[VerificationReport]) -> None:
        self.finished.append(reports)


# ── run ────────────────────────────────────────────────────────────────────


class TestPolynomials:
    def test_qpoly(self) -> None:
        sink = CollectingSink()
        config = RunConfig("qpoly", name="Q2", k=1, params={"a": "5", "b": "2", "c": "3"})
        assert run(config, sink) == EXIT_OK
        (record,) = sink.polynomials
        assert record.text == "(1/6)n^2 + (5/6)n + 1"
        assert record.coefficients == ["1", "5/6", "1/6"]
        assert record.roots is None

    def test_roots(self) -> None:
        sink = CollectingSink()
        config = RunConfig("roots", name="Q2", k=1, params={"a": "5", "b": "2", "c": "3"})
        assert run(config, sink) == EXIT_OK
        assert sink.polynomials[0].roots is not None
        assert len(sink.polynomials[0].roots) == 2

    def test_unknown_family(self) -> None:
        assert run(RunConfig("qpoly", name="Q7", params=A2), CollectingSink()) == EXIT_USAGE

    def test_missing_c(self) -> None:
        with pytest.raises(ParameterError, match="--c"):
            build_polynomial("Q2", 1, {"a": Fraction(1), "b": Fraction(2)})

    def test_decimal_parameter(self) -> None:
        config = RunConfig("qpoly", name="Q2", k=1, params={"a": "0.5", "b": "2", "c": "3"})
        assert run(config, CollectingSink()) == EXIT_USAGE

    def test_p_family_reads_a_and_b(self) -> None:
        sink = CollectingSink()
        assert run(RunConfig("qpoly", name="P", params={"a": "5", "b": "2"}), sink) == EXIT_OK
        assert sink.polynomials[0].text == "3"


class TestVerifyTransform:
    def test_passing_case(self) -> None:
        sink = CollectingSink()
        config = RunConfig("verify-transform", name="thmA2", params=A2, order=12)
        assert run(config, sink) == EXIT_OK
        assert sink.reports[0].passed
        assert sink.finished == [sink.reports]

    def test_perturbed_case_fails(self) -> None:
        sink = CollectingSink()
        config = RunConfig("verify-transform", name="thmA2", params=A2, perturb={"b": "1/7"})
        assert run(config, sink) == EXIT_FAILED
        assert sink.reports[0].first_mismatch is not None

    def test_unknown_identity_is_usage_error(self) -> None:
        sink = CollectingSink()
        assert run(RunConfig("verify-transform", name="thmX", params=A2), sink) == EXIT_USAGE
        assert sink.reports == []

    def test_domain_error_becomes_failing_report(self) -> None:
        sink = CollectingSink()
        config = RunConfig("verify-transform", name="niblett", k=2, params=A2)
        assert run(config, sink) == EXIT_FAILED
        assert sink.reports[0].error == "domain"


class TestVerifySummation:
    def test_kummer(self) -> None:
        sink = CollectingSink()
        config = RunConfig("verify-summation", name="kummer", k=1, params={"a": "2", "b": "-2"})
        assert run(config, sink) == EXIT_OK

    def test_missing_size(self) -> None:
        params = {"a": "1/3", "b": "2/5", "d": "7/4", "e": "5/6"}
        config = RunConfig("verify-summation", name="sheppard", params=params)
        assert run(config, CollectingSink()) == EXIT_USAGE

    def test_sheppard(self) -> None:
        params = {"a": "1/3", "b": "2/5", "d": "7/4", "e": "5/6"}
        config = RunConfig("verify-summation", name="sheppard", params=params, sizes={"n": 3})
        assert run(config, CollectingSink()) == EXIT_OK


def test_suite_reports_every_task(monkeypatch: pytest.MonkeyPatch) -> None:
    tasks = [SuiteTask(0, "kummer", "kummer", k=0, case=0)]
    monkeypatch.setattr(suite, "plan_suite", lambda config: tasks)
    sink = CollectingSink()
    assert run(RunConfig("suite"), sink) == EXIT_OK
    assert len(sink.reports) == 1
    assert sink.finished == [sink.reports]


def test_invalid_log_level(capsys: CaptureFixture[str]) -> None:
    with pytest.raises(SystemExit) as info:
        _setup_logging("LOUD")
    assert info.value.code == EXIT_USAGE
    assert "invalid --log-level" in capsys.readouterr().err


# ── main ───────────────────────────────────────────────────────────────────


def _main(tokens: list[str], tmp_path: Path) -> int:
    with pytest.raises(SystemExit) as info:
        main([*tokens, "--config", str(tmp_path / "absent.yaml")])
    code = info.value.code
    assert isinstance(code, int)
    return code


def test_main_qpoly_json(tmp_path: Path, capsys: CaptureFixture[str]) -> None:
    tokens = ["qpoly", "--family", "Q2", "--k", "1", "--a", "5", "--b", "2", "--c", "3"]
    assert _main([*tokens, "--format", "json"], tmp_path) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["text"] == "(1/6)n^2 + (5/6)n + 1"
    assert data["params"] == {"a": "5", "b": "2", "c": "3"}


def test_main_verify_transform(tmp_path: Path, capsys: CaptureFixture[str]) -> None:
    tokens = ["verify-transform", "--name", "thmA2", "--a", "1", "--b", "1/3", "--c", "1/5"]
    assert _main([*tokens, "--order", "12", "--format", "json"], tmp_path) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["pass"] is True
    assert data["order"] == 12


def test_main_perturb(tmp_path: Path) -> None:
    tokens = ["verify-transform", "--name", "thmA2", "--a", "1", "--b", "1/3", "--c", "1/5"]
    assert _main([*tokens, "--perturb", "b=1/7"], tmp_path) == EXIT_FAILED


def test_main_malformed_perturb(tmp_path: Path) -> None:
    tokens = ["verify-transform", "--name", "thmA2", "--a", "1", "--b", "1/3", "--c", "1/5"]
    assert _main([*tokens, "--perturb", "b"], tmp_path) == EXIT_USAGE


def test_main_negative_value(tmp_path: Path) -> None:
    tokens = ["verify-summation", "--name", "kummer", "--k", "1", "--a", "2", "--b=-2"]
    assert _main(tokens, tmp_path) == EXIT_OK


def test_main_summation_size_flag(tmp_path: Path) -> None:
    tokens = ["verify-summation", "--name", "sheppard", "--n", "3"]
    params = ["--a", "1/3", "--b", "2/5", "--d", "7/4", "--e", "5/6"]
    assert _main([*tokens, *params], tmp_path) == EXIT_OK


def test_main_bad_integer_is_usage_error(tmp_path: Path) -> None:
    assert _main(["qpoly", "--family", "Q2", "--k", "one"], tmp_path) == EXIT_USAGE


def test_main_reads_config_file(tmp_path: Path, capsys: CaptureFixture[str]) -> None:
    config = tmp_path / "config.yaml"
    config.write_text("verification:\n  order: 5\n")
    tokens = ["verify-transform", "--name", "thmA2", "--a", "1", "--b", "1/3", "--c", "1/5"]
    with pytest.raises(SystemExit) as info:
        main([*tokens, "--format", "json", "--config", str(config)])
    assert info.value.code == EXIT_OK
    assert json.loads(capsys.readouterr().out)["order"] == 5
