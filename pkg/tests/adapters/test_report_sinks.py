"""Tests for the JSON-lines and rich console report sinks."""

from __future__ import annotations

import io
import json

from rich.console import Console

from hyperlift.adapters.reports.console import ConsoleReportSink
from hyperlift.adapters.reports.jsonl import JsonlReportSink
from hyperlift.core.models import Mismatch, PolynomialRecord, VerificationReport
from hyperlift.core.ports import ReportSink


def _report(passed: bool = True, **kw: object) -> VerificationReport:
    return VerificationReport(
        identity="thmA2",
        k=0,
        params={"a": "1", "b": "1/3"},
        order=12,
        mode="exact",
        passed=passed,
        **kw,  # type: ignore[arg-type]
    )


def _record() -> PolynomialRecord:
    return PolynomialRecord(
        "Q2", 1, {"a": "5", "b": "2", "c": "3"}, ["1", "5/6", "1/6"], "(1/6)n^2 + (5/6)n + 1"
    )


def _console() -> tuple[Console, io.StringIO]:
    buffer = io.StringIO()
    return Console(file=buffer, width=200, color_system=None, highlight=False), buffer


def test_sinks_satisfy_protocol() -> None:
    sinks: list[ReportSink] = [JsonlReportSink(io.StringIO()), ConsoleReportSink(_console()[0])]
    for sink in sinks:
        assert callable(sink.write_report)
        assert callable(sink.write_polynomial)
        assert callable(sink.finish)


class TestJsonlReportSink:
    def test_one_object_per_report(self) -> None:
        stream = io.StringIO()
        sink = JsonlReportSink(stream)
        sink.write_report(_report())
        sink.write_report(_report(False, first_mismatch=Mismatch(2, "1", "0")))
        sink.finish([])
        lines = stream.getvalue().splitlines()
        assert [json.loads(line)["pass"] for line in lines] == [True, False]
        assert json.loads(lines[1])["first_mismatch"] == {"index": 2, "lhs": "1", "rhs": "0"}

    def test_polynomial_record(self) -> None:
        stream = io.StringIO()
        JsonlReportSink(stream).write_polynomial(_record())
        data = json.loads(stream.getvalue())
        assert data["family"] == "Q2"
        assert data["coefficients"] == ["1", "5/6", "1/6"]


class TestConsoleReportSink:
    def test_report_line_and_summary(self) -> None:
        console, buffer = _console()
        sink = ConsoleReportSink(console)
        reports = [_report(), _report(False, error="domain", detail="pole at -2")]
        for report in reports:
            sink.write_report(report)
        sink.finish(reports)
        lines = buffer.getvalue().splitlines()
        assert lines[0] == "PASS thmA2 k=0 N=12 a=1 b=1/3"
        assert lines[1].startswith("FAIL thmA2")
        assert "[domain] pole at -2" in lines[1]
        assert lines[2] == "1/2 passed (1 domain)"

    def test_empty_finish_prints_nothing(self) -> None:
        console, buffer = _console()
        ConsoleReportSink(console).finish([])
        assert buffer.getvalue() == ""

    def test_polynomial_with_roots(self) -> None:
        console, buffer = _console()
        record = PolynomialRecord("Q2", 1, {}, ["1"], "n + 1", roots=["1.0"])
        ConsoleReportSink(console).write_polynomial(record)
        assert buffer.getvalue().splitlines() == ["n + 1", "negated roots:", "  1.0"]
