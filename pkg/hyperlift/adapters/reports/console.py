"""
Rich console report sink.

Prints one coloured line per report (the text form from emit_report, with the
PASS/FAIL tag highlighted) and a closing summary.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Sequence

from rich.console import Console
from rich.markup import escape

from hyperlift.core.models import PolynomialRecord, VerificationReport
from hyperlift.core.reporting import report_line


class ConsoleReportSink:
    """Human-readable output for terminals."""

    def __init__(self, console: Console | None = None) -> None:
        self._console = console if console is not None else Console(highlight=False)

    def write_report(self, report: VerificationReport) -> None:
        line = report_line(report)
        tag, _, rest = line.partition(" ")
        style = "bold green" if report.passed else "bold red"
        self._console.print(f"[{style}]{tag}[/{style}] {escape(rest)}")

    def write_polynomial(self, record: PolynomialRecord) -> None:
        self._console.print(escape(record.text))
        if record.roots is not None:
            self._console.print("[dim]negated roots:[/dim]")
            for root in record.roots:
                self._console.print(f"  {escape(root)}")

    def finish(self, reports: Sequence[VerificationReport]) -> None:
        if not reports:
            return
        failed = [r for r in reports if not r.passed]
        errors = Counter(r.error for r in failed if r.error is not None)
        summary = f"{len(reports) - len(failed)}/{len(reports)} passed"
        if errors:
            summary += " (" + ", ".join(f"{n} {kind}" for kind, n in sorted(errors.items())) + ")"
        style = "green" if not failed else "red"
        self._console.print(f"[bold {style}]{summary}[/bold {style}]")
