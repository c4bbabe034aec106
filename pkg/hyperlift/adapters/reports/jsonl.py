"""
JSON-lines report sink.

One object per line on the given stream, written as soon as a report arrives.
Serialization goes through emit_report, so the key order is fixed and two runs
with the same seed produce the same lines apart from elapsed_ms.
"""

from __future__ import annotations

import json
import sys
from collections.abc import Sequence
from typing import TextIO

from hyperlift.core.models import PolynomialRecord, VerificationReport
from hyperlift.core.reporting import emit_report


class JsonlReportSink:
    """Writes reports and polynomials as JSON lines."""

    def __init__(self, stream: TextIO | None = None) -> None:
        self._stream = stream if stream is not None else sys.stdout

    def write_report(self, report: VerificationReport) -> None:
        self._stream.write(emit_report([report], "json"))
        self._stream.flush()

    def write_polynomial(self, record: PolynomialRecord) -> None:
        self._stream.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")
        self._stream.flush()

    def finish(self, reports: Sequence[VerificationReport]) -> None:
        """Nothing to close: every line is already flushed."""
