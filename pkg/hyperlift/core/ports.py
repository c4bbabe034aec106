"""
Port interfaces for hyperlift.

Protocol classes the adapters satisfy structurally; the core imports nothing
from hyperlift.adapters.
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import Protocol

from hyperlift.core.models import PolynomialRecord, VerificationReport


class ReportSink(Protocol):
    """
    Destination for verification output.

    Reports are written in case order as they become available; ``finish`` is
    called once with everything that was written.
    """

    def write_report(self, report: VerificationReport) -> None:
        """Emit one verification report."""
        ...

    def write_polynomial(self, record: PolynomialRecord) -> None:
        """Emit one printed polynomial."""
        ...

    def finish(self, reports: Sequence[VerificationReport]) -> None:
        """Emit any closing summary."""
        ...
