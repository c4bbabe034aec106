"""
CLI entry point for hyperlift.

Commands:
  hyperlift qpoly --family Q2 --k 1 --a 5 --b 2 --c 3     Print a weight polynomial
  hyperlift roots --family Q2 --k 2 ...                   Print it with its negated roots
  hyperlift verify-transform --name thmA2 --k 0 ...       Compare both sides as power series
  hyperlift verify-summation --name kummer --k 1 ...      Check a closed-form summation
  hyperlift suite --cases 20 --seed 42                    Run the randomized verification suite

Rational parameters are given as p or p/q; write negative values as --b=-2.
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Annotated, Literal

import cyclopts

from hyperlift.adapters.reports.console import ConsoleReportSink
from hyperlift.adapters.reports.jsonl import JsonlReportSink
from hyperlift.cli.runner import _setup_logging, run
from hyperlift.config.schema import DEFAULT_CONFIG_PATH, Settings
from hyperlift.core.models import Command, OutputFormat, RunConfig
from hyperlift.core.ports import ReportSink
from hyperlift.core.reporting import EXIT_USAGE

# --format choices
FormatFlag = Literal["text", "json"]

app = cyclopts.App(
    name="hyperlift",
    help="Verify hypergeometric transformations and summations obtained by lifting.",
)


def _make_sink(fmt: OutputFormat) -> ReportSink:
    return JsonlReportSink() if fmt == "json" else ConsoleReportSink()


def _collect(values: dict[str, str | None]) -> dict[str, str]:
    return {name: value for name, value in values.items() if value is not None}


def _parse_perturb(items: list[str] | None) -> dict[str, str]:
    """Turn ``name=delta`` items into a mapping; malformed items exit with status 2."""
    perturb: dict[str, str] = {}
    for item in items or []:
        name, sep, delta = item.partition("=")
        if not sep or not name or not delta:
            print(f"error: --perturb expects name=delta, got '{item}'", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
        perturb[name.strip()] = delta.strip()
    return perturb


def _execute(
    command: Command,
    *,
    config: Path,
    log_level: str,
    fmt: OutputFormat,
    **fields: object,
) -> None:
    """
    Merge CLI flags over the loaded settings and run one command.

    Flags left at None fall back to the configured defaults.
    """
    _setup_logging(log_level)
    try:
        settings = Settings.load(config)
    except ValueError as exc:
        print(f"error: invalid configuration in {config}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from exc
    numeric, verification = settings.numeric, settings.verification
    defaults: dict[str, object] = {
        "order": verification.order,
        "precision_bits": numeric.precision_bits,
        "max_terms": numeric.max_terms,
        "seed": verification.seed,
        "cases": verification.cases,
        "k_max": verification.k_max,
        "size_max": verification.size_max,
        "pairing_cases": verification.pairing_cases,
        "workers": verification.workers,
        "tail_exponent": numeric.tail_exponent,
    }
    merged = defaults | {name: value for name, value in fields.items() if value is not None}
    run_config = RunConfig(command=command, fmt=fmt, **merged)  # type: ignore[arg-type]
    raise SystemExit(run(run_config, _make_sink(fmt)))


@app.command
def qpoly(
    family: str,
    k: int = 0,
    a: str | None = None,
    b: str | None = None,
    c: str | None = None,
    d: str | None = None,
    format: FormatFlag = "text",
    config: Path = DEFAULT_CONFIG_PATH,
    log_level: str = "WARNING",
) -> None:
    """
    Print Q_k (or BQ_k, hat Q2_k, P_k) with exact coefficients.

    Families: Q2, Q3, Q3p, BQ2, BQ3, BQ3p, hatQ2, P. P reads A and B from --a and --b.
    """
    _execute(
        "qpoly",
        config=config,
        log_level=log_level,
        fmt=format,
        name=family,
        k=k,
        params=_collect({"a": a, "b": b, "c": c, "d": d}),
    )


@app.command
def roots(
    family: str,
    k: int = 0,
    a: str | None = None,
    b: str | None = None,
    c: str | None = None,
    d: str | None = None,
    precision_bits: int | None = None,
    format: FormatFlag = "text",
    config: Path = DEFAULT_CONFIG_PATH,
    log_level: str = "WARNING",
) -> None:
    """Print a weight polynomial together with its negated roots."""
    _execute(
        "roots",
        config=config,
        log_level=log_level,
        fmt=format,
        name=family,
        k=k,
        params=_collect({"a": a, "b": b, "c": c, "d": d}),
        precision_bits=precision_bits,
    )


@app.command(name="verify-transform")
def verify_transform(
    name: str,
    k: int = 0,
    a: str | None = None,
    b: str | None = None,
    c: str | None = None,
    d: str | None = None,
    e: str | None = None,
    f: str | None = None,
    g: str | None = None,
    w: str | None = None,
    theta: str | None = None,
    sign: str | None = None,
    perturb: list[str] | None = None,
    order: int | None = None,
    precision_bits: int | None = None,
    seed: int | None = None,
    tail_exponent: float | None = None,
    format: FormatFlag = "text",
    config: Path = DEFAULT_CONFIG_PATH,
    log_level: str = "WARNING",
) -> None:
    """
    Expand both sides of a registry transformation and compare coefficients.

    --perturb name=delta shifts one right-hand-side parameter to show a failure.
    """
    values = {"a": a, "b": b, "c": c, "d": d, "e": e, "f": f, "g": g}
    values |= {"w": w, "theta": theta, "sign": sign}
    _execute(
        "verify-transform",
        config=config,
        log_level=log_level,
        fmt=format,
        name=name,
        k=k,
        params=_collect(values),
        perturb=_parse_perturb(perturb),
        order=order,
        precision_bits=precision_bits,
        seed=seed,
        tail_exponent=tail_exponent,
    )


@app.command(name="verify-summation")
def verify_summation(
    name: str,
    k: int = 0,
    variant: str | None = None,
    a: str | None = None,
    b: str | None = None,
    c: str | None = None,
    d: str | None = None,
    e: str | None = None,
    f: str | None = None,
    g: str | None = None,
    w: str | None = None,
    small_n: Annotated[int | None, cyclopts.Parameter(name="--n")] = None,
    big_n: Annotated[int | None, cyclopts.Parameter(name="--N")] = None,
    m: Annotated[int | None, cyclopts.Parameter(name="--m")] = None,
    precision_bits: int | None = None,
    max_terms: int | None = None,
    format: FormatFlag = "text",
    config: Path = DEFAULT_CONFIG_PATH,
    log_level: str = "WARNING",
) -> None:
    """
    Check one closed-form summation at the given parameters.

    Sizes: --n (sheppard, whipple43, whipple43-limit, r-forms), --N (ext-whipple,
    ext-whipple-limit, dougall, gs-pairing), --m (bailey1, bailey2).
    """
    values = {"a": a, "b": b, "c": c, "d": d, "e": e, "f": f, "g": g, "w": w}
    sizes = {"n": small_n, "N": big_n, "m": m}
    _execute(
        "verify-summation",
        config=config,
        log_level=log_level,
        fmt=format,
        name=name,
        k=k,
        variant=variant,
        params=_collect(values),
        sizes={size: value for size, value in sizes.items() if value is not None},
        precision_bits=precision_bits,
        max_terms=max_terms,
    )


@app.command
def suite(
    cases: int | None = None,
    seed: int | None = None,
    order: int | None = None,
    k_max: int | None = None,
    size_max: int | None = None,
    pairing_cases: int | None = None,
    workers: int | None = None,
    precision_bits: int | None = None,
    tail_exponent: float | None = None,
    format: FormatFlag = "text",
    config: Path = DEFAULT_CONFIG_PATH,
    log_level: str = "INFO",
) -> None:
    """Run the randomized suite over every transformation, summation and polynomial check."""
    _execute(
        "suite",
        config=config,
        log_level=log_level,
        fmt=format,
        cases=cases,
        seed=seed,
        order=order,
        k_max=k_max,
        size_max=size_max,
        pairing_cases=pairing_cases,
        workers=workers,
        precision_bits=precision_bits,
        tail_exponent=tail_exponent,
    )


def main(tokens: list[str] | None = None) -> None:
    """
    Entry point for the hyperlift CLI.

    Unparseable command lines exit with status 2 after cyclopts has printed the error.
    """
    try:
        app(tokens, exit_on_error=False)
    except cyclopts.CycloptsError as exc:
        raise SystemExit(EXIT_USAGE) from exc


if __name__ == "__main__":
    main()
