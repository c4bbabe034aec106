"""
The acceptance matrix: planning every case and running them, optionally in parallel.

plan_suite lays the matrix out as an ordered list of SuiteTasks. run_task is
a module-level function of (task, config) only, so tasks can be shipped to
worker processes; each case seeds its own generator, which keeps results
identical across worker counts. Reports always come back in task order.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Iterator
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Literal, cast

from loguru import logger

from hyperlift.core.errors import DomainError, HyperliftError
from hyperlift.core.identities import IDENTITIES, build_identity, verify_curious_merge
from hyperlift.core.lifting import CUBIC, CUBIC_SECOND, QUADRATIC, LiftingMap
from hyperlift.core.models import RunConfig, VerificationReport
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
from hyperlift.core.qpoly import BoldQFamily, BoldTag, QFamily, QTag
from hyperlift.core.reporting import failure_report, threshold_override
from hyperlift.core.sampling import (
    case_rng,
    draw_params,
    random_rational,
    reject_poles,
    sample_until,
)
from hyperlift.core.summations import (
    SUMMATIONS,
    SummationCase,
    gs_pair,
    run_summation,
    verify_kummer_ext,
)
from hyperlift.core.transforms import verify_key_lemma, verify_novelty, verify_transform

type TaskKind = Literal[
    "transform", "curious-merge", "polycheck", "novelty", "key-lemma", "summation", "kummer"
]

# Polynomial identities are checked up to this k regardless of --k-max.
POLY_K_MAX = 4
CURIOUS_CASES = 5
GENERATING_K = 3
GENERATING_POINTS = 4
KUMMER_CASES = ((0, 2, -1), (1, 2, -2), (2, 4, -3))
GS_K = (0, 1, 2)
GS_SIZES = (0, 1, 2)

KEY_LEMMA_MAPS: dict[str, LiftingMap] = {
    "quadratic": QUADRATIC,
    "cubic": CUBIC,
    "cubic-second": CUBIC_SECOND,
}


@dataclass(frozen=True)
class SuiteTask:
    """One case of the matrix."""

    index: int
    kind: TaskKind
    name: str
    k: int = 0
    case: int = 0
    variant: str | None = None
    size: int | None = None


# ── polynomial check table ─────────────────────────────────────────────

type Family = QFamily | BoldQFamily

_POLY_FAMILIES: dict[str, tuple[tuple[str, ...], int]] = {
    "representation": (("Q2", "Q3", "Q3p", "Q2d", "Q3d", "Q3pd"), 0),
    "degree": (("Q2", "Q3", "Q3p", "Q2d", "Q3d", "Q3pd", "BQ2", "BQ3", "BQ3p"), 0),
    "lowering": (("Q2",), 1),
    "symmetry": (("Q2", "Q2d", "BQ2"), 0),
    "bold-cross": (("BQ2",), 0),
    "poisedness": (("Q2", "BQ2"), 0),
}


def run_polycheck(check: str, f: Family, config: RunConfig) -> VerificationReport:
    """Dispatch one of the family-based polynomial checks."""
    match check:
        case "degree":
            return check_degree(f)
        case "symmetry":
            return check_symmetry(f)
        case "poisedness":
            return check_poisedness(f, config.precision_bits)
        case "bold-cross" if isinstance(f, BoldQFamily):
            return check_bold_cross(f)
        case "representation" if isinstance(f, QFamily):
            return check_representation(f)
        case "lowering" if isinstance(f, QFamily):
            return check_lowering(f)
    raise DomainError(f"no polynomial check '{check}' for {type(f).__name__}")


def draw_family(rng: random.Random, key: str, k: int) -> Family:
    """A random member of the family named by ``key`` (Q2d = four-parameter Q2)."""
    p = draw_params(rng, ("a", "b", "c", "d"))
    if key.startswith("B"):
        c = p["c"] if key == "BQ2" else None
        return BoldQFamily(cast(BoldTag, key), k, p["a"], p["b"], c)
    four = key.endswith("d")
    tag = key.removesuffix("d")
    return QFamily(
        cast(QTag, tag),
        k,
        p["a"],
        p["b"],
        p["c"] if tag == "Q2" else None,
        p["d"] if four else None,
    )


# ── planning ───────────────────────────────────────────────────────────


def _plan(config: RunConfig) -> Iterator[tuple[TaskKind, str, int, int, str | None, int | None]]:
    ks = range(config.k_max + 1)
    for name, spec in IDENTITIES.items():
        for k in [spec.fixed_k] if spec.fixed_k is not None else ks:
            for case in range(config.cases):
                yield "transform", name, k, case, None, None
    for case in range(CURIOUS_CASES):
        yield "curious-merge", "curious", 1, case, None, None

    poly_ks = range(POLY_K_MAX + 1)
    for check, (keys, k_min) in _POLY_FAMILIES.items():
        for key in keys:
            for k in poly_ks:
                if k >= k_min:
                    yield "polycheck", f"{check}:{key}", k, 0, None, None
    for k in poly_ks:
        yield "polycheck", "d-limit:Q2", k, 0, None, None
    for k in range(GENERATING_K + 1):
        yield "polycheck", "p-antisymmetry", k, 0, None, None
    yield "polycheck", "p-generating", GENERATING_K, 0, None, None
    yield "polycheck", "printed-forms", 1, 0, None, None

    for tag in ("Q2", "Q3", "Q3p"):
        for k in range(1, config.k_max + 1):
            for case in range(config.cases):
                yield "novelty", tag, k, case, None, None
    for label in KEY_LEMMA_MAPS:
        for case in range(config.cases):
            yield "key-lemma", label, 0, case, None, None

    for name, summation in SUMMATIONS.items():
        if name in ("gs-pairing", "kummer"):
            continue
        for variant in list(summation.variants) or [None]:
            for k in ks if summation.uses_k else [0]:
                for case in range(config.cases):
                    yield "summation", name, k, case, variant, None
    for base in SUMMATIONS["gs-pairing"].variants:
        for k in GS_K:
            for size in GS_SIZES:
                for case in range(config.pairing_cases):
                    yield "summation", "gs-pairing", k, case, base, size
    for case, (k, _, _) in enumerate(KUMMER_CASES):
        yield "kummer", "kummer", k, case, None, None


def plan_suite(config: RunConfig) -> list[SuiteTask]:
    """The full matrix in execution (and report) order."""
    return [
        SuiteTask(index, kind, name, k, case, variant, size)
        for index, (kind, name, k, case, variant, size) in enumerate(_plan(config))
    ]


# ── execution ──────────────────────────────────────────────────────────


def _transform(task: SuiteTask, config: RunConfig, rng: random.Random) -> VerificationReport:
    names = IDENTITIES[task.name].param_names

    def attempt(r: random.Random) -> VerificationReport:
        identity = build_identity(
            task.name, task.k, draw_params(r, names), precision_bits=config.precision_bits
        )
        reject_poles(identity.lhs, identity.rhs)
        return verify_transform(
            identity, config.order, tol=threshold_override(config.tail_exponent)
        )

    return sample_until(attempt, rng, label=f"{task.name} k={task.k}")


def _polycheck(task: SuiteTask, config: RunConfig, rng: random.Random) -> VerificationReport:
    check, _, key = task.name.partition(":")

    def attempt(r: random.Random) -> VerificationReport:
        match check:
            case "d-limit":
                p = draw_params(r, ("a", "b", "c"))
                return check_d_limit(task.k, p["a"], p["b"], p["c"])
            case "p-antisymmetry":
                p = draw_params(r, ("A", "B"))
                return check_p_antisymmetry(task.k, p["A"], p["B"])
            case "p-generating":
                p = draw_params(r, ("A", "B"))
                points = [random_rational(r) for _ in range(GENERATING_POINTS)]
                return check_p_generating(task.k, p["A"], p["B"], points)
            case "printed-forms":
                p = draw_params(r, ("a", "b", "c", "d"))
                return check_printed_forms(p["a"], p["b"], p["c"], p["d"])
            case _:
                return run_polycheck(check, draw_family(r, key, task.k), config)

    return sample_until(attempt, rng, label=task.name)


def _novelty(task: SuiteTask, config: RunConfig, rng: random.Random) -> VerificationReport:
    def attempt(r: random.Random) -> VerificationReport:
        f = draw_family(r, task.name, task.k)
        assert isinstance(f, QFamily)
        return verify_novelty(f, config.order)

    return sample_until(attempt, rng, label=f"novelty {task.name}")


def _key_lemma(task: SuiteTask, config: RunConfig, rng: random.Random) -> VerificationReport:
    lifting = KEY_LEMMA_MAPS[task.name]

    def attempt(r: random.Random) -> VerificationReport:
        alpha = [random_rational(r)]
        beta = [random_rational(r) for _ in range(lifting.l + lifting.m)]
        if any(b.denominator == 1 and b <= 0 for b in beta):
            raise DomainError("lower parameter pole")
        return verify_key_lemma(lifting, random_rational(r), alpha, beta, config.order)

    return sample_until(attempt, rng, label=f"key lemma {lifting}")


def _summation(task: SuiteTask, config: RunConfig, rng: random.Random) -> VerificationReport:
    spec = SUMMATIONS[task.name]
    names = spec.names_for(task.variant)

    def attempt(r: random.Random) -> VerificationReport:
        size = task.size if task.size is not None else r.randint(0, config.size_max)
        case = SummationCase(
            name=task.name,
            k=task.k,
            sizes={spec.size_name: size} if spec.size_name else {},
            params=draw_params(r, names),
            variant=task.variant,
            precision_bits=config.precision_bits,
            max_terms=config.max_terms,
        )
        if task.name == "gs-pairing":
            return gs_pair(task.variant or "thmA2", task.k, size, case.params)
        return run_summation(case)

    return sample_until(attempt, rng, label=f"{task.name} k={task.k}")


def _curious_merge(task: SuiteTask, config: RunConfig, rng: random.Random) -> VerificationReport:
    def attempt(r: random.Random) -> VerificationReport:
        return verify_curious_merge(random_rational(r), precision_bits=config.precision_bits)

    return sample_until(attempt, rng, label="curious-merge")


def _kummer(task: SuiteTask, config: RunConfig, rng: random.Random) -> VerificationReport:
    k, a, b = KUMMER_CASES[task.case]
    return verify_kummer_ext(
        k,
        Fraction(a),
        Fraction(b),
        precision_bits=config.precision_bits,
        max_terms=config.max_terms,
    )


_RUNNERS: dict[str, Callable[[SuiteTask, RunConfig, random.Random], VerificationReport]] = {
    "transform": _transform,
    "curious-merge": _curious_merge,
    "polycheck": _polycheck,
    "novelty": _novelty,
    "key-lemma": _key_lemma,
    "summation": _summation,
    "kummer": _kummer,
}


def run_task(task: SuiteTask, config: RunConfig) -> VerificationReport:
    """
    Run one case; a HyperliftError becomes a failing report instead of propagating.
    """
    rng = case_rng(config.seed, task.kind, task.name, task.k, task.case)
    extra = {"case": task.case} | ({"variant": task.variant} if task.variant else {})
    try:
        report = _RUNNERS[task.kind](task, config, rng)
    except HyperliftError as exc:
        logger.warning("{} k={} case {} failed: {}", task.name, task.k, task.case, exc)
        return failure_report(task.name, exc, k=task.k, seed=config.seed, extra=extra)
    return replace(report, seed=config.seed, extra=extra | report.extra)


def run_suite(
    config: RunConfig, on_report: Callable[[VerificationReport], None] | None = None
) -> list[VerificationReport]:
    """
    Run the whole matrix and return its reports in task order.

    With ``config.workers`` > 1 the cases run on a process pool; finished
    reports are still handed to ``on_report`` strictly in task order.
    """
    tasks = plan_suite(config)
    logger.info("suite: {} cases on {} worker(s)", len(tasks), config.workers)
    reports: list[VerificationReport] = []

    def deliver(report: VerificationReport) -> None:
        reports.append(report)
        if on_report is not None:
            on_report(report)

    if config.workers <= 1:
        for task in tasks:
            deliver(run_task(task, config))
        return reports

    finished: dict[int, VerificationReport] = {}
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        futures = {pool.submit(run_task, task, config): task.index for task in tasks}
        for future in as_completed(futures):
            finished[futures[future]] = future.result()
            while len(reports) in finished:
                deliver(finished.pop(len(reports)))
    return reports
