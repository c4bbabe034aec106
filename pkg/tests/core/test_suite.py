"""Tests for seeded sampling and the acceptance matrix."""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import replace
from fractions import Fraction

import pytest

from hyperlift.core import suite
from hyperlift.core.errors import DomainError
from hyperlift.core.hyperseries import WeightedSeries
from hyperlift.core.identities import IDENTITIES
from hyperlift.core.models import RunConfig, VerificationReport
from hyperlift.core.reporting import emit_report
from hyperlift.core.sampling import (
    MAX_DRAWS,
    case_rng,
    draw_params,
    random_rational,
    reject_poles,
    sample_until,
)
from hyperlift.core.suite import KUMMER_CASES, SuiteTask, plan_suite, run_suite, run_task

SMALL = RunConfig(command="suite", cases=2, k_max=1, pairing_cases=1, order=6)


class TestSampling:
    def test_case_rng_is_reproducible(self) -> None:
        first = draw_params(case_rng(42, "transform", "thmA2", 1, 0), "abc")
        again = draw_params(case_rng(42, "transform", "thmA2", 1, 0), "abc")
        other = draw_params(case_rng(42, "transform", "thmA2", 1, 1), "abc")
        assert first == again
        assert first != other

    def test_random_rational_range(self) -> None:
        rng = random.Random(0)
        for _ in range(100):
            value = random_rational(rng)
            assert value != 0
            assert 1 <= abs(value.numerator) <= 9
            assert 1 <= value.denominator <= 9

    def test_sign_draws_unit(self) -> None:
        params = draw_params(random.Random(3), ("b", "sign"))
        assert params["sign"] in (1, -1)

    def test_reject_poles(self) -> None:
        reject_poles(WeightedSeries((1,), (Fraction(1, 2),)))
        with pytest.raises(DomainError):
            reject_poles(WeightedSeries((1,), (Fraction(-2),)))

    def test_sample_until_redraws(self) -> None:
        calls = []

        def attempt(rng: random.Random) -> int:
            calls.append(1)
            if len(calls) < 3:
                raise DomainError("singular")
            return len(calls)

        assert sample_until(attempt, random.Random(0)) == 3

    def test_sample_until_gives_up(self) -> None:
        def attempt(rng: random.Random) -> int:
            raise ZeroDivisionError

        with pytest.raises(DomainError, match=str(MAX_DRAWS)):
            sample_until(attempt, random.Random(0), label="always singular")


class TestPlan:
    def test_indices_follow_order(self) -> None:
        tasks = plan_suite(SMALL)
        assert [t.index for t in tasks] == list(range(len(tasks)))

    def test_transform_cases(self) -> None:
        tasks = [t for t in plan_suite(SMALL) if t.kind == "transform"]
        per_identity = Counter(t.name for t in tasks)
        assert per_identity["thmA2"] == 2 * SMALL.cases
        assert per_identity["niblett"] == SMALL.cases
        assert set(per_identity) == set(IDENTITIES)

    def test_kummer_cases(self) -> None:
        tasks = [t for t in plan_suite(SMALL) if t.kind == "kummer"]
        assert [t.k for t in tasks] == [k for k, _, _ in KUMMER_CASES]

    def test_pairing_covers_every_base(self) -> None:
        bases = {t.variant for t in plan_suite(SMALL) if t.name == "gs-pairing"}
        assert bases == {"thmA2", "thmB2", "thmA3", "thmB3"}


class TestRunTask:
    def test_transform_case_passes(self) -> None:
        report = run_task(SuiteTask(0, "transform", "thmA2", k=1), SMALL)
        assert report.passed, report.first_mismatch
        assert report.seed == SMALL.seed
        assert report.extra["case"] == 0

    def test_deterministic(self) -> None:
        task = SuiteTask(0, "key-lemma", "quadratic", case=1)
        assert run_task(task, SMALL).params == run_task(task, SMALL).params

    def test_kummer_case(self) -> None:
        report = run_task(SuiteTask(0, "kummer", "kummer", k=1, case=1), SMALL)
        assert report.passed
        assert report.params == {"a": "2", "b": "-2"}

    def test_error_becomes_failing_report(self) -> None:
        task = SuiteTask(0, "polycheck", "nonsense:Q2")
        report = run_task(task, SMALL)
        assert not report.passed
        assert report.error == "domain"


def test_run_suite_delivers_in_order(monkeypatch: pytest.MonkeyPatch) -> None:
    tasks = [
        SuiteTask(0, "kummer", "kummer", k=0, case=0),
        SuiteTask(1, "polycheck", "p-antisymmetry", k=2),
        SuiteTask(2, "kummer", "kummer", k=2, case=2),
    ]
    monkeypatch.setattr(suite, "plan_suite", lambda config: tasks)
    seen: list[VerificationReport] = []
    reports = run_suite(SMALL, on_report=seen.append)
    assert reports == seen
    assert [r.identity for r in reports] == ["kummer", "p-antisymmetry", "kummer"]
    assert all(r.passed for r in reports)


def test_small_suite_passes_everywhere() -> None:
    reports = run_suite(SMALL)
    assert len(reports) == len(plan_suite(SMALL))
    failures = [(r.identity, r.k, r.params, r.detail) for r in reports if not r.passed]
    assert failures == []


def _without_timing(text: str) -> list[dict[str, object]]:
    objects = [json.loads(line) for line in text.splitlines()]
    for item in objects:
        item.pop("elapsed_ms")
    return objects


def test_worker_count_does_not_change_output() -> None:
    config = replace(SMALL, cases=1)
    serial = emit_report(run_suite(config), "json")
    pooled = emit_report(run_suite(replace(config, workers=2)), "json")
    assert _without_timing(pooled) == _without_timing(serial)
