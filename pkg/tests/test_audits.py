"""Tests for the audit runner and its fault hook."""

import pytest

from dirilab.src.config import DEFAULT_LEVEL_BUDGET
from dirilab.src.engine.audits import (
    AuditSettings,
    audit_cassels,
    audit_continuants,
    audit_geometry,
    run_audits,
)
from dirilab.src.engine.cantor import make_schedule


def quick_settings(**overrides):
    values = dict(
        depth=6,
        word_length=4,
        quotient_cap=3,
        cassels_samples=50,
        witness_samples=200,
        inclusion_samples=200,
    )
    values.update(overrides)
    return AuditSettings(**values)


class TestSmallAudits:
    def test_continuants_are_clean(self):
        assert audit_continuants(6, 5) == []

    def test_cassels_is_clean(self):
        assert audit_cassels(500, 10**6, seed=0) == []

    def test_geometry_is_clean(self, audit_schedule):
        assert audit_geometry(audit_schedule, depth=5, budget=10_000) == []

    @pytest.mark.parametrize("M", [2, 3, 5])
    def test_geometry_is_clean_past_the_first_window(self, M):
        # windows at 4 and 10; level 8 holds 171875 intervals for M = 5
        schedule = make_schedule(M, 2, [1, 2])
        assert audit_geometry(schedule, depth=8, budget=DEFAULT_LEVEL_BUDGET) == []


class TestRunAudits:
    def test_clean_run(self, audit_schedule):
        seen = []
        report = run_audits(audit_schedule, quick_settings(), on_check=seen.append)
        assert report.passed
        assert report.checks == seen
        assert report.checks == [
            "continuants",
            "cassels",
            "geometry",
            "witnesses",
            "inclusion",
            "normalization",
            "holder",
        ]
        assert report.samples["levels"] == 6

    def test_injected_gap_fault_is_reported_once(self, audit_schedule):
        report = run_audits(audit_schedule, quick_settings(inject_fault="gap-bound"))
        assert len(report.findings) == 1
        assert report.findings[0].check == "gap-I"
        # leftmost level-1 interval: a_1 = M
        assert report.findings[0].subject == "[3]"

    def test_unknown_fault(self, audit_schedule):
        with pytest.raises(ValueError):
            run_audits(audit_schedule, quick_settings(inject_fault="bogus"))
