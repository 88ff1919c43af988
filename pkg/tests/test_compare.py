# tests/test_compare.py
"""
Simulation vs. theory comparison and its report.
"""

from __future__ import annotations

import json

import pytest

from cliqueperc.errors import EXIT_COMPARISON, EXIT_OK, ErrorCode
from harness.compare import BELOW, JUDGED, NEAR_CRITICAL, SKIPPED, compare, format_report
from harness.sweep import ResultRow


def row(sigma, analytic, sim, T_f=1.0, note=""):
    if sim is None:
        return ResultRow("s", 0.3, T_f, sigma, analytic, analytic, note=note)
    return ResultRow(
        "s",
        0.3,
        T_f,
        sigma,
        analytic,
        analytic,
        S_c_sim_mean=sim,
        S_c_sim_std=0.01,
        S_n_sim_mean=sim,
        S_n_sim_std=0.01,
        p_inf=1.0,
        replications=10,
    )


class TestClassification:
    """Which rows are judged."""

    def test_statuses(self):
        report = compare(
            [
                row(1.5, 0.5, 0.51),
                row(1.0, 0.0, 0.2),
                row(0.5, 0.0, 0.0),
                row(2.0, 0.7, None, note="generation failed: x"),
            ]
        )
        assert [r.status for r in report.rows] == [JUDGED, NEAR_CRITICAL, BELOW, SKIPPED]
        assert report.skipped[0].note == "generation failed: x"

    def test_missing_simulation_note(self):
        report = compare([row(2.0, 0.7, None)])
        assert report.skipped[0].note == "no simulation columns"


class TestVerdict:
    """Tolerance check over judged rows."""

    def test_pass(self):
        report = compare([row(1.5, 0.5, 0.51), row(2.0, 0.7, 0.68)])
        assert report.passed
        assert report.exit_code == EXIT_OK
        assert report.error is None
        assert report.max_deviation == pytest.approx(0.02)
        assert report.mean_deviation == pytest.approx(0.015)
        assert format_report(report).endswith("PASS")

    def test_fail(self):
        report = compare([row(1.5, 0.5, 0.51), row(2.0, 0.7, 0.6)])
        assert not report.passed
        assert report.exit_code == EXIT_COMPARISON
        assert len(report.failures) == 1
        assert report.error.code == ErrorCode.COMPARE_TOLERANCE
        assert report.error.category == "compare"
        assert report.error.details["failures"] == 1
        text = format_report(report)
        assert "FAIL s" in text
        assert text.endswith("FAIL")

    def test_near_critical_never_fails(self):
        report = compare([row(1.05, 0.05, 0.4)])
        assert report.passed
        assert len(report.near_critical) == 1

    def test_custom_tolerance(self):
        rows = [row(1.5, 0.5, 0.55)]
        assert not compare(rows).passed
        assert compare(rows, tolerance=0.06).passed

    def test_empty(self):
        report = compare([])
        assert report.passed
        assert report.max_deviation == 0.0

    def test_json_serializable(self):
        report = compare([row(1.5, 0.5, 0.6), row(1.0, 0.0, 0.0)])
        data = json.loads(json.dumps(report.to_dict()))
        assert data["passed"] is False
        assert data["judged"] == 1
        assert data["error"]["code"] == ErrorCode.COMPARE_TOLERANCE
        assert len(data["rows"]) == 2
