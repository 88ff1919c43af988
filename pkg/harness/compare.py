"""
Simulation vs. theory comparison over sweep rows.

Rows are judged against the tolerance only well above threshold
(sigma >= above_sigma). Rows inside the near-critical band are listed but
never judged; rows without simulation columns are skipped with a note.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Iterable

from cliqueperc.errors import EXIT_CODES, EXIT_OK, ErrorCode, StructuredError, make_error

from .sweep import ResultRow

DEFAULT_TOLERANCE = 0.03
DEFAULT_ABOVE_SIGMA = 1.1
DEFAULT_NEAR_LOW = 0.9

JUDGED = "judged"
NEAR_CRITICAL = "near_critical"
BELOW = "below_threshold"
SKIPPED = "skipped"


@dataclass(frozen=True)
class RowDeviation:
    scenario: str
    T_w: float
    T_f: float
    sigma: float
    status: str
    dev_S_c: float | None = None
    dev_S_n: float | None = None
    note: str = ""

    @property
    def max_dev(self) -> float:
        return max(self.dev_S_c or 0.0, self.dev_S_n or 0.0)


@dataclass(frozen=True)
class ComparisonReport:
    tolerance: float
    above_sigma: float
    rows: tuple[RowDeviation, ...] = field(default_factory=tuple)

    def by_status(self, status: str) -> list[RowDeviation]:
        return [r for r in self.rows if r.status == status]

    @property
    def judged(self) -> list[RowDeviation]:
        return self.by_status(JUDGED)

    @property
    def near_critical(self) -> list[RowDeviation]:
        return self.by_status(NEAR_CRITICAL)

    @property
    def skipped(self) -> list[RowDeviation]:
        return self.by_status(SKIPPED)

    @property
    def failures(self) -> list[RowDeviation]:
        return [r for r in self.judged if r.max_dev > self.tolerance]

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def error(self) -> StructuredError | None:
        if self.passed:
            return None
        return make_error(
            ErrorCode.COMPARE_TOLERANCE,
            f"{len(self.failures)} of {len(self.judged)} judged rows deviate more than "
            f"{self.tolerance:g} (max {self.max_deviation:.4g})",
            failures=len(self.failures),
            judged=len(self.judged),
            tolerance=self.tolerance,
        )

    @property
    def exit_code(self) -> int:
        err = self.error
        return EXIT_OK if err is None else EXIT_CODES[err.category]

    def _devs(self, rows: list[RowDeviation]) -> list[float]:
        return [r.max_dev for r in rows]

    @property
    def max_deviation(self) -> float:
        devs = self._devs(self.judged)
        return max(devs) if devs else 0.0

    @property
    def mean_deviation(self) -> float:
        devs = self._devs(self.judged)
        return sum(devs) / len(devs) if devs else 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "tolerance": self.tolerance,
            "above_sigma": self.above_sigma,
            "passed": self.passed,
            "error": None if self.error is None else self.error.to_dict(),
            "judged": len(self.judged),
            "max_deviation": self.max_deviation,
            "mean_deviation": self.mean_deviation,
            "failures": [asdict(r) for r in self.failures],
            "near_critical": [asdict(r) for r in self.near_critical],
            "skipped": [asdict(r) for r in self.skipped],
            "rows": [asdict(r) for r in self.rows],
        }


def _classify(row: ResultRow, above_sigma: float, near_low: float) -> str:
    if not row.has_simulation:
        return SKIPPED
    if row.sigma >= above_sigma:
        return JUDGED
    if row.sigma > near_low:
        return NEAR_CRITICAL
    return BELOW


def compare(
    rows: Iterable[ResultRow],
    tolerance: float = DEFAULT_TOLERANCE,
    above_sigma: float = DEFAULT_ABOVE_SIGMA,
    near_low: float = DEFAULT_NEAR_LOW,
) -> ComparisonReport:
    out = []
    for row in rows:
        status = _classify(row, above_sigma, near_low)
        if status == SKIPPED:
            out.append(
                RowDeviation(
                    row.scenario,
                    row.T_w,
                    row.T_f,
                    row.sigma,
                    status,
                    note=row.note or "no simulation columns",
                )
            )
            continue
        out.append(
            RowDeviation(
                row.scenario,
                row.T_w,
                row.T_f,
                row.sigma,
                status,
                dev_S_c=abs(row.S_c_sim_mean - row.S_c_analytic),
                dev_S_n=abs(row.S_n_sim_mean - row.S_n_analytic),
                note=row.note,
            )
        )
    return ComparisonReport(tolerance=tolerance, above_sigma=above_sigma, rows=tuple(out))


def format_report(report: ComparisonReport) -> str:
    lines = [
        f"compared rows: {len(report.rows)} "
        f"(judged {len(report.judged)}, near-critical {len(report.near_critical)}, "
        f"skipped {len(report.skipped)})",
        f"tolerance {report.tolerance:g} for sigma >= {report.above_sigma:g}",
        f"max deviation {report.max_deviation:.4f}, mean {report.mean_deviation:.4f}",
    ]
    for r in report.failures:
        lines.append(
            f"  FAIL {r.scenario} T_w={r.T_w:g} T_f={r.T_f:g} sigma={r.sigma:.3f} "
            f"dS_c={r.dev_S_c:.4f} dS_n={r.dev_S_n:.4f}"
        )
    for r in report.near_critical:
        lines.append(
            f"  near-critical {r.scenario} T_w={r.T_w:g} T_f={r.T_f:g} sigma={r.sigma:.3f} "
            f"max_dev={r.max_dev:.4f}"
        )
    for r in report.skipped:
        lines.append(f"  skipped {r.scenario} T_w={r.T_w:g} T_f={r.T_f:g}: {r.note}")
    lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines)
