# harness/metrics.py
"""
Prometheus-compatible metrics for simulation runs.

Exposes counters and histograms for:
- Replications and their wall time
- Generation failures and discarded stubs by link type
- Fixed-point iteration counts
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from threading import Lock
from typing import Any

from cliqueperc.percolate import PercolationOutcome


@dataclass
class Counter:
    """Thread-safe counter."""

    value: int = 0
    _lock: Lock = field(default_factory=Lock, repr=False)

    def inc(self, amount: int = 1) -> None:
        with self._lock:
            self.value += amount

    def get(self) -> int:
        with self._lock:
            return self.value


@dataclass
class Histogram:
    """Simple histogram with predefined buckets."""

    buckets: tuple[float, ...] = (0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.5, 5.0, 10.0)
    _counts: dict[float, int] = field(default_factory=lambda: defaultdict(int))
    _sum: float = 0.0
    _count: int = 0
    _lock: Lock = field(default_factory=Lock, repr=False)

    def observe(self, value: float) -> None:
        with self._lock:
            self._sum += value
            self._count += 1
            for bucket in self.buckets:
                if value <= bucket:
                    self._counts[bucket] += 1

    def get(self) -> dict[str, Any]:
        with self._lock:
            result = {
                "sum": self._sum,
                "count": self._count,
                "buckets": {str(b): self._counts[b] for b in self.buckets},
            }
            if self._count > 0:
                result["mean"] = self._sum / self._count
            return result


ITERATION_BUCKETS = (1.0, 10.0, 100.0, 1_000.0, 10_000.0, 100_000.0)


class SimulationMetrics:
    """Registry for all simulation metrics."""

    def __init__(self) -> None:
        self.replications_total = Counter()
        self.sweep_points_total = Counter()
        self.generation_failures_total: dict[str, Counter] = defaultdict(Counter)
        self.stubs_discarded_total: dict[str, Counter] = defaultdict(Counter)
        self.replication_duration_seconds = Histogram()
        self.fixed_point_iterations = Histogram(buckets=ITERATION_BUCKETS)
        self.fixed_point_nonconverged_total = Counter()

    def record_outcome(self, outcome: PercolationOutcome) -> None:
        """Record every replication of an ensemble."""
        for r in outcome.replications:
            self.replications_total.inc()
            self.replication_duration_seconds.observe(r.elapsed_s)
            self.stubs_discarded_total["type1"].inc(r.discarded_type1)
            self.stubs_discarded_total["type2"].inc(r.discarded_type2)

    def record_generation_failure(self, link_type: str) -> None:
        self.generation_failures_total[link_type].inc()

    def record_fixed_point(self, iterations: int, converged: bool) -> None:
        self.fixed_point_iterations.observe(float(iterations))
        if not converged:
            self.fixed_point_nonconverged_total.inc()

    def to_prometheus(self) -> str:
        """Export metrics in Prometheus text format."""
        lines = []

        lines.append("# HELP cliqueperc_replications_total Percolation replications run")
        lines.append("# TYPE cliqueperc_replications_total counter")
        lines.append(f"cliqueperc_replications_total {self.replications_total.get()}")

        lines.append("# HELP cliqueperc_sweep_points_total Grid points evaluated")
        lines.append("# TYPE cliqueperc_sweep_points_total counter")
        lines.append(f"cliqueperc_sweep_points_total {self.sweep_points_total.get()}")

        lines.append("# HELP cliqueperc_generation_failures_total Generation failures by link type")
        lines.append("# TYPE cliqueperc_generation_failures_total counter")
        for link, counter in self.generation_failures_total.items():
            lines.append(f'cliqueperc_generation_failures_total{{link="{link}"}} {counter.get()}')

        lines.append("# HELP cliqueperc_stubs_discarded_total Unmatched stubs by link type")
        lines.append("# TYPE cliqueperc_stubs_discarded_total counter")
        for link, counter in self.stubs_discarded_total.items():
            lines.append(f'cliqueperc_stubs_discarded_total{{link="{link}"}} {counter.get()}')

        for name, hist, help_text in (
            ("replication_duration_seconds", self.replication_duration_seconds, "Replication wall time"),
            ("fixed_point_iterations", self.fixed_point_iterations, "Fixed-point iterations"),
        ):
            data = hist.get()
            lines.append(f"# HELP cliqueperc_{name} {help_text}")
            lines.append(f"# TYPE cliqueperc_{name} histogram")
            for bucket, count in data["buckets"].items():
                lines.append(f'cliqueperc_{name}_bucket{{le="{bucket}"}} {count}')
            lines.append(f"cliqueperc_{name}_sum {data['sum']}")
            lines.append(f"cliqueperc_{name}_count {data['count']}")

        lines.append("# HELP cliqueperc_fixed_point_nonconverged_total Fixed points hitting max_iter")
        lines.append("# TYPE cliqueperc_fixed_point_nonconverged_total counter")
        lines.append(
            f"cliqueperc_fixed_point_nonconverged_total {self.fixed_point_nonconverged_total.get()}"
        )

        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict[str, Any]:
        """Export metrics as JSON-serializable dict."""
        return {
            "replications": self.replications_total.get(),
            "sweep_points": self.sweep_points_total.get(),
            "generation_failures": {k: v.get() for k, v in self.generation_failures_total.items()},
            "stubs_discarded": {k: v.get() for k, v in self.stubs_discarded_total.items()},
            "replication_duration_seconds": self.replication_duration_seconds.get(),
            "fixed_point": {
                "iterations": self.fixed_point_iterations.get(),
                "nonconverged": self.fixed_point_nonconverged_total.get(),
            },
        }


# Global metrics instance
METRICS = SimulationMetrics()


def get_metrics() -> SimulationMetrics:
    """Get global metrics registry."""
    return METRICS
