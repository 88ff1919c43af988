"""
Parameter sweeps: analytic solution at every (T_w, T_f) grid point, plus an
ensemble simulation when the scenario asks for replications.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, fields, replace
from typing import Optional

from cliqueperc.analytic import AnalyticSolution, solve
from cliqueperc.config import DEFAULT_RETRY_PASSES, DEFAULT_TAIL_MASS
from cliqueperc.errors import GenerationError
from cliqueperc.percolate import PercolationOutcome, run_ensemble

from .metrics import SimulationMetrics, get_metrics
from .scenarios import ScenarioConfig

logger = logging.getLogger(__name__)

GENERATION_FAILED = "generation failed"


@dataclass(frozen=True)
class ResultRow:
    """One grid point. Simulation columns are None when no simulation ran."""

    scenario: str
    T_w: float
    T_f: float
    sigma: float
    S_c_analytic: float
    S_n_analytic: float
    S_c_sim_mean: Optional[float] = None
    S_c_sim_std: Optional[float] = None
    S_n_sim_mean: Optional[float] = None
    S_n_sim_std: Optional[float] = None
    p_inf: Optional[float] = None
    replications: int = 0
    seed: int = 0
    note: str = ""

    @property
    def has_simulation(self) -> bool:
        return self.S_c_sim_mean is not None and self.S_n_sim_mean is not None

    @classmethod
    def from_results(
        cls,
        scenario: str,
        sol: AnalyticSolution,
        outcome: PercolationOutcome | None,
        seed: int,
        note: str = "",
    ) -> ResultRow:
        row = cls(
            scenario=scenario,
            T_w=sol.T_w,
            T_f=sol.T_f,
            sigma=sol.sigma,
            S_c_analytic=sol.S_c,
            S_n_analytic=sol.S_n,
            seed=seed,
            note=note,
        )
        if outcome is None:
            return row
        return replace(
            row,
            S_c_sim_mean=outcome.S_c_mean,
            S_c_sim_std=outcome.S_c_std,
            S_n_sim_mean=outcome.S_n_mean,
            S_n_sim_std=outcome.S_n_std,
            p_inf=outcome.p_inf,
            replications=outcome.replication_count,
        )


COLUMNS: tuple[str, ...] = tuple(f.name for f in fields(ResultRow))


def run_point(
    config: ScenarioConfig,
    T_w: float,
    T_f: float,
    *,
    workers: int = 1,
    tail_mass: float = DEFAULT_TAIL_MASS,
    retry_passes: int = DEFAULT_RETRY_PASSES,
    metrics: SimulationMetrics | None = None,
) -> tuple[ResultRow, PercolationOutcome | None]:
    """Solve and (when replications > 0) simulate a single grid point."""
    metrics = metrics or get_metrics()
    kw, kf = config.laws(tail_mass)
    sol = solve(config.profile(), kw, kf, T_w, T_f)
    metrics.record_fixed_point(sol.iterations, sol.converged)

    outcome: PercolationOutcome | None = None
    note = ""
    if not sol.converged:
        note = "fixed point not converged"
    if config.replications > 0:
        try:
            outcome = run_ensemble(
                config.gen_params(tail_mass=tail_mass, retry_passes=retry_passes),
                T_w,
                T_f,
                config.replications,
                giant_threshold_fraction=config.giant_threshold,
                regenerate_network_each_run=config.regenerate,
                seed=config.seed,
                workers=workers,
            )
            metrics.record_outcome(outcome)
        except GenerationError as e:
            metrics.record_generation_failure(e.link_type)
            note = f"{GENERATION_FAILED}: {e}"

    metrics.sweep_points_total.inc()
    row = ResultRow.from_results(config.name, sol, outcome, config.seed, note)
    logger.info(
        "sweep_point",
        extra={"scenario": config.name, "T_w": T_w, "T_f": T_f, "sigma": sol.sigma},
    )
    return row, outcome


def run_sweep(
    config: ScenarioConfig,
    *,
    workers: int = 1,
    tail_mass: float = DEFAULT_TAIL_MASS,
    retry_passes: int = DEFAULT_RETRY_PASSES,
    metrics: SimulationMetrics | None = None,
) -> list[ResultRow]:
    """
    Rows in grid order: T_w outer, T_f inner.

    Every grid point reuses config.seed, so simulated curves share their
    random streams across T values.
    """
    rows = []
    for T_w in config.T_w.values():
        for T_f in config.T_f.values():
            row, _ = run_point(
                config,
                T_w,
                T_f,
                workers=workers,
                tail_mass=tail_mass,
                retry_passes=retry_passes,
                metrics=metrics,
            )
            rows.append(row)
    return rows


def run_sweeps(configs: list[ScenarioConfig], **kwargs) -> list[ResultRow]:
    """Concatenate sweeps in config order."""
    rows: list[ResultRow] = []
    for config in configs:
        rows.extend(run_sweep(config, **kwargs))
    return rows
