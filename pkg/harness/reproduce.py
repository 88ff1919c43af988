"""
Built-in figure recipes over the four reference scenarios.

Each recipe returns plot-ready FigurePoint rows (one series per scenario)
and `reproduce` writes them to ``<out_dir>/<figure_id>.csv``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from cliqueperc.analytic import critical_Tw, moments, spectral_radius
from cliqueperc.config import DEFAULT_RETRY_PASSES, DEFAULT_TAIL_MASS
from cliqueperc.errors import ErrorCode, config_error

from .csvio import FigurePoint, write_figure
from .metrics import SimulationMetrics
from .scenarios import SIZE_PARAMS, TABLE_I, THRESHOLD_PARAMS, SweepRange, table_scenario
from .sweep import run_point

logger = logging.getLogger(__name__)

BOUNDARY_STEP = 0.02
SIZE_STEP = 0.05
PINF_T_F = 0.4


@dataclass(frozen=True)
class ReproduceOptions:
    replications: int = 200
    N: int = 12000
    seed: int = 0
    workers: int = 1
    tail_mass: float = DEFAULT_TAIL_MASS
    retry_passes: int = DEFAULT_RETRY_PASSES
    metrics: Optional[SimulationMetrics] = None


def threshold_boundary(opts: ReproduceOptions, step: float = BOUNDARY_STEP) -> list[FigurePoint]:
    """Minimal T_w for a giant component versus T_f; analytic only."""
    points = []
    for idx in TABLE_I:
        cfg = table_scenario(idx, THRESHOLD_PARAMS)
        profile = cfg.profile()
        kw, kf = cfg.laws(opts.tail_mass)
        for T_f in SweepRange(0.0, 1.0, step).values():
            tw = critical_Tw(profile, kw, kf, T_f)
            at = 1.0 if tw is None else tw
            sigma = spectral_radius(moments(profile, kw.thin(at), kf.thin(T_f)))
            points.append(FigurePoint(cfg.name, T_f, analytic=tw, sigma=sigma))
    return points


def pinf_transition(
    opts: ReproduceOptions, step: float = BOUNDARY_STEP, T_f: float = PINF_T_F
) -> list[FigurePoint]:
    """
    Giant-component probability versus T_w at fixed T_f.

    The analytic column is the supercriticality indicator (1 if sigma > 1).
    """
    points = []
    for idx in TABLE_I:
        cfg = table_scenario(
            idx, THRESHOLD_PARAMS, N=opts.N, replications=opts.replications, seed=opts.seed
        )
        for T_w in SweepRange(0.0, 1.0, step).values():
            row, _ = _point(cfg, T_w, T_f, opts)
            p = row.p_inf
            points.append(
                FigurePoint(
                    cfg.name,
                    T_w,
                    analytic=1.0 if row.sigma > 1.0 else 0.0,
                    sim_mean=p,
                    sim_std=None if p is None else math.sqrt(p * (1.0 - p)),
                    sigma=row.sigma,
                )
            )
    return points


def _size_points(opts: ReproduceOptions, step: float, nodes: bool) -> list[FigurePoint]:
    points = []
    extra = []
    for idx in TABLE_I:
        cfg = table_scenario(
            idx, SIZE_PARAMS, N=opts.N, replications=opts.replications, seed=opts.seed
        )
        T_w = SIZE_PARAMS.T_w
        for T_f in SweepRange(0.0, 1.0, step).values():
            row, _ = _point(cfg, T_w, T_f, opts)
            cliques = FigurePoint(
                cfg.name if not nodes else f"{cfg.name}-cliques",
                T_f,
                analytic=row.S_c_analytic,
                sim_mean=row.S_c_sim_mean,
                sim_std=row.S_c_sim_std,
                sigma=row.sigma,
            )
            if not nodes:
                points.append(cliques)
                continue
            points.append(
                FigurePoint(
                    cfg.name,
                    T_f,
                    analytic=row.S_n_analytic,
                    sim_mean=row.S_n_sim_mean,
                    sim_std=row.S_n_sim_std,
                    sigma=row.sigma,
                )
            )
            if idx == 1:
                extra.append(cliques)
    return points + extra


def clique_sizes(opts: ReproduceOptions, step: float = SIZE_STEP) -> list[FigurePoint]:
    """S_c versus T_f at T_w = 0.3."""
    return _size_points(opts, step, nodes=False)


def node_sizes(opts: ReproduceOptions, step: float = SIZE_STEP) -> list[FigurePoint]:
    """S_n versus T_f at T_w = 0.3, plus scenario 1's S_c as a comparison series."""
    return _size_points(opts, step, nodes=True)


def _point(cfg, T_w: float, T_f: float, opts: ReproduceOptions):
    return run_point(
        cfg,
        T_w,
        T_f,
        workers=opts.workers,
        tail_mass=opts.tail_mass,
        retry_passes=opts.retry_passes,
        metrics=opts.metrics,
    )


FIGURES: dict[str, Callable[[ReproduceOptions], list[FigurePoint]]] = {
    "threshold-boundary": threshold_boundary,
    "pinf-transition": pinf_transition,
    "clique-sizes": clique_sizes,
    "node-sizes": node_sizes,
}


def reproduce(figure_id: str, out_dir: str | Path = ".", opts: ReproduceOptions | None = None) -> Path:
    if figure_id not in FIGURES:
        raise config_error(
            ErrorCode.CONFIG_BAD_VALUE,
            f"unknown figure {figure_id!r}; choose from {', '.join(FIGURES)}",
            field="figure",
        )
    opts = opts or ReproduceOptions()
    points = FIGURES[figure_id](opts)
    path = write_figure(points, Path(out_dir) / f"{figure_id}.csv")
    logger.info("figure_written", extra={"figure": figure_id, "points": len(points), "path": str(path)})
    return path
