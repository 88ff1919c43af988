"""
CLI for cliqueperc.

Exit codes: 0 success, 1 config error, 2 generation failure,
3 comparison outside tolerance.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, replace
from pathlib import Path
from typing import Any, Optional

from cliqueperc.analytic import critical_Tw
from cliqueperc.config import get_settings
from cliqueperc.crypto import sha256_json
from cliqueperc.errors import (
    EXIT_GENERATION,
    EXIT_OK,
    CliquePercError,
    ErrorCode,
    config_error,
    exit_code_for,
)
from cliqueperc.netgen import generate_network, write_network

from .compare import DEFAULT_ABOVE_SIGMA, DEFAULT_TOLERANCE, compare, format_report
from .csvio import read_rows, render_rows, write_rows
from .metrics import get_metrics
from .reproduce import FIGURES, ReproduceOptions, reproduce
from .runlog import RunLog
from .scenarios import (
    THRESHOLD_PARAMS,
    LawSpec,
    ScenarioConfig,
    SweepRange,
    load_config,
    table_scenario,
)
from .sweep import GENERATION_FAILED, ResultRow, run_point, run_sweeps

logger = logging.getLogger(__name__)

_RECORD_FIELDS = frozenset(vars(logging.makeLogRecord({}))) | {"message", "asctime"}


class ExtraFormatter(logging.Formatter):
    """Appends the record's ``extra`` fields as sorted key=value pairs."""

    def format(self, record: logging.LogRecord) -> str:
        line = super().format(record)
        extra = {k: v for k, v in vars(record).items() if k not in _RECORD_FIELDS}
        if extra:
            line += " " + " ".join(f"{k}={extra[k]!r}" for k in sorted(extra))
        return line


def _configure_logging(level: str) -> None:
    handler = logging.StreamHandler()
    handler.setFormatter(ExtraFormatter("%(levelname)s %(name)s %(message)s"))
    logging.basicConfig(level=level, handlers=[handler])


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--log-level", help="Logging level (default: $CLIQUEPERC_LOG_LEVEL or WARNING)")
    p.add_argument("--metrics", help="Write run metrics to PATH (.prom for Prometheus text)")
    p.add_argument("--run-log", help="Append a hash-chained entry to this JSONL run log")
    p.add_argument("--workers", type=int, help="Process pool size for replications")


def _add_scenario(p: argparse.ArgumentParser, *, seed_required: bool = False) -> None:
    p.add_argument("--config", "-c", help="Scenario config file")
    p.add_argument("--scenario", help="Scenario name within --config (default: all)")
    p.add_argument("--table", type=int, choices=(1, 2, 3, 4), help="Built-in clique size table")
    p.add_argument("--N", type=int, help="Number of individuals")
    p.add_argument("--alpha", type=float, help="Online membership probability")
    p.add_argument("--type1", help="Type-1 law, e.g. 'poisson lambda=1.5'")
    p.add_argument("--type2", help="Type-2 law, e.g. 'power_law_cutoff gamma=3 cutoff=10'")
    p.add_argument("--T-w", dest="T_w", help="T_w value or start:stop:step")
    p.add_argument("--T-f", dest="T_f", help="T_f value or start:stop:step")
    p.add_argument("--replications", type=int, help="Ensemble size")
    p.add_argument("--seed", type=int, required=seed_required, help="Root random seed")
    p.add_argument("--giant-threshold", type=float, help="Giant rule as a fraction of cliques")
    p.add_argument(
        "--fixed-network",
        action="store_true",
        help="Generate one network and re-percolate it instead of regenerating per replication",
    )


def _scenarios(args: argparse.Namespace) -> list[ScenarioConfig]:
    """Config file (or a built-in table) with command-line overrides applied."""
    if args.config:
        configs = load_config(args.config)
        if args.scenario:
            configs = [c for c in configs if c.name == args.scenario]
            if not configs:
                raise config_error(
                    ErrorCode.CONFIG_MISSING,
                    f"no scenario {args.scenario!r} in {args.config}",
                    field="scenario",
                )
    else:
        configs = [table_scenario(args.table or 1, THRESHOLD_PARAMS)]

    overrides: dict[str, Any] = {}
    if args.table and args.config:
        overrides["clique_sizes"] = table_scenario(args.table).clique_sizes
    for name in ("N", "alpha", "replications", "seed"):
        if getattr(args, name) is not None:
            overrides[name] = getattr(args, name)
    if args.giant_threshold is not None:
        overrides["giant_threshold"] = args.giant_threshold
    for name in ("type1", "type2"):
        if getattr(args, name):
            overrides[name] = LawSpec.parse(getattr(args, name), field=name)
    for name in ("T_w", "T_f"):
        if getattr(args, name):
            overrides[name] = SweepRange.parse(getattr(args, name), field=name)
    if args.fixed_network:
        overrides["regenerate"] = False
    return [replace(c, **overrides) for c in configs] if overrides else configs


def _emit_csv(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        with open(output, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _fingerprint(configs: list[ScenarioConfig]) -> str:
    return sha256_json([c.to_dict() for c in configs])


def _finish_run(args: argparse.Namespace, fingerprint: str, rows: int) -> None:
    if getattr(args, "metrics", None):
        m = get_metrics()
        path = Path(args.metrics)
        path.parent.mkdir(parents=True, exist_ok=True)
        if path.suffix == ".prom":
            path.write_text(m.to_prometheus(), encoding="utf-8")
        else:
            path.write_text(json.dumps(m.to_dict(), indent=2), encoding="utf-8")
    if getattr(args, "run_log", None):
        output = getattr(args, "output", None)
        RunLog(args.run_log).append(
            args.command,
            fingerprint,
            seed=getattr(args, "seed", None),
            csv_path=output,
            rows=rows,
        )


def _status(rows: list[ResultRow]) -> int:
    """Generation failures stay in the CSV as notes but still fail the run."""
    failed = any(r.note.startswith(GENERATION_FAILED) for r in rows)
    return EXIT_GENERATION if failed else EXIT_OK


def _cmd_generate(args: argparse.Namespace) -> int:
    cfg = _scenarios(args)[0]
    net = generate_network(cfg.gen_params(retry_passes=get_settings().retry_passes))
    if args.output:
        write_network(net, args.output)
    summary = {
        "scenario": cfg.name,
        "N": net.N,
        "N_c": net.N_c,
        "online": int(net.online.sum()),
        "type1_edges": int(len(net.type1_edges)),
        "type2_edges": int(len(net.type2_edges)),
        "type1_stubs": asdict(net.type1_stubs),
        "type2_stubs": asdict(net.type2_stubs),
    }
    print(json.dumps(summary, indent=2))
    _finish_run(args, _fingerprint([cfg]), 0)
    return EXIT_OK


def _cmd_solve(args: argparse.Namespace) -> int:
    configs = [replace(c, replications=0) for c in _scenarios(args)]
    if args.critical:
        out = []
        for cfg in configs:
            kw, kf = cfg.laws()
            for T_f in cfg.T_f.values():
                tw = critical_Tw(cfg.profile(), kw, kf, T_f)
                out.append({"scenario": cfg.name, "T_f": T_f, "critical_T_w": tw})
        print(json.dumps(out, indent=2))
        return EXIT_OK
    rows = run_sweeps(configs, workers=1)
    _emit_csv(render_rows(rows), args.output)
    _finish_run(args, _fingerprint(configs), len(rows))
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    settings = get_settings()
    configs = _scenarios(args)
    rows = []
    for cfg in configs:
        if cfg.replications < 1:
            cfg = replace(cfg, replications=200)
        for name in ("T_w", "T_f"):
            values = getattr(cfg, name).values()
            if len(values) > 1:
                raise config_error(
                    ErrorCode.CONFIG_BAD_VALUE,
                    f"simulate runs one point, got {len(values)} {name} values; use sweep",
                    field=name,
                )
        T_w, T_f = cfg.T_w.values()[0], cfg.T_f.values()[0]
        row, outcome = run_point(
            cfg,
            T_w,
            T_f,
            workers=args.workers or settings.workers,
            retry_passes=settings.retry_passes,
            tail_mass=settings.tail_mass,
        )
        rows.append(row)
        if outcome is not None:
            print(
                json.dumps(
                    {
                        "scenario": cfg.name,
                        "T_w": T_w,
                        "T_f": T_f,
                        "S_c_mean": outcome.S_c_mean,
                        "S_n_mean": outcome.S_n_mean,
                        "p_inf": outcome.p_inf,
                        "S_c_giant_mean": outcome.S_c_giant_mean,
                        "S_n_giant_mean": outcome.S_n_giant_mean,
                        "stubs_discarded": outcome.stubs_discarded,
                    }
                ),
                file=sys.stderr,
            )
    _emit_csv(render_rows(rows), args.output)
    _finish_run(args, _fingerprint(configs), len(rows))
    return _status(rows)


def _cmd_sweep(args: argparse.Namespace) -> int:
    settings = get_settings()
    configs = _scenarios(args)
    rows = run_sweeps(
        configs,
        workers=args.workers or settings.workers,
        retry_passes=settings.retry_passes,
        tail_mass=settings.tail_mass,
    )
    if args.output:
        write_rows(rows, args.output)
    else:
        sys.stdout.write(render_rows(rows))
    _finish_run(args, _fingerprint(configs), len(rows))
    return _status(rows)


def _cmd_reproduce(args: argparse.Namespace) -> int:
    settings = get_settings()
    opts = ReproduceOptions(
        replications=args.replications,
        N=args.N,
        seed=args.seed,
        workers=args.workers or settings.workers,
        tail_mass=settings.tail_mass,
        retry_passes=settings.retry_passes,
    )
    path = reproduce(args.figure, args.out_dir, opts)
    print(path)
    args.output = str(path)
    _finish_run(args, sha256_json({"figure": args.figure, **asdict(replace(opts, metrics=None))}), 0)
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    rows = read_rows(args.csv)
    report = compare(rows, tolerance=args.tolerance, above_sigma=args.above_sigma)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(format_report(report))
    if report.error is not None:
        print(f"error: {report.error.code}: {report.error.message}", file=sys.stderr)
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliqueperc",
        description="Information epidemics on clique-structured social-physical networks",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    gen = subparsers.add_parser("generate", help="Generate one network realization")
    _add_scenario(gen)
    _add_common(gen)
    gen.add_argument("--output", "-o", help="Write the network dump to PATH")

    sol = subparsers.add_parser("solve", help="Analytic sigma, fixed point and sizes")
    _add_scenario(sol)
    _add_common(sol)
    sol.add_argument("--critical", action="store_true", help="Print the minimal T_w per T_f instead")
    sol.add_argument("--output", "-o", help="CSV output path (default: stdout)")

    sim = subparsers.add_parser(
        "simulate", help="Ensemble simulation at one (T_w, T_f) point; ranges are rejected"
    )
    _add_scenario(sim, seed_required=True)
    _add_common(sim)
    sim.add_argument("--output", "-o", help="CSV output path (default: stdout)")

    sw = subparsers.add_parser("sweep", help="Analytic plus simulation over a T_w x T_f grid")
    _add_scenario(sw, seed_required=True)
    _add_common(sw)
    sw.add_argument("--output", "-o", help="CSV output path (default: stdout)")

    rep = subparsers.add_parser("reproduce", help="Emit a reference figure table")
    rep.add_argument("figure", choices=tuple(FIGURES))
    rep.add_argument("--out-dir", default=".", help="Directory for <figure>.csv")
    rep.add_argument("--replications", type=int, default=200)
    rep.add_argument("--N", type=int, default=12000)
    rep.add_argument("--seed", type=int, default=0)
    _add_common(rep)

    cmp_ = subparsers.add_parser("compare", help="Check simulation against theory")
    cmp_.add_argument("csv", help="Sweep CSV with simulation columns")
    cmp_.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    cmp_.add_argument("--above-sigma", type=float, default=DEFAULT_ABOVE_SIGMA)
    cmp_.add_argument("--json", action="store_true", help="Print the report as JSON")
    cmp_.add_argument("--log-level")

    return parser


_COMMANDS = {
    "generate": _cmd_generate,
    "solve": _cmd_solve,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "reproduce": _cmd_reproduce,
    "compare": _cmd_compare,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = (args.log_level or get_settings().log_level).upper()
    _configure_logging(level)

    try:
        return _COMMANDS[args.command](args)
    except CliquePercError as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
