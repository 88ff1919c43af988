"""
CSV emission for sweep rows and figure tables.

Files start with a ``# schema: NAME/vN`` line, then a fixed header. Floats
use 10 significant digits and ``.`` decimals so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from cliqueperc.errors import bad_csv

from .sweep import COLUMNS, ResultRow

RESULT_SCHEMA = "result_row/v1"
FIGURE_SCHEMA = "figure_point/v1"


@dataclass(frozen=True)
class FigurePoint:
    """One point of a plot-ready long table."""

    series: str
    x: float
    analytic: Optional[float] = None
    sim_mean: Optional[float] = None
    sim_std: Optional[float] = None
    sigma: Optional[float] = None


FIGURE_COLUMNS: tuple[str, ...] = tuple(f.name for f in fields(FigurePoint))


def format_value(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return f"{v:.10g}"
    return str(v)


def _render(schema: str, columns: Sequence[str], records: Iterable[Any]) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {schema}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([format_value(getattr(rec, c)) for c in columns])
    return buf.getvalue()


def render_rows(rows: Iterable[ResultRow]) -> str:
    return _render(RESULT_SCHEMA, COLUMNS, rows)


def render_figure(points: Iterable[FigurePoint]) -> str:
    return _render(FIGURE_SCHEMA, FIGURE_COLUMNS, points)


def write_rows(rows: Iterable[ResultRow], path: str | Path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8", newline="") as f:
        f.write(render_rows(rows))
    return p


def write_figure(points: Iterable[FigurePoint], path: str | Path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8", newline="") as f:
        f.write(render_figure(points))
    return p


def _parse_optional_float(text: str) -> Optional[float]:
    return float(text) if text != "" else None


def parse_rows(text: str) -> list[ResultRow]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != f"# schema: {RESULT_SCHEMA}":
        raise bad_csv(f"missing '# schema: {RESULT_SCHEMA}' line", line=1)
    reader = csv.reader(lines[1:])
    header = next(reader, None)
    if header is None or tuple(header) != COLUMNS:
        raise bad_csv(f"header must be {','.join(COLUMNS)}", line=2)

    rows = []
    for lineno, rec in enumerate(reader, start=3):
        if not rec:
            continue
        if len(rec) != len(COLUMNS):
            raise bad_csv(f"expected {len(COLUMNS)} fields, got {len(rec)}", line=lineno)
        v = dict(zip(COLUMNS, rec))
        try:
            rows.append(
                ResultRow(
                    scenario=v["scenario"],
                    T_w=float(v["T_w"]),
                    T_f=float(v["T_f"]),
                    sigma=float(v["sigma"]),
                    S_c_analytic=float(v["S_c_analytic"]),
                    S_n_analytic=float(v["S_n_analytic"]),
                    S_c_sim_mean=_parse_optional_float(v["S_c_sim_mean"]),
                    S_c_sim_std=_parse_optional_float(v["S_c_sim_std"]),
                    S_n_sim_mean=_parse_optional_float(v["S_n_sim_mean"]),
                    S_n_sim_std=_parse_optional_float(v["S_n_sim_std"]),
                    p_inf=_parse_optional_float(v["p_inf"]),
                    replications=int(v["replications"]),
                    seed=int(v["seed"]),
                    note=v["note"],
                )
            )
        except ValueError as e:
            raise bad_csv(str(e), line=lineno) from None
    return rows


def read_rows(path: str | Path) -> list[ResultRow]:
    return parse_rows(Path(path).read_text(encoding="utf-8"))
