# tests/test_csvio.py
"""
CSV output for sweep rows and figure tables.
"""

from __future__ import annotations

import tempfile
from pathlib import Path

import pytest

from cliqueperc.errors import ErrorCode, NetworkFormatError
from harness.csvio import (
    FIGURE_SCHEMA,
    RESULT_SCHEMA,
    FigurePoint,
    format_value,
    parse_rows,
    read_rows,
    render_figure,
    render_rows,
    write_rows,
)
from harness.sweep import COLUMNS, ResultRow

ROWS = [
    ResultRow("scenario1", 0.3, 0.4, 0.61, 0.0, 0.0),
    ResultRow(
        "scenario4",
        0.3,
        1.0,
        2.4,
        0.71,
        0.8,
        S_c_sim_mean=0.7,
        S_c_sim_std=0.01,
        S_n_sim_mean=0.79,
        S_n_sim_std=0.012,
        p_inf=1.0,
        replications=200,
        seed=7,
        note="has, comma",
    ),
]


class TestFormatValue:
    """Cell formatting."""

    @pytest.mark.parametrize(
        "value, text",
        [(None, ""), (True, "1"), (3, "3"), (0.1, "0.1"), (1 / 3, "0.3333333333"), (float("nan"), "nan")],
    )
    def test_cells(self, value, text):
        assert format_value(value) == text


class TestRender:
    """Schema line, header and rows."""

    def test_result_layout(self):
        lines = render_rows(ROWS).splitlines()
        assert lines[0] == f"# schema: {RESULT_SCHEMA}"
        assert lines[1] == ",".join(COLUMNS)
        assert lines[2] == "scenario1,0.3,0.4,0.61,0,0,,,,,,0,0,"
        assert lines[3].endswith(',200,7,"has, comma"')

    def test_figure_layout(self):
        text = render_figure([FigurePoint("scenario2", 0.5, analytic=0.4, sigma=1.2)])
        assert text == (
            f"# schema: {FIGURE_SCHEMA}\n"
            "series,x,analytic,sim_mean,sim_std,sigma\n"
            "scenario2,0.5,0.4,,,1.2\n"
        )

    def test_rendering_is_stable(self):
        assert render_rows(ROWS) == render_rows(list(ROWS))


class TestReadBack:
    """Reading rows for comparison."""

    def test_file_round_trip(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = write_rows(ROWS, Path(tmpdir) / "out" / "rows.csv")
            assert read_rows(path) == ROWS

    @pytest.mark.parametrize(
        "text, line",
        [
            ("scenario,T_w\n", 1),
            (f"# schema: {RESULT_SCHEMA}\nscenario,T_w\n", 2),
            (f"# schema: {RESULT_SCHEMA}\n{','.join(COLUMNS)}\na,b\n", 3),
            (f"# schema: {RESULT_SCHEMA}\n{','.join(COLUMNS)}\na,x,0,0,0,0,,,,,,0,0,\n", 3),
        ],
    )
    def test_malformed(self, text, line):
        with pytest.raises(NetworkFormatError) as exc:
            parse_rows(text)
        assert exc.value.code == ErrorCode.IO_BAD_CSV
        assert exc.value.error.details["line"] == line
