# tests/test_scenarios.py
"""
Built-in scenarios, law specs, sweep ranges and the config file grammar.
"""

from __future__ import annotations

import tempfile
from fractions import Fraction
from pathlib import Path

import pytest

from cliqueperc.errors import ConfigError, ErrorCode
from harness.scenarios import (
    SIZE_PARAMS,
    TABLE_I,
    LawSpec,
    SweepRange,
    load_config,
    parse_config,
    table_scenario,
)

EXAMPLE = """\
# two scenarios
[scenario mixed]
table = 4
N = 5000
alpha = 0.3
type1 = poisson lambda=2
type2 = power_law_cutoff gamma=3 cutoff=10   # heavy tail
T_w = 0.3
T_f = 0:1:0.25
replications = 20
seed = 7
regenerate = false

[scenario custom]
clique_sizes = 1/2, 0, 1/2
type1 = poisson lambda=1.5
type2 = table 0.5,0.5
"""


class TestTableI:
    """Reference clique size laws."""

    def test_exact_fractions(self):
        for probs in TABLE_I.values():
            assert sum(probs) == 1
            assert all(isinstance(p, Fraction) for p in probs)

    def test_mean_sizes(self):
        means = [float(sum((i + 1) * p for i, p in enumerate(TABLE_I[k]))) for k in (1, 2, 3, 4)]
        assert means == pytest.approx([1.0, 4 / 3, 5 / 3, 2.0])

    def test_table_scenario(self):
        cfg = table_scenario(4, SIZE_PARAMS)
        assert cfg.name == "scenario4"
        assert cfg.alpha == 0.3
        assert cfg.T_w.values() == (0.3,)
        assert str(cfg.type1) == "poisson lambda=2"

    def test_unknown_table(self):
        with pytest.raises(ConfigError):
            table_scenario(5)


class TestLawSpec:
    """Degree law specs."""

    def test_parse_poisson(self):
        spec = LawSpec.parse("poisson lambda=1.5")
        assert spec == LawSpec.poisson(1.5)
        assert spec.build().mean() == pytest.approx(1.5)

    def test_parse_table(self):
        spec = LawSpec.parse("table 1/4, 3/4")
        assert spec.build().mean() == pytest.approx(0.75)
        assert str(spec) == "table 0.25,0.75"

    @pytest.mark.parametrize(
        "text",
        ["", "gaussian sigma=1", "poisson lambda", "poisson lambda=-1", "table 0.5,0.6"],
    )
    def test_rejected(self, text):
        with pytest.raises(ConfigError) as exc:
            LawSpec.parse(text, line=3, field="type1")
        assert exc.value.line == 3
        assert exc.value.field == "type1"


class TestSweepRange:
    """Closed grids over [0, 1]."""

    def test_scalar(self):
        assert SweepRange.parse("0.4").values() == (0.4,)

    def test_grid_includes_stop(self):
        assert SweepRange.parse("0:1:0.25").values() == (0.0, 0.25, 0.5, 0.75, 1.0)

    def test_grid_without_float_drift(self):
        values = SweepRange(0.0, 1.0, 0.05).values()
        assert len(values) == 21
        assert values[3] == 0.15
        assert values[-1] == 1.0

    def test_str_round_trips(self):
        assert str(SweepRange.parse("0:1:0.1")) == "0:1:0.1"

    @pytest.mark.parametrize("text", ["1.5", "0.5:0.2:0.1", "0:1:0", "0:1", "a"])
    def test_rejected(self, text):
        with pytest.raises(ConfigError):
            SweepRange.parse(text, field="T_w")


class TestParseConfig:
    """Config file grammar."""

    def test_example(self):
        mixed, custom = parse_config(EXAMPLE)
        assert mixed.name == "mixed"
        assert mixed.clique_sizes == TABLE_I[4]
        assert mixed.N == 5000
        assert mixed.T_f.values() == (0.0, 0.25, 0.5, 0.75, 1.0)
        assert mixed.replications == 20
        assert mixed.seed == 7
        assert mixed.regenerate is False
        assert custom.clique_sizes == (Fraction(1, 2), Fraction(0), Fraction(1, 2))
        assert custom.N == 12000
        assert custom.replications == 0

    def test_load_from_file(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "scenarios.conf"
            path.write_text(EXAMPLE)
            assert [c.name for c in load_config(path)] == ["mixed", "custom"]

    def test_fingerprint_stable(self):
        a = parse_config(EXAMPLE)[0]
        b = parse_config(EXAMPLE)[0]
        assert a.fingerprint() == b.fingerprint()
        assert a.fingerprint() != a.with_(seed=8).fingerprint()

    @pytest.mark.parametrize(
        "text, line, field, code",
        [
            ("[scenario a]\ntype1 = poisson lambda=1\nbogus = 1\n", 3, "bogus", ErrorCode.CONFIG_UNKNOWN_KEY),
            ("N = 10\n", 1, "N", ErrorCode.CONFIG_SYNTAX),
            ("[scenario a]\nN = 10\nN = 20\n", 3, "N", ErrorCode.CONFIG_SYNTAX),
            ("[scenario a]\ntable = 1\ntype2 = table 1\n", 1, "type1", ErrorCode.CONFIG_MISSING),
            ("[scenario a]\ntype1 = poisson lambda=x\n", 2, "type1", ErrorCode.CONFIG_BAD_VALUE),
            ("[scenario a]\nregenerate = maybe\n", 2, "regenerate", ErrorCode.CONFIG_BAD_VALUE),
            ("[scenario a]\nalpha = 1.5\ntable = 1\ntype1 = table 1\ntype2 = table 1\n", 1, "alpha",
             ErrorCode.CONFIG_BAD_VALUE),
            ("[scenario a]\ntable = 7\n", 2, "table", ErrorCode.CONFIG_BAD_VALUE),
            ("[scenario a]\nN 10\n", 2, None, ErrorCode.CONFIG_SYNTAX),
        ],
    )
    def test_errors_carry_location(self, text, line, field, code):
        with pytest.raises(ConfigError) as exc:
            parse_config(text)
        assert exc.value.line == line
        assert exc.value.field == field
        assert exc.value.code == code
        assert f"line {line}" in str(exc.value)

    def test_missing_clique_law(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("[scenario a]\ntype1 = table 1\ntype2 = table 1\n")
        assert exc.value.field == "clique_sizes"

    def test_duplicate_scenario(self):
        body = "[scenario a]\ntable = 1\ntype1 = table 1\ntype2 = table 1\n"
        with pytest.raises(ConfigError) as exc:
            parse_config(body + body)
        assert exc.value.line == 5

    def test_empty(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("# nothing here\n")
        assert exc.value.code == ErrorCode.CONFIG_MISSING
