"""
Scenario configuration: built-in clique tables, figure presets and the
line-oriented config file grammar.

    # comment
    [scenario NAME]
    table = 4                          # or: clique_sizes = 1/3, 1/3, 1/3
    N = 12000
    alpha = 0.3
    type1 = poisson lambda=2
    type2 = power_law_cutoff gamma=3 cutoff=10
    T_w = 0.3                          # scalar or start:stop:step
    T_f = 0:1:0.05
    replications = 200
    seed = 7
    giant_threshold = 0.05
    regenerate = true
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from cliqueperc.analytic import CliqueProfile, build_profile
from cliqueperc.config import DEFAULT_GIANT_THRESHOLD, DEFAULT_RETRY_PASSES, DEFAULT_TAIL_MASS
from cliqueperc.crypto import sha256_json
from cliqueperc.distributions import CliqueSizeLaw, DegreeLaw, law_from_spec
from cliqueperc.errors import CliquePercError, ConfigError, ErrorCode, config_error
from cliqueperc.netgen import GenParams

logger = logging.getLogger(__name__)

# Clique size laws mu_1..mu_D for the four reference scenarios
TABLE_I: dict[int, tuple[Fraction, ...]] = {
    1: (Fraction(1),),
    2: (Fraction(2, 3), Fraction(1, 3)),
    3: (Fraction(1, 3), Fraction(2, 3)),
    4: (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)),
}

_LAW_KINDS = ("poisson", "power_law_cutoff", "table")


@dataclass(frozen=True)
class LawSpec:
    """Degree law by kind and named parameters, e.g. ``poisson lambda=1.5``."""

    kind: str
    params: tuple[tuple[str, Any], ...] = ()

    @classmethod
    def poisson(cls, lam: float) -> LawSpec:
        return cls("poisson", (("lambda", float(lam)),))

    @classmethod
    def power_law_cutoff(cls, gamma: float, cutoff: float) -> LawSpec:
        return cls("power_law_cutoff", (("gamma", float(gamma)), ("cutoff", float(cutoff))))

    @classmethod
    def parse(cls, text: str, *, line: int | None = None, field: str | None = None) -> LawSpec:
        parts = text.split()
        if not parts or parts[0] not in _LAW_KINDS:
            raise config_error(
                ErrorCode.CONFIG_BAD_VALUE,
                f"law must start with one of {', '.join(_LAW_KINDS)}: {text!r}",
                line=line,
                field=field,
            )
        kind, rest = parts[0], parts[1:]
        if kind == "table":
            try:
                probs = tuple(float(Fraction(p)) for p in "".join(rest).split(",") if p)
            except (ValueError, ZeroDivisionError):
                raise config_error(
                    ErrorCode.CONFIG_BAD_VALUE, f"bad table law: {text!r}", line=line, field=field
                ) from None
            spec = cls("table", (("probabilities", probs),))
        else:
            params = []
            for tok in rest:
                name, sep, value = tok.partition("=")
                try:
                    if not sep:
                        raise ValueError(tok)
                    params.append((name, float(value)))
                except ValueError:
                    raise config_error(
                        ErrorCode.CONFIG_BAD_VALUE,
                        f"expected name=value, got {tok!r}",
                        line=line,
                        field=field,
                    ) from None
            spec = cls(kind, tuple(params))
        try:
            spec.build()
        except CliquePercError as e:
            raise config_error(ErrorCode.CONFIG_BAD_VALUE, str(e), line=line, field=field) from e
        return spec

    def build(self, tail_mass: float = DEFAULT_TAIL_MASS) -> DegreeLaw:
        return law_from_spec(self.kind, tail_mass=tail_mass, **dict(self.params))

    def __str__(self) -> str:
        if self.kind == "table":
            return "table " + ",".join(f"{p:g}" for p in dict(self.params)["probabilities"])
        return " ".join([self.kind] + [f"{k}={v:g}" for k, v in self.params])


@dataclass(frozen=True)
class SweepRange:
    """Closed grid start, start+step, ..., stop; a scalar has start == stop."""

    start: float
    stop: float
    step: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.start <= self.stop <= 1.0):
            raise ValueError(f"sweep range must satisfy 0 <= start <= stop <= 1: {self}")
        if self.stop > self.start and self.step <= 0:
            raise ValueError(f"sweep step must be positive: {self}")

    @classmethod
    def scalar(cls, value: float) -> SweepRange:
        return cls(float(value), float(value))

    @classmethod
    def parse(cls, text: str, *, line: int | None = None, field: str | None = None) -> SweepRange:
        try:
            parts = [float(p) for p in text.split(":")]
            if len(parts) == 1:
                return cls.scalar(parts[0])
            if len(parts) == 3:
                return cls(*parts)
            raise ValueError("expected 'value' or 'start:stop:step'")
        except ValueError as e:
            raise config_error(ErrorCode.CONFIG_BAD_VALUE, str(e), line=line, field=field) from None

    def values(self) -> tuple[float, ...]:
        if self.stop == self.start:
            return (self.start,)
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return tuple(round(self.start + i * self.step, 10) for i in range(count))

    def __str__(self) -> str:
        if self.stop == self.start:
            return f"{self.start:g}"
        return f"{self.start:g}:{self.stop:g}:{self.step:g}"


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    clique_sizes: tuple[Fraction, ...]
    type1: LawSpec
    type2: LawSpec
    N: int = 12000
    alpha: float = 0.1
    T_w: SweepRange = field(default_factory=lambda: SweepRange.scalar(1.0))
    T_f: SweepRange = field(default_factory=lambda: SweepRange.scalar(1.0))
    replications: int = 0
    seed: int = 0
    giant_threshold: float = DEFAULT_GIANT_THRESHOLD
    regenerate: bool = True

    def __post_init__(self) -> None:
        checks = (
            ("N", self.N >= 1, "must be >= 1"),
            ("alpha", 0.0 <= self.alpha <= 1.0, "must lie in [0, 1]"),
            ("replications", self.replications >= 0, "must be >= 0"),
            ("giant_threshold", 0.0 <= self.giant_threshold < 1.0, "must lie in [0, 1)"),
        )
        for name, ok, msg in checks:
            if not ok:
                raise config_error(
                    ErrorCode.CONFIG_BAD_VALUE, f"{name} {msg}: {getattr(self, name)!r}", field=name
                )

    def clique_law(self) -> CliqueSizeLaw:
        return CliqueSizeLaw([float(p) for p in self.clique_sizes])

    def profile(self) -> CliqueProfile:
        return build_profile(self.clique_law(), self.alpha)

    def laws(self, tail_mass: float = DEFAULT_TAIL_MASS) -> tuple[DegreeLaw, DegreeLaw]:
        return self.type1.build(tail_mass), self.type2.build(tail_mass)

    def gen_params(
        self, *, tail_mass: float = DEFAULT_TAIL_MASS, retry_passes: int = DEFAULT_RETRY_PASSES
    ) -> GenParams:
        kw, kf = self.laws(tail_mass)
        return GenParams(
            N=self.N,
            clique_law=self.clique_law(),
            alpha=self.alpha,
            type1_law=kw,
            type2_law=kf,
            seed=self.seed,
            retry_passes=retry_passes,
        )

    def with_(self, **changes: Any) -> ScenarioConfig:
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["clique_sizes"] = [str(p) for p in self.clique_sizes]
        d["type1"] = str(self.type1)
        d["type2"] = str(self.type2)
        d["T_w"] = str(self.T_w)
        d["T_f"] = str(self.T_f)
        return d

    def fingerprint(self) -> str:
        return sha256_json(self.to_dict())


@dataclass(frozen=True)
class FigureParams:
    """Shared law parameters of a figure: Poisson type-1, power law with cutoff type-2."""

    lam: float
    alpha: float
    gamma: float
    cutoff: float
    T_w: Optional[float] = None


THRESHOLD_PARAMS = FigureParams(lam=1.5, alpha=0.1, gamma=3.0, cutoff=10.0)
SIZE_PARAMS = FigureParams(lam=2.0, alpha=0.3, gamma=3.0, cutoff=10.0, T_w=0.3)


def table_scenario(index: int, params: FigureParams = THRESHOLD_PARAMS, **overrides: Any) -> ScenarioConfig:
    """Built-in scenario `index` (1-4) with the figure's laws."""
    if index not in TABLE_I:
        raise config_error(
            ErrorCode.CONFIG_BAD_VALUE, f"table must be one of 1-4, got {index}", field="table"
        )
    base = ScenarioConfig(
        name=f"scenario{index}",
        clique_sizes=TABLE_I[index],
        type1=LawSpec.poisson(params.lam),
        type2=LawSpec.power_law_cutoff(params.gamma, params.cutoff),
        alpha=params.alpha,
    )
    if params.T_w is not None:
        base = base.with_(T_w=SweepRange.scalar(params.T_w))
    return base.with_(**overrides) if overrides else base


# -- config file grammar --------------------------------------------------------

_KEYS = (
    "table",
    "clique_sizes",
    "N",
    "alpha",
    "type1",
    "type2",
    "T_w",
    "T_f",
    "replications",
    "seed",
    "giant_threshold",
    "regenerate",
)
_TRUE = ("1", "true", "yes", "on")
_FALSE = ("0", "false", "no", "off")


def _parse_fractions(text: str, *, line: int, field: str) -> tuple[Fraction, ...]:
    try:
        probs = tuple(Fraction(p.strip()) for p in text.split(",") if p.strip())
    except (ValueError, ZeroDivisionError):
        raise config_error(
            ErrorCode.CONFIG_BAD_VALUE, f"bad probability list: {text!r}", line=line, field=field
        ) from None
    try:
        CliqueSizeLaw([float(p) for p in probs])
    except CliquePercError as e:
        raise config_error(ErrorCode.CONFIG_BAD_VALUE, str(e), line=line, field=field) from e
    return probs


def _parse_value(key: str, text: str, line: int) -> Any:
    try:
        if key == "table":
            idx = int(text)
            if idx not in TABLE_I:
                raise ValueError(f"table must be one of 1-4, got {idx}")
            return TABLE_I[idx]
        if key == "clique_sizes":
            return _parse_fractions(text, line=line, field=key)
        if key in ("N", "replications", "seed"):
            return int(text)
        if key in ("alpha", "giant_threshold"):
            return float(text)
        if key in ("type1", "type2"):
            return LawSpec.parse(text, line=line, field=key)
        if key in ("T_w", "T_f"):
            return SweepRange.parse(text, line=line, field=key)
        if key == "regenerate":
            low = text.lower()
            if low in _TRUE or low in _FALSE:
                return low in _TRUE
            raise ValueError(f"expected a boolean, got {text!r}")
    except ConfigError:
        raise
    except ValueError as e:
        raise config_error(ErrorCode.CONFIG_BAD_VALUE, str(e), line=line, field=key) from None
    raise config_error(ErrorCode.CONFIG_UNKNOWN_KEY, f"unknown key {key!r}", line=line, field=key)


def _finish(name: str, values: dict[str, Any], header_line: int) -> ScenarioConfig:
    for required in ("type1", "type2"):
        if required not in values:
            raise config_error(
                ErrorCode.CONFIG_MISSING,
                f"scenario {name!r} has no {required} law",
                line=header_line,
                field=required,
            )
    sizes = values.pop("clique_sizes", None) or values.pop("table", None)
    values.pop("table", None)
    if sizes is None:
        raise config_error(
            ErrorCode.CONFIG_MISSING,
            f"scenario {name!r} needs 'table' or 'clique_sizes'",
            line=header_line,
            field="clique_sizes",
        )
    try:
        return ScenarioConfig(name=name, clique_sizes=sizes, **values)
    except ConfigError as e:
        raise config_error(e.code, e.error.message, line=header_line, field=e.field) from e


def parse_config(text: str) -> list[ScenarioConfig]:
    """Parse every ``[scenario NAME]`` section, in file order."""
    scenarios: list[ScenarioConfig] = []
    current: tuple[str, int] | None = None
    values: dict[str, Any] = {}
    seen_names: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise config_error(ErrorCode.CONFIG_SYNTAX, f"unterminated section: {raw!r}", line=lineno)
            head = line[1:-1].split()
            if len(head) != 2 or head[0] != "scenario":
                raise config_error(
                    ErrorCode.CONFIG_SYNTAX, "section must be '[scenario NAME]'", line=lineno
                )
            if current is not None:
                scenarios.append(_finish(current[0], values, current[1]))
            if head[1] in seen_names:
                raise config_error(
                    ErrorCode.CONFIG_SYNTAX, f"duplicate scenario {head[1]!r}", line=lineno
                )
            seen_names.add(head[1])
            current, values = (head[1], lineno), {}
            continue

        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise config_error(ErrorCode.CONFIG_SYNTAX, f"expected 'key = value': {raw!r}", line=lineno)
        if current is None:
            raise config_error(
                ErrorCode.CONFIG_SYNTAX, "key outside a [scenario NAME] section", line=lineno, field=key
            )
        if key not in _KEYS:
            raise config_error(ErrorCode.CONFIG_UNKNOWN_KEY, f"unknown key {key!r}", line=lineno, field=key)
        if key in values:
            raise config_error(ErrorCode.CONFIG_SYNTAX, f"duplicate key {key!r}", line=lineno, field=key)
        values[key] = _parse_value(key, value, lineno)

    if current is not None:
        scenarios.append(_finish(current[0], values, current[1]))
    if not scenarios:
        raise config_error(ErrorCode.CONFIG_MISSING, "config defines no scenario")
    logger.debug("config_parsed", extra={"scenarios": [s.name for s in scenarios]})
    return scenarios


def load_config(path: str | Path) -> list[ScenarioConfig]:
    return parse_config(Path(path).read_text(encoding="utf-8"))
