# cliqueperc/errors.py
"""
Error taxonomy with structured codes for machine-readable analysis.

Error codes follow the pattern: {category}:{specific_code}

Categories:
- law: Invalid degree/clique-size law parameters
- config: Scenario config grammar and field errors
- gen: Network generation failures
- io: Malformed network dumps or result files
- compare: Simulation/theory tolerance failures
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any


class ErrorCategory(str, Enum):
    LAW = "law"
    CONFIG = "config"
    GEN = "gen"
    IO = "io"
    COMPARE = "compare"


class ErrorCode:
    # Law construction
    LAW_BAD_PARAMETER = "law:bad_parameter"
    LAW_BAD_TABLE = "law:bad_table"
    LAW_BAD_TRANSMISSIBILITY = "law:bad_transmissibility"
    LAW_UNKNOWN_KIND = "law:unknown_kind"

    # Config parsing
    CONFIG_SYNTAX = "config:syntax"
    CONFIG_UNKNOWN_KEY = "config:unknown_key"
    CONFIG_BAD_VALUE = "config:bad_value"
    CONFIG_MISSING = "config:missing"

    # Generation
    GEN_NO_VALID_PAIRING = "gen:no_valid_pairing"
    GEN_BAD_PARAMS = "gen:bad_params"

    # I/O
    IO_BAD_DUMP = "io:bad_dump"
    IO_BAD_CSV = "io:bad_csv"

    # Comparison
    COMPARE_TOLERANCE = "compare:tolerance_exceeded"


# CLI exit codes
EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_GENERATION = 2
EXIT_COMPARISON = 3


@dataclass(frozen=True)
class StructuredError:
    """Structured error for machine-readable logging."""

    code: str
    message: str
    details: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.details:
            d["details"] = self.details
        return d

    @property
    def category(self) -> str:
        return self.code.split(":")[0] if ":" in self.code else "unknown"


def make_error(code: str, message: str, **details: Any) -> StructuredError:
    """Create a structured error."""
    return StructuredError(
        code=code,
        message=message,
        details=details if details else None,
    )


class CliquePercError(Exception):
    """Base exception; always carries a StructuredError."""

    exit_code = EXIT_CONFIG

    def __init__(self, error: StructuredError):
        super().__init__(error.message)
        self.error = error

    @property
    def code(self) -> str:
        return self.error.code


class InvalidLawError(CliquePercError, ValueError):
    """Raised when a law is constructed with invalid parameters."""


class ConfigError(CliquePercError):
    """Config grammar or field error with line/field diagnostics."""

    def __init__(self, error: StructuredError, *, line: int | None = None, field: str | None = None):
        super().__init__(error)
        self.line = line
        self.field = field

    def __str__(self) -> str:
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.field:
            where.append(f"field '{self.field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        return f"{prefix}{self.error.message}"


class GenerationError(CliquePercError):
    """No valid stub pairing exists for a link type."""

    exit_code = EXIT_GENERATION

    def __init__(self, error: StructuredError, *, link_type: str):
        super().__init__(error)
        self.link_type = link_type


class NetworkFormatError(CliquePercError):
    """Malformed network dump or result file."""


# Convenience constructors
def bad_law_parameter(kind: str, name: str, value: Any, constraint: str) -> InvalidLawError:
    return InvalidLawError(
        make_error(
            ErrorCode.LAW_BAD_PARAMETER,
            f"{kind}: {name}={value!r} violates {constraint}",
            kind=kind,
            parameter=name,
            value=value,
        )
    )


def bad_transmissibility(value: float) -> InvalidLawError:
    return InvalidLawError(
        make_error(
            ErrorCode.LAW_BAD_TRANSMISSIBILITY,
            f"Transmissibility must lie in [0, 1], got {value!r}",
            value=value,
        )
    )


def config_error(code: str, message: str, *, line: int | None = None, field: str | None = None) -> ConfigError:
    return ConfigError(make_error(code, message, line=line, field=field), line=line, field=field)


def no_valid_pairing(link_type: str, stubs: int, key: int) -> GenerationError:
    return GenerationError(
        make_error(
            ErrorCode.GEN_NO_VALID_PAIRING,
            f"No valid {link_type} pairing: all {stubs} stubs share one forbidden group ({key})",
            link_type=link_type,
            stubs=stubs,
        ),
        link_type=link_type,
    )


def bad_dump(message: str, *, line: int | None = None) -> NetworkFormatError:
    return NetworkFormatError(make_error(ErrorCode.IO_BAD_DUMP, message, line=line))


def bad_csv(message: str, *, line: int | None = None) -> NetworkFormatError:
    return NetworkFormatError(make_error(ErrorCode.IO_BAD_CSV, message, line=line))


# Exit code per error category, used by the CLI
EXIT_CODES: dict[str, int] = {
    ErrorCategory.LAW.value: EXIT_CONFIG,
    ErrorCategory.CONFIG.value: EXIT_CONFIG,
    ErrorCategory.IO.value: EXIT_CONFIG,
    ErrorCategory.GEN.value: EXIT_GENERATION,
    ErrorCategory.COMPARE.value: EXIT_COMPARISON,
}


def exit_code_for(exc: CliquePercError) -> int:
    return EXIT_CODES.get(exc.error.category, exc.exit_code)
