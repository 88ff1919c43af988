"""
Degree and clique-size laws.

A DegreeLaw is a discrete law on k = 0, 1, 2, ... held as a truncated,
renormalized probability table. Infinite-support laws (Poisson, power law
with exponential cutoff) are cut at the smallest k_max whose remaining tail
mass is below the configured tolerance.

Transmissibility thinning is functional: a ThinnedDegreeLaw keeps its base law
and T, and evaluates g(1 + T(x - 1)) on demand.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Literal, Protocol, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import stats

from .config import DEFAULT_TAIL_MASS
from .errors import (
    ErrorCode,
    InvalidLawError,
    bad_law_parameter,
    bad_transmissibility,
    make_error,
)

logger = logging.getLogger(__name__)

LawKind = Literal["poisson", "power_law_cutoff", "table"]

# Normalization tolerance accepted on user-supplied tables before renormalizing
_TABLE_SUM_TOL = 1e-9
_MAX_SUPPORT = 10_000_000


class DegreeLawLike(Protocol):
    """Anything the analytic and generator code can treat as a degree law."""

    def gf_eval(self, x): ...

    def gf_deriv(self, x): ...

    def mean(self) -> float: ...

    def second_moment(self) -> float: ...

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray: ...


@dataclass(frozen=True, eq=False)
class DegreeLaw:
    """
    Per-node degree distribution.

    Build through the classmethods (poisson, power_law_cutoff, table); the
    constructor expects an already-validated probability table.
    """

    kind: LawKind
    parameters: tuple[tuple[str, float], ...]
    probabilities: np.ndarray = field(repr=False)
    tail_mass: float = 0.0  # mass removed by truncation, before renormalizing
    _cdf: np.ndarray = field(init=False, repr=False)
    _deriv_coef: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        p = np.asarray(self.probabilities, dtype=float)
        p.setflags(write=False)
        cdf = np.cumsum(p)
        cdf[-1] = 1.0
        cdf.setflags(write=False)
        k = np.arange(p.size, dtype=float)
        dcoef = (k * p)[1:] if p.size > 1 else np.zeros(1)
        dcoef.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "_cdf", cdf)
        object.__setattr__(self, "_deriv_coef", dcoef)

    # -- construction -------------------------------------------------------

    @classmethod
    def poisson(cls, lam: float, *, tail_mass: float = DEFAULT_TAIL_MASS) -> DegreeLaw:
        """p_k = lam^k e^-lam / k!, truncated where the tail drops below tail_mass."""
        if not (math.isfinite(lam) and lam >= 0):
            raise bad_law_parameter("poisson", "lambda", lam, "lambda >= 0")
        if lam == 0:
            return cls("poisson", (("lambda", 0.0),), np.array([1.0]), 0.0)

        k_max = max(0, int(stats.poisson.isf(tail_mass, lam)))
        while stats.poisson.sf(k_max, lam) >= tail_mass:
            k_max += 1
        while k_max > 0 and stats.poisson.sf(k_max - 1, lam) < tail_mass:
            k_max -= 1

        p = stats.poisson.pmf(np.arange(k_max + 1), lam)
        dropped = float(stats.poisson.sf(k_max, lam))
        logger.debug("law_truncated", extra={"kind": "poisson", "k_max": k_max, "tail": dropped})
        return cls("poisson", (("lambda", float(lam)),), p / p.sum(), dropped)

    @classmethod
    def power_law_cutoff(
        cls, gamma: float, cutoff: float, *, tail_mass: float = DEFAULT_TAIL_MASS
    ) -> DegreeLaw:
        """
        p_0 = 0, p_k = k^-gamma e^(-k/cutoff) / C for k >= 1.

        C is the direct truncated sum. Truncation uses the geometric bound
        sum_{j>k} j^-gamma e^(-j/cutoff) <= term_k * r / (1 - r), r = e^(-1/cutoff).
        """
        if not (math.isfinite(gamma) and gamma > 1):
            raise bad_law_parameter("power_law_cutoff", "gamma", gamma, "gamma > 1")
        if not (math.isfinite(cutoff) and cutoff > 0):
            raise bad_law_parameter("power_law_cutoff", "cutoff", cutoff, "0 < cutoff < inf")

        r = math.exp(-1.0 / cutoff)
        tail_factor = r / (1.0 - r)
        size = 64
        while True:
            k = np.arange(1, size + 1, dtype=float)
            terms = k ** (-gamma) * np.exp(-k / cutoff)
            total = terms.sum()
            ok = np.nonzero(terms * tail_factor < tail_mass * total)[0]
            if ok.size:
                k_max = int(ok[0]) + 1
                break
            if size >= _MAX_SUPPORT:
                raise bad_law_parameter(
                    "power_law_cutoff", "cutoff", cutoff, "support exceeds truncation limit"
                )
            size *= 4

        kept = terms[:k_max]
        norm = kept.sum()
        p = np.concatenate(([0.0], kept / norm))
        dropped = float(terms[k_max - 1] * tail_factor / norm)
        logger.debug(
            "law_truncated", extra={"kind": "power_law_cutoff", "k_max": k_max, "tail": dropped}
        )
        return cls(
            "power_law_cutoff",
            (("gamma", float(gamma)), ("cutoff", float(cutoff))),
            p,
            dropped,
        )

    @classmethod
    def table(cls, probabilities: Sequence[float]) -> DegreeLaw:
        """Explicit table indexed by k = 0, 1, 2, ..."""
        p = np.asarray([float(v) for v in probabilities], dtype=float)
        if p.size == 0:
            raise InvalidLawError(make_error(ErrorCode.LAW_BAD_TABLE, "Empty degree table"))
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise InvalidLawError(
                make_error(ErrorCode.LAW_BAD_TABLE, "Degree table entries must be finite and >= 0")
            )
        s = p.sum()
        if abs(s - 1.0) > _TABLE_SUM_TOL:
            raise InvalidLawError(
                make_error(ErrorCode.LAW_BAD_TABLE, f"Degree table sums to {s!r}, not 1", total=s)
            )
        return cls("table", (), p / s, 0.0)

    # -- properties ---------------------------------------------------------

    @property
    def truncation_k_max(self) -> int:
        return int(self.probabilities.size - 1)

    def param(self, name: str) -> float:
        for key, value in self.parameters:
            if key == name:
                return value
        raise KeyError(name)

    def describe(self) -> str:
        if self.kind == "table":
            return "table " + ",".join(repr(float(v)) for v in self.probabilities)
        args = " ".join(f"{k}={v!r}" for k, v in self.parameters)
        return f"{self.kind} {args}"

    # -- generating function ------------------------------------------------

    def gf_eval(self, x):
        """g(x) = sum_k p_k x^k."""
        return P.polyval(x, self.probabilities)

    def gf_deriv(self, x):
        """g'(x) = sum_k k p_k x^(k-1)."""
        return P.polyval(x, self._deriv_coef)

    def mean(self) -> float:
        k = np.arange(self.probabilities.size)
        return float(np.dot(k, self.probabilities))

    def second_moment(self) -> float:
        k = np.arange(self.probabilities.size, dtype=float)
        return float(np.dot(k * k, self.probabilities))

    def variance(self) -> float:
        return self.second_moment() - self.mean() ** 2

    # -- sampling -----------------------------------------------------------

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Inverse-CDF draws over the truncated table."""
        u = rng.random(size)
        idx = np.searchsorted(self._cdf, u, side="right")
        return np.minimum(idx, self.truncation_k_max).astype(np.int64)

    def thin(self, T: float) -> ThinnedDegreeLaw:
        return ThinnedDegreeLaw(self, T)


@dataclass(frozen=True)
class ThinnedDegreeLaw:
    """Binomial thinning of `base` under edge-retention probability T."""

    base: DegreeLaw
    T: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.T <= 1.0):
            raise bad_transmissibility(self.T)

    def _arg(self, x):
        return 1.0 + self.T * (x - 1.0)

    def gf_eval(self, x):
        return self.base.gf_eval(self._arg(x))

    def gf_deriv(self, x):
        return self.T * self.base.gf_deriv(self._arg(x))

    def mean(self) -> float:
        return self.T * self.base.mean()

    def second_moment(self) -> float:
        m1 = self.base.mean()
        return self.T**2 * (self.base.second_moment() - m1) + self.T * m1

    def variance(self) -> float:
        return self.second_moment() - self.mean() ** 2

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        k = self.base.sample_many(rng, size)
        return rng.binomial(k, self.T).astype(np.int64)

    def thin(self, T: float) -> ThinnedDegreeLaw:
        if not (0.0 <= T <= 1.0):
            raise bad_transmissibility(T)
        return ThinnedDegreeLaw(self.base, self.T * T)


AnyDegreeLaw = Union[DegreeLaw, ThinnedDegreeLaw]


@dataclass(frozen=True, eq=False)
class CliqueSizeLaw:
    """mu_n for clique sizes n = 1..D."""

    probabilities: np.ndarray = field(repr=False)
    _cdf: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        p = np.asarray([float(v) for v in self.probabilities], dtype=float)
        if p.size == 0:
            raise InvalidLawError(make_error(ErrorCode.LAW_BAD_TABLE, "Clique size law is empty"))
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise InvalidLawError(
                make_error(ErrorCode.LAW_BAD_TABLE, "Clique size probabilities must be >= 0")
            )
        s = p.sum()
        if abs(s - 1.0) > _TABLE_SUM_TOL:
            raise InvalidLawError(
                make_error(ErrorCode.LAW_BAD_TABLE, f"Clique size law sums to {s!r}, not 1")
            )
        p = p / s
        p.setflags(write=False)
        cdf = np.cumsum(p)
        cdf[-1] = 1.0
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "_cdf", cdf)

    @property
    def D(self) -> int:
        return int(self.probabilities.size)

    @property
    def sizes(self) -> np.ndarray:
        return np.arange(1, self.D + 1)

    def mean(self) -> float:
        return float(np.dot(self.sizes, self.probabilities))

    def variance(self) -> float:
        n = self.sizes.astype(float)
        return float(np.dot(n * n, self.probabilities)) - self.mean() ** 2

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.random(size)
        idx = np.searchsorted(self._cdf, u, side="right")
        return (np.minimum(idx, self.D - 1) + 1).astype(np.int64)


# -- operation-level API ------------------------------------------------------


def gf_eval(law: AnyDegreeLaw, x):
    """Generating function at x in [0, 1]."""
    return law.gf_eval(x)


def gf_deriv(law: AnyDegreeLaw, x):
    """First derivative of the generating function at x in [0, 1]."""
    return law.gf_deriv(x)


def thin(law: AnyDegreeLaw, T: float) -> ThinnedDegreeLaw:
    """Thinned law with generating function g(1 + T(x - 1))."""
    return law.thin(T)


def sample(law: AnyDegreeLaw, rng: np.random.Generator) -> int:
    return int(law.sample_many(rng, 1)[0])


def sample_many(law: AnyDegreeLaw, rng: np.random.Generator, size: int) -> np.ndarray:
    return law.sample_many(rng, size)


def law_from_spec(kind: str, **params: Any) -> DegreeLaw:
    """Factory used by the scenario config layer."""
    tail_mass = float(params.get("tail_mass", DEFAULT_TAIL_MASS))
    if kind == "poisson":
        lam = params.get("lambda", params.get("lam"))
        if lam is None:
            raise bad_law_parameter("poisson", "lambda", None, "required")
        return DegreeLaw.poisson(float(lam), tail_mass=tail_mass)
    if kind == "power_law_cutoff":
        gamma = params.get("gamma")
        cutoff = params.get("cutoff")
        if gamma is None or cutoff is None:
            raise bad_law_parameter("power_law_cutoff", "gamma/cutoff", None, "both required")
        return DegreeLaw.power_law_cutoff(float(gamma), float(cutoff), tail_mass=tail_mass)
    if kind == "table":
        return DegreeLaw.table(params.get("probabilities", ()))
    raise InvalidLawError(
        make_error(ErrorCode.LAW_UNKNOWN_KIND, f"Unknown law kind: {kind}", kind=kind)
    )
