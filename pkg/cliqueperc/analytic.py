"""
Generating-function theory for percolation on the clique-level graph.

Pipeline: clique profile (mixing of sizes and online members) -> moments of
the super-node degree vector (d_w, d_f) -> 2x2 branching matrix and its
spectral radius sigma -> smallest fixed point (h1, h2) -> giant component
sizes S_c (cliques) and S_n (individuals).

Transmissibilities enter only through thinned degree laws, so T_w = T_f = 1
is the unthinned case and there is a single code path.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import stats

from .config import DEFAULT_FIXED_POINT_MAX_ITER, DEFAULT_FIXED_POINT_TOL
from .distributions import AnyDegreeLaw, CliqueSizeLaw, DegreeLaw
from .errors import bad_law_parameter

logger = logging.getLogger(__name__)

# sigma at or below 1 + this is treated as subcritical
SIGMA_CRITICAL_TOL = 1e-9
# Absolute tolerance of the threshold bisection in T
THRESHOLD_TOL = 1e-4
# Fixed-point steps at or below this are round-off
_ROUNDOFF_STEP = 1e-14


@dataclass(frozen=True, eq=False)
class CliqueProfile:
    """
    Joint law of clique size n and online member count m.

    mu[n-1, m] = mu_n^w * Binom(m; n, alpha) for n = 1..D, m = 0..D
    (zero for m > n). mu_f[m] = sum_n mu[n-1, m].
    """

    clique_law: CliqueSizeLaw
    alpha: float
    mu: np.ndarray = field(repr=False)

    @property
    def D(self) -> int:
        return self.clique_law.D

    @property
    def n(self) -> np.ndarray:
        return np.arange(1, self.D + 1, dtype=float)

    @property
    def m(self) -> np.ndarray:
        return np.arange(0, self.D + 1, dtype=float)

    @property
    def mu_w(self) -> np.ndarray:
        return self.clique_law.probabilities

    @property
    def mu_f(self) -> np.ndarray:
        return self.mu.sum(axis=0)

    @property
    def C(self) -> float:
        """Normalization sum_n n mu_n^w (mean clique size)."""
        return float(np.dot(self.n, self.mu_w))


def build_profile(clique_law: CliqueSizeLaw, alpha: float) -> CliqueProfile:
    if not (0.0 <= alpha <= 1.0):
        raise bad_law_parameter("profile", "alpha", alpha, "0 <= alpha <= 1")
    D = clique_law.D
    n = np.arange(1, D + 1)[:, None]
    m = np.arange(0, D + 1)[None, :]
    pmf = stats.binom.pmf(m, n, alpha)
    mu = clique_law.probabilities[:, None] * pmf
    mu.setflags(write=False)
    return CliqueProfile(clique_law=clique_law, alpha=float(alpha), mu=mu)


@dataclass(frozen=True)
class MomentSet:
    """First and second moments of the super-node degree vector."""

    E_dw: float
    E_df: float
    E_dwdf: float
    E_dw2: float
    E_df2: float

    def __post_init__(self) -> None:
        for name in ("E_dw", "E_df", "E_dwdf", "E_dw2", "E_df2"):
            assert getattr(self, name) >= -1e-12, name


def moments(profile: CliqueProfile, kw: AnyDegreeLaw, kf: AnyDegreeLaw) -> MomentSet:
    n, m = profile.n, profile.m
    kw1, kw2 = kw.mean(), kw.second_moment()
    kf1, kf2 = kf.mean(), kf.second_moment()
    mu_w, mu_f = profile.mu_w, profile.mu_f
    return MomentSet(
        E_dw=float(np.dot(mu_w, n) * kw1),
        E_df=float(np.dot(mu_f, m) * kf1),
        E_dwdf=float(n @ profile.mu @ m * kw1 * kf1),
        E_dw2=float(np.dot(mu_w, n * kw2 + (n * n - n) * kw1 * kw1)),
        E_df2=float(np.dot(mu_f, m * kf2 + (m * m - m) * kf1 * kf1)),
    )


def jacobian(ms: MomentSet) -> np.ndarray:
    """
    Branching matrix [[a11, a12], [a21, a22]] at h = (1, 1).

    A link type with zero mean degree has its row zeroed, which leaves
    sigma equal to the other diagonal entry.
    """
    a = np.zeros((2, 2))
    if ms.E_dw > 0:
        a[0, 0] = ms.E_dw2 / ms.E_dw - 1.0
        a[0, 1] = ms.E_dwdf / ms.E_dw
    if ms.E_df > 0:
        a[1, 0] = ms.E_dwdf / ms.E_df
        a[1, 1] = ms.E_df2 / ms.E_df - 1.0
    return a


def spectral_radius(ms: MomentSet) -> float:
    a = jacobian(ms)
    a11, a12, a21, a22 = a[0, 0], a[0, 1], a[1, 0], a[1, 1]
    disc = (a11 - a22) ** 2 + 4.0 * a12 * a21
    return float(0.5 * (a11 + a22 + math.sqrt(max(disc, 0.0))))


# -- fixed point ----------------------------------------------------------------


@dataclass(frozen=True)
class FixedPointResult:
    h1: float
    h2: float
    converged: bool
    iterations: int
    trace: tuple[tuple[float, float], ...] = ()

    def __iter__(self):
        return iter((self.h1, self.h2, self.converged, self.iterations))


def _clique_factors(
    profile: CliqueProfile, kw: AnyDegreeLaw, kf: AnyDegreeLaw, h1: float, h2: float
):
    """
    Per-size factors:
      Gw[n]  = E[h1^K_n]            = g_w(h1)^n
      dGw[n] = E[K_n h1^(K_n - 1)]  = n g_w(h1)^(n-1) g_w'(h1)
    and the online analogues Gf[m], dGf[m] with Gf[0] = 1, dGf[0] = 0.
    """
    n, m = profile.n, profile.m
    gw, dw = float(kw.gf_eval(h1)), float(kw.gf_deriv(h1))
    gf, df = float(kf.gf_eval(h2)), float(kf.gf_deriv(h2))
    Gw = gw**n
    dGw = n * gw ** (n - 1.0) * dw
    Gf = gf**m
    dGf = m * gf ** np.maximum(m - 1.0, 0.0) * df
    return Gw, dGw, Gf, dGf


def fixed_point_map(
    profile: CliqueProfile,
    kw: AnyDegreeLaw,
    kf: AnyDegreeLaw,
    h1: float,
    h2: float,
    ms: MomentSet | None = None,
) -> tuple[float, float]:
    """One application of the recursive equations; returns F(h1, h2)."""
    ms = ms or moments(profile, kw, kf)
    Gw, dGw, Gf, dGf = _clique_factors(profile, kw, kf, h1, h2)
    new1 = float(dGw @ profile.mu @ Gf / ms.E_dw) if ms.E_dw > 0 else 1.0
    new2 = float(Gw @ profile.mu @ dGf / ms.E_df) if ms.E_df > 0 else 1.0
    return min(new1, 1.0), min(new2, 1.0)


def fixed_point(
    profile: CliqueProfile,
    kw: AnyDegreeLaw,
    kf: AnyDegreeLaw,
    tol: float = DEFAULT_FIXED_POINT_TOL,
    max_iter: int = DEFAULT_FIXED_POINT_MAX_ITER,
    *,
    record_trace: bool = False,
) -> FixedPointResult:
    """
    Iterate h <- F(h) from (0, 0); the limit is the smallest fixed point.

    Stops when the max-norm step is below tol and the step ratio r of the
    last two iterations bounds the remaining distance, step * r / (1 - r),
    below tol as well. Near criticality r approaches 1 and a small step alone
    understates the error. On hitting max_iter the last iterate is returned
    with converged=False.
    """
    ms = moments(profile, kw, kf)
    h1, h2 = 0.0, 0.0
    trace: list[tuple[float, float]] = [(h1, h2)] if record_trace else []
    prev_step = math.inf
    for it in range(1, max_iter + 1):
        n1, n2 = fixed_point_map(profile, kw, kf, h1, h2, ms)
        step = max(abs(n1 - h1), abs(n2 - h2))
        h1, h2 = n1, n2
        if record_trace:
            trace.append((h1, h2))
        if step <= _ROUNDOFF_STEP:
            return FixedPointResult(h1, h2, True, it, tuple(trace))
        if step < tol:
            rate = step / prev_step
            if rate < 1.0 and step * rate / (1.0 - rate) < tol:
                return FixedPointResult(h1, h2, True, it, tuple(trace))
        prev_step = step
    logger.warning(
        "fixed_point_not_converged",
        extra={"h1": h1, "h2": h2, "max_iter": max_iter, "tol": tol},
    )
    return FixedPointResult(h1, h2, False, max_iter, tuple(trace))


def epidemic_sizes(
    profile: CliqueProfile, kw: AnyDegreeLaw, kf: AnyDegreeLaw, h1: float, h2: float
) -> tuple[float, float]:
    """(S_c, S_n) given the fixed point."""
    Gw, _, Gf, _ = _clique_factors(profile, kw, kf, h1, h2)
    reached = profile.mu * (1.0 - np.outer(Gw, Gf))
    S_c = float(reached.sum())
    S_n = float(profile.n @ reached.sum(axis=1)) / profile.C
    return min(max(S_c, 0.0), 1.0), min(max(S_n, 0.0), 1.0)


# -- one-call pipeline ------------------------------------------------------------


@dataclass(frozen=True)
class AnalyticSolution:
    T_w: float
    T_f: float
    sigma: float
    h1: float
    h2: float
    S_c: float
    S_n: float
    converged: bool
    iterations: int
    moments: MomentSet | None = None

    @property
    def supercritical(self) -> bool:
        return self.sigma > 1.0 + SIGMA_CRITICAL_TOL


def solve(
    profile: CliqueProfile,
    kw_base: AnyDegreeLaw,
    kf_base: AnyDegreeLaw,
    T_w: float = 1.0,
    T_f: float = 1.0,
    *,
    tol: float = DEFAULT_FIXED_POINT_TOL,
    max_iter: int = DEFAULT_FIXED_POINT_MAX_ITER,
) -> AnalyticSolution:
    """Thin, take moments, compute sigma and, above threshold, the fixed point and sizes."""
    kw, kf = kw_base.thin(T_w), kf_base.thin(T_f)
    ms = moments(profile, kw, kf)
    sigma = spectral_radius(ms)
    if sigma <= 1.0 + SIGMA_CRITICAL_TOL:
        return AnalyticSolution(T_w, T_f, sigma, 1.0, 1.0, 0.0, 0.0, True, 0, ms)
    fp = fixed_point(profile, kw, kf, tol, max_iter)
    S_c, S_n = epidemic_sizes(profile, kw, kf, fp.h1, fp.h2)
    return AnalyticSolution(T_w, T_f, sigma, fp.h1, fp.h2, S_c, S_n, fp.converged, fp.iterations, ms)


def _bisect_threshold(sigma_at: Callable[[float], float], tol: float) -> float | None:
    if sigma_at(0.0) >= 1.0:
        return 0.0
    if sigma_at(1.0) < 1.0:
        return None
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if sigma_at(mid) >= 1.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def critical_Tw(
    profile: CliqueProfile,
    kw_base: AnyDegreeLaw,
    kf_base: AnyDegreeLaw,
    T_f: float,
    tol: float = THRESHOLD_TOL,
) -> float | None:
    """
    Minimal T_w with sigma = 1 at fixed T_f.

    Returns 0.0 when sigma(0, T_f) >= 1 already, and None when even T_w = 1
    stays subcritical.
    """
    kf = kf_base.thin(T_f)
    return _bisect_threshold(lambda t: spectral_radius(moments(profile, kw_base.thin(t), kf)), tol)


def critical_Tf(
    profile: CliqueProfile,
    kw_base: AnyDegreeLaw,
    kf_base: AnyDegreeLaw,
    T_w: float,
    tol: float = THRESHOLD_TOL,
) -> float | None:
    """Minimal T_f with sigma = 1 at fixed T_w; same marker conventions as critical_Tw."""
    kw = kw_base.thin(T_w)
    return _bisect_threshold(lambda t: spectral_radius(moments(profile, kw, kf_base.thin(t))), tol)


def single_type_solution(
    law: DegreeLaw,
    T: float = 1.0,
    tol: float = 1e-12,
    max_iter: int = DEFAULT_FIXED_POINT_MAX_ITER,
) -> tuple[float, float]:
    """
    Classical one-layer configuration model: (sigma, S).

    sigma = E[k~^2]/E[k~] - 1 and S = 1 - g~(u) with u = g~'(u)/E[k~].
    """
    thinned = law.thin(T)
    mean = thinned.mean()
    if mean <= 0:
        return 0.0, 0.0
    sigma = thinned.second_moment() / mean - 1.0
    if sigma <= 1.0 + SIGMA_CRITICAL_TOL:
        return sigma, 0.0
    u = 0.0
    for _ in range(max_iter):
        nxt = min(float(thinned.gf_deriv(u)) / mean, 1.0)
        if abs(nxt - u) < tol:
            u = nxt
            break
        u = nxt
    return sigma, 1.0 - float(thinned.gf_eval(u))
