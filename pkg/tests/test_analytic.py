# tests/test_analytic.py
"""
Clique profile, degree moments, spectral radius, fixed point and sizes.
"""

from __future__ import annotations

import logging
import math

import numpy as np
import pytest
from scipy import optimize

from cliqueperc.analytic import (
    build_profile,
    critical_Tf,
    critical_Tw,
    epidemic_sizes,
    fixed_point,
    fixed_point_map,
    jacobian,
    moments,
    single_type_solution,
    solve,
    spectral_radius,
)
from cliqueperc.distributions import CliqueSizeLaw, DegreeLaw
from cliqueperc.errors import InvalidLawError

SCENARIOS = {
    1: [1.0],
    2: [2 / 3, 1 / 3],
    3: [1 / 3, 2 / 3],
    4: [1 / 3, 1 / 3, 1 / 3],
}
NO_LINKS = DegreeLaw.table([1.0])


def figure_setup(idx: int, lam: float, alpha: float):
    profile = build_profile(CliqueSizeLaw(SCENARIOS[idx]), alpha)
    return profile, DegreeLaw.poisson(lam), DegreeLaw.power_law_cutoff(3.0, 10.0)


def unit_cliques(alpha: float = 0.0):
    return build_profile(CliqueSizeLaw([1.0]), alpha)


class TestProfile:
    """Joint law of clique size and online members."""

    def test_single_size(self):
        p = build_profile(CliqueSizeLaw([1.0]), 0.1)
        assert p.mu.shape == (1, 2)
        np.testing.assert_allclose(p.mu, [[0.9, 0.1]])
        assert p.C == 1.0

    def test_two_sizes(self):
        p = build_profile(CliqueSizeLaw([0.5, 0.5]), 0.5)
        np.testing.assert_allclose(p.mu, [[0.25, 0.25, 0.0], [0.125, 0.25, 0.125]])
        np.testing.assert_allclose(p.mu_f, [0.375, 0.5, 0.125])
        assert p.C == pytest.approx(1.5)

    def test_mass_conservation(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            D = int(rng.integers(1, 8))
            law = CliqueSizeLaw(rng.dirichlet(np.ones(D)))
            p = build_profile(law, float(rng.uniform()))
            assert p.mu.sum() == pytest.approx(1.0, abs=1e-12)
            np.testing.assert_allclose(p.mu.sum(axis=1), law.probabilities, atol=1e-12)
            for n in range(1, D + 1):
                assert np.all(p.mu[n - 1, n + 1 :] == 0.0)

    def test_bad_alpha(self):
        with pytest.raises(InvalidLawError):
            build_profile(CliqueSizeLaw([1.0]), 1.5)


class TestMoments:
    """Moments of the super-node degree vector."""

    def test_unit_cliques_poisson(self):
        ms = moments(unit_cliques(), DegreeLaw.poisson(1.5), NO_LINKS)
        assert ms.E_dw == pytest.approx(1.5)
        assert ms.E_dw2 == pytest.approx(3.75)
        assert ms.E_df == 0.0
        assert ms.E_dwdf == 0.0

    def test_mean_clique_size_scales_type1(self):
        profile, kw, kf = figure_setup(4, 2.0, 0.3)
        assert moments(profile, kw, kf).E_dw == pytest.approx(4.0)

    def test_online_mean(self):
        profile, kw, kf = figure_setup(4, 2.0, 0.3)
        # E[m] = alpha * E[n] = 0.6
        assert moments(profile, kw, kf).E_df == pytest.approx(0.6 * kf.mean())

    def test_monte_carlo(self):
        lam_w, lam_f, alpha = 1.5, 0.8, 0.4
        profile = build_profile(CliqueSizeLaw(SCENARIOS[4]), alpha)
        ms = moments(profile, DegreeLaw.poisson(lam_w), DegreeLaw.poisson(lam_f))

        rng = np.random.default_rng(123)
        size = 1_000_000
        n = profile.clique_law.sample_many(rng, size)
        m = rng.binomial(n, alpha)
        dw = rng.poisson(n * lam_w).astype(float)
        df = rng.poisson(m * lam_f).astype(float)
        assert ms.E_dw == pytest.approx(dw.mean(), rel=0.01)
        assert ms.E_df == pytest.approx(df.mean(), rel=0.01)
        assert ms.E_dwdf == pytest.approx((dw * df).mean(), rel=0.01)
        assert ms.E_dw2 == pytest.approx((dw * dw).mean(), rel=0.01)
        assert ms.E_df2 == pytest.approx((df * df).mean(), rel=0.01)


class TestSpectralRadius:
    """Closed-form largest eigenvalue of the branching matrix."""

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0, 3.5])
    @pytest.mark.parametrize("T", [0.0, 0.3, 1.0])
    def test_poisson_single_layer(self, lam, T):
        ms = moments(unit_cliques(), DegreeLaw.poisson(lam).thin(T), NO_LINKS)
        assert spectral_radius(ms) == pytest.approx(lam * T, abs=1e-8)

    def test_matches_eigvals(self):
        profile, kw, kf = figure_setup(3, 1.5, 0.1)
        ms = moments(profile, kw.thin(0.5), kf.thin(0.4))
        expected = max(abs(np.linalg.eigvals(jacobian(ms))))
        assert spectral_radius(ms) == pytest.approx(expected, rel=1e-12)

    def test_no_online_layer(self):
        profile, kw, kf = figure_setup(4, 1.5, 0.0)
        ms = moments(profile, kw, kf)
        assert ms.E_df == 0.0
        assert spectral_radius(ms) == pytest.approx(jacobian(ms)[0, 0])

    def test_no_links(self):
        ms = moments(unit_cliques(), NO_LINKS, NO_LINKS)
        assert spectral_radius(ms) == 0.0

    @pytest.mark.parametrize("lam, alpha", [(1.5, 0.1), (2.0, 0.3)])
    @pytest.mark.parametrize("idx", list(SCENARIOS))
    def test_monotone_in_both_transmissibilities(self, idx, lam, alpha):
        profile, kw, kf = figure_setup(idx, lam, alpha)
        grid = np.linspace(0.0, 1.0, 11)
        sig = np.array(
            [[spectral_radius(moments(profile, kw.thin(a), kf.thin(b))) for b in grid] for a in grid]
        )
        assert np.all(np.diff(sig, axis=0) >= -1e-12)
        assert np.all(np.diff(sig, axis=1) >= -1e-12)


class TestFixedPoint:
    """Recursive equations for (h1, h2)."""

    def test_trivial_point_is_fixed(self):
        profile, kw, kf = figure_setup(4, 2.0, 0.3)
        h1, h2 = fixed_point_map(profile, kw, kf, 1.0, 1.0)
        assert abs(h1 - 1.0) < 1e-12
        assert abs(h2 - 1.0) < 1e-12

    def test_subcritical_converges_to_one(self):
        profile, kw, kf = figure_setup(1, 1.5, 0.1)
        kw, kf = kw.thin(0.3), kf.thin(0.4)
        assert spectral_radius(moments(profile, kw, kf)) < 1.0
        h1, h2, converged, _ = fixed_point(profile, kw, kf, tol=1e-10)
        assert converged
        assert h1 == pytest.approx(1.0, abs=1e-6)
        assert h2 == pytest.approx(1.0, abs=1e-6)
        assert epidemic_sizes(profile, kw, kf, h1, h2)[0] == pytest.approx(0.0, abs=1e-5)

    def test_trace_monotone(self):
        profile, kw, kf = figure_setup(4, 2.0, 0.3)
        fp = fixed_point(profile, kw, kf, record_trace=True)
        trace = np.array(fp.trace)
        assert trace[0].tolist() == [0.0, 0.0]
        assert np.all(np.diff(trace, axis=0) >= -1e-15)
        assert np.all(trace <= 1.0)

    def test_sizes_at_origin(self):
        lam = 2.0
        kw = DegreeLaw.poisson(lam)
        S_c, S_n = epidemic_sizes(unit_cliques(), kw, NO_LINKS, 0.0, 0.0)
        assert S_c == pytest.approx(1.0 - math.exp(-lam), abs=1e-10)
        assert S_n == pytest.approx(S_c)

    def test_near_critical_limit_reached(self):
        # unit cliques, Poisson(1.02): h solves h = exp(1.02 (h - 1)), contraction rate ~0.98
        lam, tol = 1.02, 1e-8
        kw = DegreeLaw.poisson(lam)
        assert 1.0 < spectral_radius(moments(unit_cliques(), kw, NO_LINKS)) < 1.05
        root = optimize.brentq(lambda u: u - math.exp(lam * (u - 1.0)), 0.0, 0.99, xtol=1e-15)
        fp = fixed_point(unit_cliques(), kw, NO_LINKS, tol=tol)
        assert fp.converged
        assert abs(fp.h1 - root) < 2 * tol

    def test_non_convergence_flagged(self, caplog):
        profile, kw, kf = figure_setup(4, 2.0, 0.3)
        with caplog.at_level(logging.WARNING):
            fp = fixed_point(profile, kw, kf, max_iter=3)
        assert not fp.converged
        assert fp.iterations == 3
        assert any(r.getMessage() == "fixed_point_not_converged" for r in caplog.records)


class TestSolve:
    """End-to-end analytic pipeline."""

    @pytest.mark.parametrize(
        "law",
        [DegreeLaw.poisson(2.0), DegreeLaw.poisson(3.0), DegreeLaw.power_law_cutoff(2.5, 10.0)],
    )
    @pytest.mark.parametrize("T", [0.6, 1.0])
    def test_reduces_to_single_layer(self, law, T):
        sol = solve(unit_cliques(), law, NO_LINKS, T, 1.0)
        sigma, S = single_type_solution(law, T)
        assert sol.sigma == pytest.approx(sigma, abs=1e-8)
        assert sol.S_c == pytest.approx(S, abs=1e-8)
        assert sol.S_n == pytest.approx(S, abs=1e-8)

    def test_subcritical_is_zero(self):
        profile, kw, kf = figure_setup(1, 1.5, 0.1)
        sol = solve(profile, kw, kf, 0.3, 0.4)
        assert not sol.supercritical
        assert (sol.h1, sol.h2, sol.S_c, sol.S_n) == (1.0, 1.0, 0.0, 0.0)

    def test_zero_transmissibility(self):
        profile, kw, kf = figure_setup(4, 2.0, 0.3)
        sol = solve(profile, kw, kf, 0.0, 0.0)
        assert sol.sigma == 0.0
        assert sol.S_c == 0.0

    @pytest.mark.parametrize("idx, expected", [(1, 0.14), (4, 0.80)])
    def test_node_sizes(self, idx, expected):
        profile, kw, kf = figure_setup(idx, 2.0, 0.3)
        sol = solve(profile, kw, kf, 0.3, 1.0)
        assert sol.converged
        assert sol.S_n == pytest.approx(expected, abs=0.03)

    def test_sizes_grow_with_clique_mixing(self):
        sizes = []
        for idx in SCENARIOS:
            profile, kw, kf = figure_setup(idx, 2.0, 0.3)
            sizes.append(solve(profile, kw, kf, 0.3, 1.0).S_n)
        assert sizes[0] < sizes[3]


class TestThresholds:
    """Bisection for the minimal transmissibility."""

    EXPECTED = {1: 0.64, 2: 0.40, 3: 0.35, 4: 0.26}
    # scenario 3 solves to 0.325, further from the simulated jump than the others
    TOLERANCE = {1: 0.02, 2: 0.02, 3: 0.03, 4: 0.02}

    def test_reference_values(self):
        found = []
        for idx, expected in self.EXPECTED.items():
            profile, kw, kf = figure_setup(idx, 1.5, 0.1)
            tw = critical_Tw(profile, kw, kf, 0.4)
            assert tw == pytest.approx(expected, abs=self.TOLERANCE[idx])
            found.append(tw)
        assert found == sorted(found, reverse=True)
        assert len(set(found)) == 4

    @pytest.mark.parametrize("idx", list(SCENARIOS))
    def test_sigma_crosses_one(self, idx):
        profile, kw, kf = figure_setup(idx, 1.5, 0.1)
        kf_t = kf.thin(0.4)
        tw = critical_Tw(profile, kw, kf, 0.4)

        def sigma(t):
            return spectral_radius(moments(profile, kw.thin(t), kf_t))

        assert abs(sigma(tw) - 1.0) < 5e-4
        assert sigma(tw - 1e-3) < 1.0 < sigma(tw + 1e-3)

    def test_already_supercritical(self):
        profile = unit_cliques(alpha=1.0)
        assert critical_Tw(profile, DegreeLaw.poisson(1.0), DegreeLaw.poisson(3.0), 1.0) == 0.0

    def test_never_supercritical(self):
        assert critical_Tw(unit_cliques(), DegreeLaw.poisson(0.5), NO_LINKS, 1.0) is None

    def test_online_threshold(self):
        profile = unit_cliques(alpha=1.0)
        tf = critical_Tf(profile, NO_LINKS, DegreeLaw.poisson(2.0), 1.0)
        assert tf == pytest.approx(0.5, abs=1e-3)


class TestSingleType:
    """Classical one-layer configuration model."""

    def test_poisson_giant(self):
        sigma, S = single_type_solution(DegreeLaw.poisson(2.0))
        assert sigma == pytest.approx(2.0, abs=1e-8)
        # S = 1 - exp(-2 S)
        assert S == pytest.approx(1.0 - math.exp(-2.0 * S), abs=1e-9)
        assert S == pytest.approx(0.7968, abs=1e-4)

    def test_critical_point(self):
        assert single_type_solution(DegreeLaw.poisson(2.0), 0.5)[1] == 0.0
