import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kinequality import (
    ValidationError, collapse_distance, fit_lognormal, fit_powerlaw_tail,
    log_binned_histogram, rescale_by_mean,
)


def pareto_draws(alpha, n, seed, xmin=1.0):
    u = np.random.default_rng(seed).random(n)
    return xmin * (1.0 - u) ** (-1.0 / (alpha - 1.0))


class TestRescale:
    def test_divides_by_mean(self):
        rs = rescale_by_mean([2, 4, 6])
        assert rs.values == pytest.approx([0.5, 1.0, 1.5])
        assert rs.original_mean == 4 and rs.dropped_zeros == 0

    def test_identity(self):
        assert rescale_by_mean([1, 1, 1]).values == pytest.approx([1, 1, 1])

    def test_zero_drop(self):
        rs = rescale_by_mean([0, 3, 3])
        assert rs.values == pytest.approx([1, 1])
        assert rs.dropped_zeros == 1

    def test_all_zero(self):
        with pytest.raises(ValidationError):
            rescale_by_mean([0, 0])

    @given(st.lists(st.floats(1e-3, 1e6), min_size=1, max_size=50))
    def test_unit_mean(self, values):
        assert rescale_by_mean(values).values.mean() == pytest.approx(1.0, rel=1e-9)


class TestLognormal:
    def test_three_points(self):
        fit = fit_lognormal([math.exp(-1), 1.0, math.e], min_count=3)
        assert fit.mu == pytest.approx(0, abs=1e-15)
        assert fit.sigma == pytest.approx(math.sqrt(2 / 3), abs=1e-15)

    def test_degenerate(self):
        with pytest.raises(ValidationError, match="sigma"):
            fit_lognormal([2.5] * 20)

    def test_too_few(self):
        with pytest.raises(ValidationError):
            fit_lognormal([1, 2, 3])

    def test_nonpositive(self):
        with pytest.raises(ValidationError):
            fit_lognormal([0.0] + [1.0] * 20)

    def test_recovery(self):
        x = np.random.default_rng(0).lognormal(-0.73, 1.29, size=10**6)
        fit = fit_lognormal(x)
        assert fit.mu == pytest.approx(-0.73, abs=0.01)
        assert fit.sigma == pytest.approx(1.29, abs=0.01)
        assert fit.n_used == 10**6

    @settings(max_examples=30)
    @given(st.floats(1e-3, 1e3))
    def test_scale_equivariance(self, s):
        x = np.random.default_rng(1).lognormal(0.2, 0.8, size=200)
        a, b = fit_lognormal(x), fit_lognormal(x * s)
        assert b.mu == pytest.approx(a.mu + math.log(s), abs=1e-12)
        assert b.sigma == pytest.approx(a.sigma, abs=1e-12)

    def test_rescaling_pins_mu(self):
        x = np.random.default_rng(2).lognormal(1.0, 0.5, size=1000)
        rs = rescale_by_mean(x)
        assert fit_lognormal(rs).mu == pytest.approx(fit_lognormal(x).mu - math.log(rs.original_mean),
                                                     abs=1e-12)

    @pytest.mark.parametrize("n,tol", [(10**3, 0.1), (10**4, 0.03), (10**5, 0.01)])
    def test_consistency(self, n, tol):
        fit = fit_lognormal(np.random.default_rng(n).lognormal(-0.75, 1.18, size=n))
        assert abs(fit.mu + 0.75) <= tol and abs(fit.sigma - 1.18) <= tol


class TestPowerLawTail:
    def test_fixed_cutoff(self):
        fit = fit_powerlaw_tail([1, 2, 4, 8], min_tail=2, xmin=1)
        assert fit.alpha == pytest.approx(1 + 4 / math.log(64), abs=1e-14)
        assert fit.alpha == pytest.approx(1.9618, abs=1e-4)
        assert fit.n_tail == 4

    @pytest.mark.parametrize("alpha", [1.5, 2.5])
    def test_recovery(self, alpha):
        fit = fit_powerlaw_tail(pareto_draws(alpha, 10**5, seed=int(alpha * 10)))
        assert fit.alpha == pytest.approx(alpha, abs=0.1)
        assert 0 <= fit.ks <= 1 and fit.n_tail >= 50

    @pytest.mark.parametrize("n,tol", [(10**3, 0.3), (10**4, 0.15), (10**5, 0.1)])
    def test_consistency(self, n, tol):
        assert fit_powerlaw_tail(pareto_draws(2.8, n, seed=n)).alpha == pytest.approx(2.8, abs=tol)

    def test_finds_tail_above_body(self):
        rng = np.random.default_rng(5)
        body = rng.uniform(0.1, 1.0, size=20_000)
        x = np.concatenate([body, pareto_draws(2.5, 5_000, seed=6, xmin=1.0)])
        fit = fit_powerlaw_tail(x)
        assert fit.xmin >= 0.9
        assert fit.alpha == pytest.approx(2.5, abs=0.15)

    def test_scale_invariance(self):
        x = pareto_draws(2.2, 5_000, seed=3)
        a, b = fit_powerlaw_tail(x), fit_powerlaw_tail(x * 37.5)
        assert b.alpha == pytest.approx(a.alpha, abs=1e-12)
        assert b.xmin == pytest.approx(a.xmin * 37.5, rel=1e-12)

    def test_too_small(self):
        with pytest.raises(ValidationError):
            fit_powerlaw_tail(pareto_draws(2.0, 30, seed=0), min_tail=50)
        with pytest.raises(ValidationError):
            fit_powerlaw_tail([1, 2, 4, 8], min_tail=5, xmin=1)

    def test_nonpositive(self):
        with pytest.raises(ValidationError):
            fit_powerlaw_tail([0, 1, 2], min_tail=2)


class TestHistogram:
    def test_single_value(self):
        h = log_binned_histogram([3.0] * 7, 5)
        assert h.densities.size == 1
        assert h.densities[0] * h.widths[0] == pytest.approx(1.0)

    def test_uniform_flat_density(self):
        x = np.random.default_rng(0).uniform(1, 10, size=10**6)
        h = log_binned_histogram(x, 5)
        assert h.bin_edges[0] == x.min() and h.bin_edges[-1] == x.max()
        assert np.allclose(h.densities, 1 / 9, rtol=0.05)
        ratios = h.bin_edges[1:] / h.bin_edges[:-1]
        assert np.allclose(ratios, ratios[0])

    def test_lognormal_mode(self):
        mu, sigma = -0.73, 1.29
        h = log_binned_histogram(np.random.default_rng(1).lognormal(mu, sigma, 10**6), 10)
        peak = int(np.argmax(h.densities))
        mode_bin = int(np.searchsorted(h.bin_edges, math.exp(mu - sigma**2)) - 1)
        assert abs(peak - mode_bin) <= 1

    @given(st.lists(st.floats(1e-4, 1e4), min_size=1, max_size=200), st.integers(1, 20))
    def test_normalised(self, values, bpd):
        h = log_binned_histogram(values, bpd)
        assert np.sum(h.densities * h.widths) == pytest.approx(1.0, abs=1e-6)
        assert np.all(h.densities >= 0)

    def test_rejects(self):
        with pytest.raises(ValidationError):
            log_binned_histogram([0.0, 1.0], 5)
        with pytest.raises(ValidationError):
            log_binned_histogram([1.0, 2.0], 0)


class TestCollapse:
    @staticmethod
    def hist(draws):
        return log_binned_histogram(rescale_by_mean(draws), 10)

    def test_self_distance(self):
        h = self.hist(np.random.default_rng(0).lognormal(0, 1, 1000))
        assert collapse_distance(h, h) == 0

    def test_same_law_collapses(self):
        a = self.hist(np.random.default_rng(1).lognormal(-0.73, 1.29, 10**6))
        b = self.hist(np.random.default_rng(2).lognormal(-0.73, 1.29, 10**6))
        assert collapse_distance(a, b) < 0.02

    def test_different_laws_separate(self):
        a = self.hist(np.random.default_rng(3).lognormal(-0.73, 1.29, 10**6))
        b = self.hist(np.random.default_rng(4).exponential(1.0, 10**6))
        assert collapse_distance(a, b) > 0.2

    def test_disjoint(self):
        a = log_binned_histogram([1.0, 2.0], 5)
        b = log_binned_histogram([10.0, 20.0], 5)
        with pytest.raises(ValidationError):
            collapse_distance(a, b)
