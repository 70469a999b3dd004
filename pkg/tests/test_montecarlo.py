import math

import numpy as np
import pytest
from scipy.stats import norm

from wkreg.errors import DegenerateSample
from wkreg.kernels import SquaredExponential
from wkreg.montecarlo import (
    empirical_moments,
    histogram,
    kde,
    sample_at,
    sample_paths,
    silverman_bandwidth,
)
from wkreg.noise import GammaNoise, GaussianNoise
from wkreg.regression import Dataset, PcePrediction, fit
from wkreg.streams import Stream

GAMMA = GammaNoise(0.25, 2.0)
GAUSS = GaussianNoise(1.0)


def toy_model(noise=GAUSS, n=5):
    xs = np.linspace(-5.0, 5.0, n)
    rng = np.random.default_rng(0)
    data = Dataset(xs=xs, ys=rng.normal(size=n))
    return fit(data, SquaredExponential(4.21, 3.59), noise.pce.variance, noise)


class TestSampleAt:
    def test_zero_loadings_give_constant_draws(self):
        pred = PcePrediction(mean=1.5, loadings=np.zeros(3))
        draws = sample_at(pred, GAUSS, Stream(1), 64)
        assert np.all(draws == 1.5)

    def test_gaussian_variance_matches_analytic(self):
        pred = toy_model().wk_predict(0.0)
        draws = sample_at(pred, GAUSS, Stream(2), 10**6)
        assert abs(draws.var(ddof=1) - pred.variance) <= 0.02 * pred.variance

    def test_gamma_skewness_single_loading(self):
        # one loading -1/2: skewness = (-0.5)^3 * 4 / 0.25^1.5 = -4
        pred = PcePrediction(mean=0.0, loadings=np.array([-0.5]))
        draws = sample_at(pred, GAMMA, Stream(3), 10**6)
        assert abs(empirical_moments(draws)[2] - (-4.0)) <= 0.1

    def test_mean_converges(self):
        pred = toy_model(GAMMA).wk_predict(0.0)
        n = 10**5
        draws = sample_at(pred, GAMMA, Stream(4), n)
        se = math.sqrt(pred.variance / n)
        assert abs(draws.mean() - pred.mean) <= 5.0 * se

    def test_deterministic_and_worker_invariant(self):
        pred = toy_model().wk_predict(1.0)
        a = sample_at(pred, GAUSS, Stream(5), 10000)
        b = sample_at(pred, GAUSS, Stream(5), 10000)
        c = sample_at(pred, GAUSS, Stream(5), 10000, workers=4)
        assert np.array_equal(a, b)
        assert np.array_equal(a, c)

    def test_rejects_zero_draws(self):
        pred = PcePrediction(mean=0.0, loadings=np.ones(1))
        with pytest.raises(ValueError):
            sample_at(pred, GAUSS, Stream(0), 0)


class TestSamplePaths:
    def test_zero_loading_path_equals_mean_curve(self):
        pred_model = toy_model()
        grid = np.array([50.0, 60.0, 70.0])  # far from data: loadings vanish
        rs = sample_paths(pred_model, grid, Stream(6), 1)
        means = np.array([pred_model.wk_predict(x).mean for x in grid])
        np.testing.assert_allclose(rs.draws[0], means, atol=1e-12)

    def test_column_variance_matches_analytic(self):
        model = toy_model()
        grid = np.array([-2.0, 0.0, 3.0])
        rs = sample_paths(model, grid, Stream(7), 10**5)
        for j, x in enumerate(grid):
            ref = model.wk_predict(x).variance
            assert abs(rs.draws[:, j].var(ddof=1) - ref) <= 0.03 * ref

    def test_column_mean_within_standard_errors(self):
        model = toy_model(GAMMA)
        grid = np.array([0.0, 2.5])
        n = 10**5
        rs = sample_paths(model, grid, Stream(8), n)
        for j, x in enumerate(grid):
            pred = model.wk_predict(x)
            se = math.sqrt(pred.variance / n)
            assert abs(rs.draws[:, j].mean() - pred.mean) <= 5.0 * se

    def test_deterministic_given_seed(self):
        model = toy_model()
        grid = np.linspace(-5.0, 5.0, 7)
        a = sample_paths(model, grid, Stream(9), 500)
        b = sample_paths(model, grid, Stream(9), 500)
        assert np.array_equal(a.draws, b.draws)
        assert a.seed == b.seed == 9

    def test_path_coherence_repeated_grid_point(self):
        model = toy_model(GAMMA)
        rs = sample_paths(model, np.array([1.0, 3.0, 1.0]), Stream(10), 200)
        assert np.array_equal(rs.draws[:, 0], rs.draws[:, 2])

    def test_workers_do_not_change_draws(self):
        model = toy_model()
        grid = np.linspace(-5.0, 5.0, 5)
        a = sample_paths(model, grid, Stream(11), 20000)
        b = sample_paths(model, grid, Stream(11), 20000, workers=3)
        assert np.array_equal(a.draws, b.draws)


class TestKde:
    def test_matches_normal_density(self):
        draws = Stream(12).generator.standard_normal(10**6)
        support = np.linspace(-4.0, 4.0, 161)
        est = kde(draws, support)
        assert np.abs(est.density - norm.pdf(support)).max() <= 0.01

    def test_degenerate_samples_rejected(self):
        with pytest.raises(DegenerateSample):
            kde(np.array([0.0, 0.0]))
        with pytest.raises(DegenerateSample):
            kde(np.array([1.0]))

    def test_auto_support_integrates_to_one(self):
        draws = Stream(13).generator.standard_normal(20000)
        est = kde(draws)
        assert abs(np.trapezoid(est.density, est.support) - 1.0) <= 1e-3

    def test_explicit_support_integrates_when_padded(self):
        draws = Stream(14).generator.standard_normal(20000)
        h = silverman_bandwidth(draws)
        support = np.linspace(draws.min() - 4 * h, draws.max() + 4 * h, 400)
        est = kde(draws, support)
        assert abs(np.trapezoid(est.density, est.support) - 1.0) <= 1e-3

    def test_density_non_negative(self):
        draws = Stream(15).generator.standard_normal(1000)
        assert kde(draws).density.min() >= 0.0


class TestSilvermanBandwidth:
    def test_formula(self):
        rng = np.random.default_rng(16)
        draws = rng.normal(size=4096)
        std = draws.std(ddof=1)
        q75, q25 = np.percentile(draws, [75, 25])
        expected = 0.9 * min(std, (q75 - q25) / 1.34) * 4096 ** (-0.2)
        assert silverman_bandwidth(draws) == pytest.approx(expected, rel=1e-14)

    def test_zero_iqr_falls_back_to_std(self):
        # over half the mass on one value: IQR is 0 but the spread is not
        draws = np.array([0.0] * 60 + [1.0] * 20 + [-1.0] * 20)
        assert silverman_bandwidth(draws) == pytest.approx(
            0.9 * draws.std(ddof=1) * draws.size ** (-0.2), rel=1e-14)

    def test_constant_rejected(self):
        with pytest.raises(DegenerateSample):
            silverman_bandwidth(np.ones(10))


class TestHistogram:
    def test_density_integrates_to_one(self):
        draws = Stream(18).generator.standard_normal(5000)
        h = histogram(draws)
        widths = np.diff(h.edges)
        assert float((h.density * widths).sum()) == pytest.approx(1.0, rel=1e-12)

    def test_bin_count_from_iqr_rule(self):
        draws = Stream(19).generator.standard_normal(8000)
        q75, q25 = np.percentile(draws, [75, 25])
        width = 2.0 * (q75 - q25) * 8000 ** (-1.0 / 3.0)
        expected_bins = int(np.ceil(np.ptp(draws) / width))
        assert histogram(draws).density.size == expected_bins

    def test_zero_iqr_falls_back_to_sturges(self):
        draws = np.array([0.0] * 60 + [1.0] * 20 + [-1.0] * 20)
        h = histogram(draws)
        assert h.density.size == int(np.ceil(np.log2(draws.size))) + 1

    def test_matches_numpy_density_on_same_edges(self):
        draws = Stream(20).generator.standard_normal(2000)
        h = histogram(draws)
        ref, _ = np.histogram(draws, bins=h.edges, density=True)
        np.testing.assert_array_equal(h.density, ref)

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateSample):
            histogram(np.ones(50))


class TestEmpiricalMoments:
    def test_constant_samples_rejected(self):
        with pytest.raises(DegenerateSample):
            empirical_moments(np.full(10, 3.0))

    def test_needs_three_samples(self):
        with pytest.raises(DegenerateSample):
            empirical_moments(np.array([0.0, 1.0]))

    def test_alternating_signs_have_zero_skewness(self):
        samples = np.tile([1.0, -1.0], 50)
        mean, var, skew = empirical_moments(samples)
        assert mean == 0.0
        assert var == pytest.approx(100.0 / 99.0, rel=1e-14)
        assert skew == 0.0

    def test_gamma_skewness_identity(self):
        draws = GAMMA.sample_noise(Stream(17), 10**6)
        assert abs(empirical_moments(draws)[2] - 4.0) <= 0.1

    def test_unbiased_variance(self):
        samples = np.array([1.0, 2.0, 4.0])
        mean, var, _ = empirical_moments(samples)
        assert mean == pytest.approx(7.0 / 3.0, rel=1e-15)
        assert var == pytest.approx(np.var(samples, ddof=1), rel=1e-15)
