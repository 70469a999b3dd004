import math

import numpy as np
import pytest

from wkreg.errors import ConfigInvalid
from wkreg.experiments import (
    ExperimentConfig,
    generate_dataset,
    run_gamma_study,
    run_lemma3_sweep,
    run_tube_experiment,
    true_map,
)
from wkreg.kernels import SquaredExponential
from wkreg.montecarlo import empirical_moments
from wkreg.noise import GammaNoise, GaussianNoise
from wkreg.regression import Dataset
from wkreg.streams import Stream


class TestTrueMap:
    def test_origin(self):
        assert true_map(0.0) == 0.0

    def test_positive_end(self):
        # 0.01*125 - 0.2*25 + 0.2*5 = 1.25 - 5 + 1
        assert true_map(5.0) == pytest.approx(-2.75, rel=1e-15)

    def test_negative_end(self):
        # -1.25 - 5 - 1
        assert true_map(-5.0) == pytest.approx(-7.25, rel=1e-15)

    def test_vectorized(self):
        np.testing.assert_allclose(true_map(np.array([0.0, 5.0])), [0.0, -2.75], rtol=1e-15)


class TestConfig:
    def test_bad_range(self):
        with pytest.raises(ConfigInvalid):
            ExperimentConfig(n_x=2, n_sam=1, x_range=(1.0, 1.0))

    @pytest.mark.parametrize("field,value", [
        ("n_x", 0), ("n_sam", 0), ("prediction_grid_size", 0), ("mc_samples", 0),
    ])
    def test_bad_counts(self, field, value):
        with pytest.raises(ConfigInvalid):
            ExperimentConfig(**{"n_x": 2, "n_sam": 1, field: value})

    def test_bad_ridge(self):
        with pytest.raises(ConfigInvalid):
            ExperimentConfig(n_x=2, n_sam=1, ridge=0.0)


class TestGenerateDataset:
    def test_five_locations(self):
        cfg = ExperimentConfig(n_x=5, n_sam=1, seed=0)
        data = generate_dataset(cfg, Stream(0))
        np.testing.assert_array_equal(np.unique(data.xs[:, 0]), [-5.0, -2.5, 0.0, 2.5, 5.0])

    def test_two_locations_are_endpoints(self):
        cfg = ExperimentConfig(n_x=2, n_sam=1, seed=0)
        data = generate_dataset(cfg, Stream(0))
        np.testing.assert_array_equal(np.unique(data.xs[:, 0]), [-5.0, 5.0])

    def test_repetition_counts(self):
        cfg = ExperimentConfig(n_x=3, n_sam=5, seed=0)
        data = generate_dataset(cfg, Stream(0))
        assert data.size == 15
        values, counts = np.unique(data.xs[:, 0], return_counts=True)
        np.testing.assert_array_equal(values, [-5.0, 0.0, 5.0])
        assert np.all(counts == 5)

    def test_single_location_rejected(self):
        cfg = ExperimentConfig(n_x=1, n_sam=3, seed=0)
        with pytest.raises(ConfigInvalid):
            generate_dataset(cfg, Stream(0))

    def test_deterministic(self):
        cfg = ExperimentConfig(n_x=5, n_sam=2, seed=3)
        a = generate_dataset(cfg, Stream(3))
        b = generate_dataset(cfg, Stream(3))
        assert np.array_equal(a.ys, b.ys)

    def test_noise_enters_targets(self):
        cfg = ExperimentConfig(n_x=5, n_sam=1, seed=1)
        data = generate_dataset(cfg, Stream(1))
        assert not np.allclose(data.ys, true_map(data.xs[:, 0]))


class TestTubeExperiment:
    def test_grid_and_decomposition(self):
        cfg = ExperimentConfig(n_x=5, n_sam=1, seed=0, prediction_grid_size=101)
        table = run_tube_experiment(cfg)
        assert table.x.shape == (101,)
        gap = table.sigma_gp_noisy**2 - table.sigma_gp**2
        assert np.abs(gap - 1.0).max() <= 1e-12
        assert (table.sigma_gp >= 0.0).all() and (table.sigma_wk >= 0.0).all()

    def test_noise_band_shrinks_with_more_samples(self):
        maxima = []
        for n_sam in (1, 5, 25):
            cfg = ExperimentConfig(n_x=5, n_sam=n_sam, seed=0, prediction_grid_size=101)
            maxima.append(run_tube_experiment(cfg).sigma_wk.max())
        assert maxima[0] > maxima[1] > maxima[2]

    def test_noise_band_within_posterior_band(self):
        cfg = ExperimentConfig(n_x=5, n_sam=1, seed=0, prediction_grid_size=101)
        table = run_tube_experiment(cfg)
        assert np.all(table.sigma_wk <= table.sigma_gp + 1e-12)

    def test_deterministic(self):
        cfg = ExperimentConfig(n_x=3, n_sam=2, seed=9, prediction_grid_size=51)
        a = run_tube_experiment(cfg)
        b = run_tube_experiment(cfg)
        for field in ("x", "f_true", "mu", "sigma_gp", "sigma_gp_noisy", "sigma_wk"):
            assert np.array_equal(getattr(a, field), getattr(b, field))


@pytest.fixture(scope="module")
def study():
    cfg = ExperimentConfig(n_x=5, n_sam=1, noise=GammaNoise(0.25, 2.0), seed=0,
                           prediction_grid_size=51, mc_samples=3000)
    return run_gamma_study(cfg)


class TestGammaStudy:
    def test_requires_gamma_noise(self):
        cfg = ExperimentConfig(n_x=5, n_sam=1, seed=0)
        with pytest.raises(ConfigInvalid):
            run_gamma_study(cfg)

    def test_noise_coefficients(self):
        noise = GammaNoise(0.25, 2.0)
        assert noise.pce.m0 == 0.5 and noise.pce.m1 == 1.0

    def test_density_per_location(self, study):
        locations = [loc for loc, _ in study.location_densities]
        assert locations == [-5.0, -2.5, 0.0, 2.5, 5.0]
        for _, dens in study.location_densities:
            assert abs(np.trapezoid(dens.density, dens.support) - 1.0) <= 1e-3

    def test_draws_at_origin_are_skewed(self, study):
        skew = empirical_moments(study.draws_x0)[2]
        assert abs(skew) > 0.2

    def test_mc_mean_matches_analytic(self, study):
        n = study.draws_x0.size
        se = math.sqrt(study.comparison.var_wk / n)
        assert abs(study.draws_x0.mean() - study.comparison.mu) <= 5.0 * se

    def test_comparison_variance_ordering(self, study):
        c = study.comparison
        assert c.var_gp_noisy > c.var_gp >= c.var_wk > 0.0
        assert c.var_gp_noisy == pytest.approx(c.var_gp + 1.0, rel=1e-12)

    def test_comparison_densities_normalized_shapes(self, study):
        c = study.comparison
        for pdf in (c.pdf_gp, c.pdf_wk, c.pdf_gp_noisy):
            assert pdf.shape == c.value.shape
            assert pdf.max() > 0.0

    def test_paths_on_grid(self, study):
        assert study.paths.draws.shape == (3000, 51)
        assert study.paths.grid.shape[0] == 51


class TestLemma3Sweep:
    def test_closed_form_empty_base(self):
        rows = run_lemma3_sweep(None, 0.0, [1, 4], SquaredExponential(1.0, 3.59), 1.0,
                                GaussianNoise(1.0))
        assert rows[0].variance == pytest.approx(0.25, rel=1e-12)
        assert rows[0].bound == 1.0
        assert rows[1].variance == pytest.approx(0.16, rel=1e-12)
        assert rows[1].bound == 0.25

    def test_monotone_nonincreasing_constant_block(self):
        rows = run_lemma3_sweep(None, 0.0, range(1, 101), SquaredExponential(1.0, 3.59), 1.0,
                                GaussianNoise(1.0))
        variances = [r.variance for r in rows]
        assert all(a >= b - 1e-15 for a, b in zip(variances, variances[1:]))

    def test_bound_with_base_and_gamma_noise(self):
        base = Dataset(xs=[-4.0, -1.0, 2.0], ys=[0.3, -0.2, 1.0])
        noise = GammaNoise(0.25, 2.0)
        rows = run_lemma3_sweep(base, 0.5, [1, 3, 10, 30, 100],
                                SquaredExponential(4.21, 3.59), noise.pce.variance, noise)
        for row in rows:
            assert row.variance <= row.bound + 1e-12

    def test_rejects_non_positive_counts(self):
        with pytest.raises(ConfigInvalid):
            run_lemma3_sweep(None, 0.0, [0], SquaredExponential(1.0, 1.0), 1.0, GaussianNoise(1.0))
