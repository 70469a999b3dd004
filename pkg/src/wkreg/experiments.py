"""Reference studies on the cubic toy map.

The unknown map is x -> 0.01 x^3 - 0.2 x^2 + 0.2 x, observed under additive
i.i.d. noise at linearly spaced locations. Studies produced here:

* tube tables: mean and the three uncertainty bands (GP posterior, GP
  posterior plus noise, noise-only) over a prediction grid;
* the gamma study: Monte Carlo path realizations, per-location density
  fits, and closed-form normal comparisons at x = 0;
* the repeated-sampling sweep: noise-only variance at a point against the
  1/N bound as samples accumulate there.

Randomness discipline: each study owns a root stream seeded from its
config; child 0 draws the dataset, child 1 drives Monte Carlo.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigInvalid
from .kernels import Kernel, SquaredExponential, as_point
from .montecarlo import DensityEstimate, RealizationSet, kde, sample_paths
from .noise import GammaNoise, GaussianNoise, NoiseModel
from .regression import Dataset, FittedModel, fit
from .streams import Stream

_DATA_STREAM = 0
_MC_STREAM = 1


def default_kernel() -> SquaredExponential:
    return SquaredExponential(sigma_f=4.21, lengthscale=3.59)


@dataclass
class ExperimentConfig:
    """Settings for one study run."""

    n_x: int
    n_sam: int
    x_range: tuple[float, float] = (-5.0, 5.0)
    kernel: Kernel = field(default_factory=default_kernel)
    noise: NoiseModel = field(default_factory=lambda: GaussianNoise(1.0))
    ridge: float = 1.0
    prediction_grid_size: int = 201
    mc_samples: int = 5000
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.x_range
        if not lo < hi:
            raise ConfigInvalid(f"x_range must satisfy lo < hi, got {self.x_range}")
        for name in ("n_x", "n_sam", "prediction_grid_size", "mc_samples"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ConfigInvalid(f"{name} must be a positive integer, got {v}")
        if not self.ridge > 0.0:
            raise ConfigInvalid(f"ridge must be positive, got {self.ridge}")

    def grid(self) -> np.ndarray:
        lo, hi = self.x_range
        return np.linspace(lo, hi, self.prediction_grid_size)


@dataclass(frozen=True)
class TubeTable:
    """Per-grid-point mean and standard deviations, plus the training data."""

    x: np.ndarray
    f_true: np.ndarray
    mu: np.ndarray
    sigma_gp: np.ndarray
    sigma_gp_noisy: np.ndarray
    sigma_wk: np.ndarray
    dataset: Dataset


@dataclass(frozen=True)
class ComparisonDensities:
    """Densities at x = 0: the MC fit and three matching normals."""

    value: np.ndarray
    pdf_mc_fit: np.ndarray
    pdf_gp: np.ndarray
    pdf_wk: np.ndarray
    pdf_gp_noisy: np.ndarray
    mu: float
    var_gp: float
    var_wk: float
    var_gp_noisy: float


@dataclass(frozen=True)
class GammaStudyResult:
    tube: TubeTable
    paths: RealizationSet
    location_densities: list[tuple[float, DensityEstimate]]
    comparison: ComparisonDensities
    draws_x0: np.ndarray


@dataclass(frozen=True)
class Lemma3Row:
    """Noise-only variance after N repeats at one point, with its bound."""

    n_repeats: int
    variance: float
    bound: float


def true_map(x):
    """Noiseless next-state map of the toy system."""
    x = np.asarray(x, dtype=np.float64)
    out = 0.01 * x**3 - 0.2 * x**2 + 0.2 * x
    return float(out) if out.ndim == 0 else out


def generate_dataset(cfg: ExperimentConfig, stream: Stream) -> Dataset:
    """Sample the toy map at linearly spaced locations.

    Locations are the inclusive linspace over the configured range, each
    repeated ``n_sam`` times with an independent noise draw per repetition.
    """
    if cfg.n_x < 2:
        raise ConfigInvalid(f"need n_x >= 2 for linearly spaced locations, got {cfg.n_x}")
    lo, hi = cfg.x_range
    xs = np.repeat(np.linspace(lo, hi, cfg.n_x), cfg.n_sam)
    ys = true_map(xs) + cfg.noise.sample_noise(stream, xs.size)
    return Dataset(xs=xs, ys=ys)


def _tube_from_model(model: FittedModel, grid: np.ndarray) -> TubeTable:
    mu = np.empty(grid.size)
    var_gp = np.empty(grid.size)
    var_gp_noisy = np.empty(grid.size)
    var_wk = np.empty(grid.size)
    for i, x in enumerate(grid):
        gp = model.gp_predict(x)
        pred = model.wk_predict(x)
        mu[i] = pred.mean
        var_gp[i] = gp.var_gp
        var_gp_noisy[i] = gp.var_gp_noisy
        var_wk[i] = pred.variance
    return TubeTable(
        x=grid,
        f_true=true_map(grid),
        mu=mu,
        sigma_gp=np.sqrt(var_gp),
        sigma_gp_noisy=np.sqrt(var_gp_noisy),
        sigma_wk=np.sqrt(var_wk),
        dataset=model.data,
    )


def run_tube_experiment(cfg: ExperimentConfig) -> TubeTable:
    """Fit once and tabulate mean and uncertainty bands over the grid."""
    root = Stream(cfg.seed)
    data = generate_dataset(cfg, root.split(_DATA_STREAM))
    model = fit(data, cfg.kernel, cfg.ridge, cfg.noise)
    return _tube_from_model(model, cfg.grid())


def _normal_pdf(x: np.ndarray, mean: float, variance: float) -> np.ndarray:
    return np.exp(-0.5 * (x - mean) ** 2 / variance) / math.sqrt(2.0 * math.pi * variance)


def run_gamma_study(cfg: ExperimentConfig, workers: int = 1) -> GammaStudyResult:
    """Monte Carlo study of the predictor under gamma noise.

    One shared collection of realizations feeds everything: the path plot
    data on the prediction grid, the density fits at the data locations,
    and the histogram fit at x = 0 compared against the normals implied by
    the GP posterior variance, the noise-only variance, and their sum.
    """
    if not isinstance(cfg.noise, GammaNoise):
        raise ConfigInvalid("the gamma study requires gamma noise")
    root = Stream(cfg.seed)
    data = generate_dataset(cfg, root.split(_DATA_STREAM))
    model = fit(data, cfg.kernel, cfg.ridge, cfg.noise)

    grid = cfg.grid()
    locs = np.unique(data.xs[:, 0])
    # One realization set over grid + data locations + x0 keeps every view
    # of the study coherent (same standardized draws everywhere).
    eval_pts = np.concatenate([grid, locs, [0.0]])
    full = sample_paths(model, eval_pts, root.split(_MC_STREAM), cfg.mc_samples, workers=workers)

    g = grid.size
    paths = RealizationSet(grid=full.grid[:g], draws=full.draws[:, :g], seed=full.seed)
    location_densities = [
        (float(loc), kde(full.draws[:, g + i])) for i, loc in enumerate(locs)
    ]
    draws_x0 = full.draws[:, -1]

    kde_x0 = kde(draws_x0)
    gp0 = model.gp_predict(0.0)
    pred0 = model.wk_predict(0.0)
    comparison = ComparisonDensities(
        value=kde_x0.support,
        pdf_mc_fit=kde_x0.density,
        pdf_gp=_normal_pdf(kde_x0.support, pred0.mean, gp0.var_gp),
        pdf_wk=_normal_pdf(kde_x0.support, pred0.mean, pred0.variance),
        pdf_gp_noisy=_normal_pdf(kde_x0.support, pred0.mean, gp0.var_gp_noisy),
        mu=pred0.mean,
        var_gp=gp0.var_gp,
        var_wk=pred0.variance,
        var_gp_noisy=gp0.var_gp_noisy,
    )
    return GammaStudyResult(
        tube=_tube_from_model(model, grid),
        paths=paths,
        location_densities=location_densities,
        comparison=comparison,
        draws_x0=draws_x0,
    )


def run_lemma3_sweep(base: Dataset | None, x_bar, n_list, kernel: Kernel,
                     ridge: float, noise: NoiseModel) -> list[Lemma3Row]:
    """Noise-only variance at ``x_bar`` as repeated samples accumulate.

    For each N the dataset is the base plus N repeats at ``x_bar``; the
    recorded variance depends only on the locations, so the repeats carry
    placeholder targets. Every row satisfies variance <= noise_var / N.
    """
    x_bar = as_point(x_bar)
    rows = []
    for n in n_list:
        if n < 1:
            raise ConfigInvalid(f"repeat counts must be >= 1, got {n}")
        repeats = np.tile(x_bar, (n, 1))
        if base is None:
            xs, ys = repeats, np.zeros(n)
        else:
            xs = np.vstack([base.xs, repeats])
            ys = np.concatenate([base.ys, np.zeros(n)])
        model = fit(Dataset(xs=xs, ys=ys), kernel, ridge, noise)
        rows.append(Lemma3Row(
            n_repeats=int(n),
            variance=model.sigma_wk(x_bar),
            bound=noise.pce.variance / n,
        ))
    return rows
