"""Fitted predictors: classical GP posterior and the chaos-expanded ridge
predictor, sharing one Cholesky factorization of (K + ridge*I).

The GP side returns a mean and two variances (posterior, posterior plus
noise). The other side returns the full random-variable prediction as a
mean plus one loading per training datum on that datum's standardized noise
basis; its variance is the sum of squared loadings, equivalently
``m1^2 * k(x)^T (K + ridge*I)^-2 k(x)``. Both variances depend on the input
locations only, never on the measured targets.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch, NonPositiveRidge, RidgeNotNoiseVariance, WrongKernelVariant
from .kernels import FiniteFeature, Kernel, as_point, as_points
from .noise import NoiseModel


@dataclass(frozen=True)
class Dataset:
    """Input locations (D, n_x) and scalar targets (D,). Duplicates allowed;
    repeated locations keep their own noise draws and are never merged."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = as_points(self.xs)
        ys = np.asarray(self.ys, dtype=np.float64)
        if ys.ndim != 1:
            raise DimensionMismatch(f"targets must be a vector, got shape {ys.shape}")
        if xs.shape[0] != ys.shape[0]:
            raise DimensionMismatch(f"{xs.shape[0]} locations vs {ys.shape[0]} targets")
        if not np.all(np.isfinite(ys)):
            raise ValueError("targets must be finite")
        # copy before freezing: the coercions may alias caller-owned arrays
        xs = xs.copy()
        xs.flags.writeable = False
        ys = ys.copy()
        ys.flags.writeable = False
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def size(self) -> int:
        return self.ys.shape[0]


@dataclass(frozen=True)
class GpPrediction:
    """GP posterior at one point: mean, posterior variance, and posterior
    variance with the noise variance added back."""

    mu: float
    var_gp: float
    var_gp_noisy: float


@dataclass(frozen=True)
class PcePrediction:
    """Random-variable prediction: mean plus per-datum noise loadings.

    The predicted variable is ``mean + sum_j loadings[j] * phi1(xi_j)`` with
    i.i.d. standardized arguments xi_j, one per training datum.
    """

    mean: float
    loadings: np.ndarray

    @property
    def variance(self) -> float:
        return float(self.loadings @ self.loadings)


def wk_moments(pred: PcePrediction) -> tuple[float, float]:
    """Mean and variance of a chaos-expanded prediction."""
    return pred.mean, pred.variance


class FittedModel:
    """Both predictors over one dataset, kernel, ridge and noise model."""

    def __init__(self, data: Dataset, kernel: Kernel, ridge: float, noise: NoiseModel):
        if not ridge > 0.0:
            raise NonPositiveRidge(f"ridge must be positive, got {ridge}")
        self.data = data
        self.kernel = kernel
        self.ridge = float(ridge)
        self.noise = noise
        self.factor = linalg.cholesky(kernel.gram(data.xs), self.ridge)
        y0 = data.ys - noise.pce.m0 * np.ones(data.size)
        y0.flags.writeable = False
        self.y0 = y0

    def _kvec(self, x) -> np.ndarray:
        return self.kernel.kvec(self.data.xs, as_point(x))

    def gp_predict(self, x) -> GpPrediction:
        """GP posterior mean and variances, reading ridge as the noise
        variance slot. Posterior variance is clamped at zero."""
        x = as_point(x)
        kv = self._kvec(x)
        mu = float(kv @ linalg.solve(self.factor, self.data.ys))
        var = float(self.kernel.eval(x, x) - kv @ linalg.solve(self.factor, kv))
        var = max(0.0, var)
        return GpPrediction(mu=mu, var_gp=var, var_gp_noisy=var + self.noise.pce.variance)

    def wk_predict(self, x) -> PcePrediction:
        """Chaos-expanded prediction at ``x``."""
        a = linalg.solve(self.factor, self._kvec(x))
        loadings = -self.noise.pce.m1 * a
        loadings.flags.writeable = False
        return PcePrediction(mean=float(a @ self.y0), loadings=loadings)

    def sigma_wk(self, x) -> float:
        """Noise-induced predictive variance at ``x``.

        Calibrated for ridge equal to the noise variance; warns (and still
        computes) otherwise.
        """
        if self.ridge != self.noise.pce.variance:
            warnings.warn(
                f"ridge={self.ridge} differs from noise variance {self.noise.pce.variance}; "
                "the noise-only variance is calibrated for ridge == noise variance",
                RidgeNotNoiseVariance,
                stacklevel=2,
            )
        return wk_moments(self.wk_predict(x))[1]


def fit(data: Dataset, kernel: Kernel, ridge: float, noise: NoiseModel) -> FittedModel:
    """Factor (K + ridge*I) once and cache everything predictions need."""
    return FittedModel(data, kernel, ridge, noise)


def weight_space_solve(data: Dataset, kernel: FiniteFeature, ridge: float,
                       noise: NoiseModel) -> list[np.ndarray]:
    """Explicit-feature weights, one vector per basis index j = 0..D.

    Index 0 carries the mean weights fitted to the centered targets; index
    j >= 1 carries the weights fitted to ``-m1 * e_j``. Predictions built
    from these weights coincide with the kernelized predictor; the tests
    use this as the cross-check oracle.
    """
    if not isinstance(kernel, FiniteFeature):
        raise WrongKernelVariant(f"weight-space solve requires a finite-feature kernel, got {type(kernel).__name__}")
    if not ridge > 0.0:
        raise NonPositiveRidge(f"ridge must be positive, got {ridge}")
    phi = kernel.feature_matrix(data.xs)
    factor = linalg.cholesky(kernel.gram(data.xs), ridge)
    m = noise.pce
    weights = [phi @ linalg.solve(factor, data.ys - m.m0 * np.ones(data.size))]
    for j in range(data.size):
        e_j = np.zeros(data.size)
        e_j[j] = 1.0
        weights.append(phi @ linalg.solve(factor, -m.m1 * e_j))
    return weights


def predict_from_weights(kernel: FiniteFeature, weights: list[np.ndarray], x) -> PcePrediction:
    """Evaluate a weight-space solution at ``x`` as a PcePrediction."""
    if not isinstance(kernel, FiniteFeature):
        raise WrongKernelVariant(f"requires a finite-feature kernel, got {type(kernel).__name__}")
    phi_x = kernel.feature_matrix(as_point(x)[None, :])[:, 0]
    mean = float(phi_x @ weights[0])
    loadings = np.array([phi_x @ w for w in weights[1:]])
    return PcePrediction(mean=mean, loadings=loadings)
