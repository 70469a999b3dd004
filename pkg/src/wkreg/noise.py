"""Finite-variance i.i.d. noise models with exact two-term chaos expansions.

Any finite-variance random variable M can be written exactly as
``M = m0 + m1 * phi1(xi)`` where ``phi1`` has zero mean and unit variance.
The pair ``(m0, m1)`` is all the regression layer needs; samplers for the
standardized basis feed the Monte Carlo layer. Mean and (co)variance follow
directly from the coefficients: the mean is the zeroth coefficient and the
covariance is the sum of outer products of the higher ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._backend import standard_gamma
from .errors import ConfigError, DimensionMismatch, NonPositiveStd
from .linalg import SymMatrix
from .streams import Stream


@dataclass(frozen=True)
class Pce2:
    """Two-term expansion coefficients: mean ``m0``, loading ``m1 >= 0``."""

    m0: float
    m1: float

    def __post_init__(self):
        if not (math.isfinite(self.m0) and math.isfinite(self.m1)):
            raise ValueError("coefficients must be finite")
        if self.m1 < 0.0:
            raise ValueError(f"m1 must be non-negative, got {self.m1}")

    @property
    def mean(self) -> float:
        return self.m0

    @property
    def variance(self) -> float:
        return self.m1 * self.m1


def two_term_pce(mean: float, std: float) -> Pce2:
    """Exact two-term representation of a variable with given mean and std."""
    if not (math.isfinite(std) and std > 0.0):
        raise NonPositiveStd(f"std must be positive, got {std}")
    return Pce2(m0=float(mean), m1=float(std))


def moments_from_pce(coeffs) -> tuple[np.ndarray, SymMatrix]:
    """Mean vector and covariance matrix from expansion coefficients.

    ``coeffs[0]`` is the mean; the covariance is the sum of outer products
    of the remaining coefficient vectors. Scalar coefficients are treated as
    one-dimensional vectors.
    """
    vecs = [np.atleast_1d(np.asarray(c, dtype=np.float64)) for c in coeffs]
    if not vecs:
        raise DimensionMismatch("need at least the mean coefficient")
    n = vecs[0].shape[0]
    if any(v.ndim != 1 or v.shape[0] != n for v in vecs):
        raise DimensionMismatch("all coefficient vectors must share one dimension")
    cov = np.zeros((n, n))
    for v in vecs[1:]:
        cov += np.outer(v, v)
    return vecs[0].copy(), SymMatrix(cov)


class NoiseModel:
    """Base class: exposes coefficients and a standardized-basis sampler."""

    pce: Pce2

    def sample_standardized(self, stream: Stream, n: int) -> np.ndarray:
        """Draw ``n`` i.i.d. values of the zero-mean unit-variance basis."""
        raise NotImplementedError

    def sample_noise(self, stream: Stream, n: int) -> np.ndarray:
        """Draw ``n`` i.i.d. values of the noise itself, ``m0 + m1 * phi1``."""
        return self.pce.m0 + self.pce.m1 * self.sample_standardized(stream, n)


def _check_count(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"sample count must be a non-negative integer, got {n}")
    return int(n)


class GaussianNoise(NoiseModel):
    """Zero-mean Gaussian noise with standard deviation ``sigma_m``."""

    def __init__(self, sigma_m: float):
        if not (math.isfinite(sigma_m) and sigma_m > 0.0):
            raise NonPositiveStd(f"sigma_m must be positive, got {sigma_m}")
        self.sigma_m = float(sigma_m)
        self.pce = Pce2(m0=0.0, m1=self.sigma_m)

    def sample_standardized(self, stream, n):
        return stream.generator.standard_normal(_check_count(n))

    def __repr__(self):
        return f"GaussianNoise(sigma_m={self.sigma_m})"


class GammaNoise(NoiseModel):
    """Gamma(shape alpha, scale beta) noise: mean a*b, variance a*b^2.

    Standardized draws come from the Marsaglia-Tsang squeeze sampler (with
    the shape+1 boost for alpha < 1) via ``(g - alpha) / sqrt(alpha)`` on
    unit-scale draws.
    """

    def __init__(self, alpha: float, beta: float):
        for name, v in (("alpha", alpha), ("beta", beta)):
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be positive, got {v}")
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.pce = Pce2(m0=self.alpha * self.beta, m1=math.sqrt(self.alpha) * self.beta)

    def sample_standardized(self, stream, n):
        draws = standard_gamma(stream.generator, self.alpha, _check_count(n))
        return (draws - self.alpha) / math.sqrt(self.alpha)

    def __repr__(self):
        return f"GammaNoise(alpha={self.alpha}, beta={self.beta})"


class CustomTwoTerm(NoiseModel):
    """User-supplied noise: a mean, a std, and a standardized sampler.

    The sampler must produce i.i.d. draws with zero mean and unit variance;
    that contract is the caller's to keep (the built-in models are verified
    in the test suite).
    """

    def __init__(self, mean: float, std: float,
                 standardized_sampler: Callable[[Stream, int], np.ndarray]):
        self.pce = two_term_pce(mean, std)
        self._sampler = standardized_sampler

    def sample_standardized(self, stream, n):
        n = _check_count(n)
        out = np.asarray(self._sampler(stream, n), dtype=np.float64)
        if out.shape != (n,):
            raise DimensionMismatch(f"sampler returned shape {out.shape}, expected ({n},)")
        return out

    def __repr__(self):
        return f"CustomTwoTerm(mean={self.pce.m0}, std={self.pce.m1})"


# Operation-style wrappers.

def sample_standardized(model: NoiseModel, stream: Stream, n: int) -> np.ndarray:
    return model.sample_standardized(stream, n)


def sample_noise(model: NoiseModel, stream: Stream, n: int) -> np.ndarray:
    return model.sample_noise(stream, n)


def noise_to_config(model: NoiseModel) -> dict:
    if isinstance(model, GaussianNoise):
        return {"type": "gaussian", "sigma": model.sigma_m}
    if isinstance(model, GammaNoise):
        return {"type": "gamma", "alpha": model.alpha, "beta": model.beta}
    raise ConfigError(f"noise model {type(model).__name__} is not serializable")


def noise_from_config(cfg: dict) -> NoiseModel:
    if not isinstance(cfg, dict) or "type" not in cfg:
        raise ConfigError("noise config must be an object with a 'type' key")
    body = {key: value for key, value in cfg.items() if key != "type"}
    try:
        if cfg["type"] == "gaussian":
            return GaussianNoise(sigma_m=body.pop("sigma"), **body)
        if cfg["type"] == "gamma":
            return GammaNoise(**body)
    except (TypeError, KeyError, ValueError, NonPositiveStd) as exc:
        raise ConfigError(f"bad noise config: {exc}") from exc
    raise ConfigError(f"unknown noise type {cfg['type']!r}")
