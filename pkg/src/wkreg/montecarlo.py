"""Monte Carlo propagation of chaos-expanded predictions.

Draws are organized in fixed-size outcome chunks; chunk c consumes the
child stream ``stream.split(c)``, so results are identical whether chunks
run serially or on a thread pool, and extending the sample count never
changes earlier draws. Pointwise draws, whole-path realizations, a Gaussian
KDE with Silverman bandwidth, and sample-moment helpers live here.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._backend import kde_gaussian
from .errors import DegenerateSample
from .kernels import as_points
from .noise import NoiseModel
from .regression import FittedModel, PcePrediction
from .streams import Stream

_CHUNK = 4096


@dataclass(frozen=True)
class RealizationSet:
    """Function realizations over a grid: draws[i, j] = path i at grid[j]."""

    grid: np.ndarray
    draws: np.ndarray
    seed: int


@dataclass(frozen=True)
class DensityEstimate:
    """KDE evaluated on ``support`` with the bandwidth that produced it."""

    support: np.ndarray
    density: np.ndarray
    bandwidth: float


@dataclass(frozen=True)
class Histogram:
    """Density-normalized histogram: len(edges) == len(density) + 1."""

    edges: np.ndarray
    density: np.ndarray


def _chunk_bounds(n: int):
    return [(c, lo, min(lo + _CHUNK, n)) for c, lo in enumerate(range(0, n, _CHUNK))]


def _standardized_matrix(noise: NoiseModel, stream: Stream, n: int, width: int,
                         workers: int = 1) -> np.ndarray:
    """(n, width) i.i.d. standardized draws, chunked over rows."""
    out = np.empty((n, width))

    def fill(job):
        c, lo, hi = job
        flat = noise.sample_standardized(stream.split(c), (hi - lo) * width)
        out[lo:hi] = flat.reshape(hi - lo, width)

    jobs = _chunk_bounds(n)
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, jobs))
    else:
        for job in jobs:
            fill(job)
    return out


def sample_at(pred: PcePrediction, noise: NoiseModel, stream: Stream, n: int,
              workers: int = 1) -> np.ndarray:
    """Draw ``n`` realizations of the predicted random variable.

    Every draw uses fresh i.i.d. standardized arguments, one per datum.
    """
    if n < 1:
        raise ValueError(f"need at least one draw, got {n}")
    z = _standardized_matrix(noise, stream, n, pred.loadings.shape[0], workers)
    return pred.mean + z @ pred.loadings


def sample_paths(model: FittedModel, grid, stream: Stream, n: int,
                 workers: int = 1) -> RealizationSet:
    """Draw ``n`` coherent function realizations over ``grid``.

    Each realization uses a single standardized vector for the whole grid,
    so it is a function of the input, not independent pointwise noise.
    """
    if n < 1:
        raise ValueError(f"need at least one path, got {n}")
    pts = as_points(grid)
    preds = [model.wk_predict(p) for p in pts]
    means = np.array([p.mean for p in preds])
    loadings = np.array([p.loadings for p in preds])  # (G, D)
    z = _standardized_matrix(model.noise, stream, n, model.data.size, workers)
    draws = means[None, :] + z @ loadings.T
    return RealizationSet(grid=pts, draws=draws, seed=stream.seed)


def silverman_bandwidth(samples: np.ndarray) -> float:
    """0.9 * min(std, IQR/1.34) * n^(-1/5); falls back to std if IQR is 0."""
    samples = np.asarray(samples, dtype=np.float64)
    std = float(samples.std(ddof=1))
    q75, q25 = np.percentile(samples, [75.0, 25.0])
    spread = float(q75 - q25) / 1.34
    scale = min(std, spread) if spread > 0.0 else std
    if scale <= 0.0:
        raise DegenerateSample("all samples are equal; no bandwidth exists")
    return 0.9 * scale * samples.size ** (-0.2)


def kde(samples, support=None) -> DensityEstimate:
    """Gaussian kernel density estimate with Silverman bandwidth.

    With ``support=None`` the estimate is evaluated on 512 points spanning
    the samples plus four bandwidths on each side, which makes the density
    integrate to one up to far-tail truncation.
    """
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.size < 2 or np.ptp(samples) == 0.0:
        raise DegenerateSample("need at least two distinct samples")
    h = silverman_bandwidth(samples)
    if support is None:
        support = np.linspace(samples.min() - 4.0 * h, samples.max() + 4.0 * h, 512)
    else:
        support = np.asarray(support, dtype=np.float64)
    density = kde_gaussian(np.ascontiguousarray(samples), np.ascontiguousarray(support), h)
    return DensityEstimate(support=support, density=density, bandwidth=h)


def histogram(samples) -> Histogram:
    """Density histogram with Freedman-Diaconis bin widths.

    Bin width is ``2 * IQR * n^(-1/3)``; when the IQR is zero the Sturges
    count is used instead. The density integrates to one exactly.
    """
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.size < 2 or np.ptp(samples) == 0.0:
        raise DegenerateSample("need at least two distinct samples")
    q75, q25 = np.percentile(samples, [75.0, 25.0])
    iqr = float(q75 - q25)
    if iqr > 0.0:
        width = 2.0 * iqr * samples.size ** (-1.0 / 3.0)
        n_bins = max(1, int(np.ceil(np.ptp(samples) / width)))
    else:
        n_bins = int(np.ceil(np.log2(samples.size))) + 1
    edges = np.linspace(samples.min(), samples.max(), n_bins + 1)
    density, _ = np.histogram(samples, bins=edges, density=True)
    return Histogram(edges=edges, density=density)


def empirical_moments(samples) -> tuple[float, float, float]:
    """Sample mean, unbiased variance, and moment-ratio skewness.

    Skewness is ``m3 / m2^(3/2)`` with plain central moments; it needs at
    least three samples and nonzero spread.
    """
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.size < 3:
        raise DegenerateSample(f"need at least 3 samples, got {samples.size}")
    mean = float(samples.mean())
    centered = samples - mean
    m2 = float((centered**2).mean())
    if m2 == 0.0:
        raise DegenerateSample("skewness is undefined for constant samples")
    m3 = float((centered**3).mean())
    variance = float(samples.var(ddof=1))
    return mean, variance, m3 / m2**1.5
