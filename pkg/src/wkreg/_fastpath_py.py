"""Pure-Python/NumPy fallback for the compiled sampling/KDE core.

The gamma sampler consumes the generator's bit stream in exactly the same
(normal, uniform) order as the compiled loop, so both backends return
bit-identical draws from the same seed. The KDE evaluation is vectorized
and agrees with the compiled loop to floating-point roundoff (summation
order differs).
"""

from __future__ import annotations

import math

import numpy as np

_KDE_CHUNK = 65536


def standard_gamma(generator: np.random.Generator, alpha: float, n: int) -> np.ndarray:
    """Draw ``n`` standard gamma variates with shape ``alpha``."""
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if n < 0:
        raise ValueError("n must be non-negative")

    boost = alpha < 1.0
    shape = alpha + 1.0 if boost else alpha
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    inv_alpha = 1.0 / alpha

    normal = generator.standard_normal
    uniform = generator.random
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        while True:
            x = normal()
            v = 1.0 + c * x
            if v <= 0.0:
                continue
            v = v * v * v
            u = uniform()
            if u < 1.0 - 0.0331 * x * x * x * x:
                g = d * v
                break
            if math.log(u) < 0.5 * x * x + d * (1.0 - v + math.log(v)):
                g = d * v
                break
        if boost:
            g = g * uniform() ** inv_alpha
        out[i] = g
    return out


def kde_gaussian(samples: np.ndarray, support: np.ndarray, bandwidth: float) -> np.ndarray:
    """Evaluate a Gaussian kernel density estimate on ``support``."""
    if bandwidth <= 0.0:
        raise ValueError("bandwidth must be positive")
    samples = np.ascontiguousarray(samples, dtype=np.float64)
    support = np.ascontiguousarray(support, dtype=np.float64)
    density = np.zeros_like(support)
    inv_h = 1.0 / bandwidth
    for lo in range(0, samples.size, _KDE_CHUNK):
        chunk = samples[lo:lo + _KDE_CHUNK]
        t = (support[:, None] - chunk[None, :]) * inv_h
        density += np.exp(-0.5 * t * t).sum(axis=1)
    density /= samples.size * bandwidth * math.sqrt(2.0 * math.pi)
    return density
