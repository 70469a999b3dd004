"""Kernel families plus Gram-matrix and cross-vector construction.

Points are real vectors; scalars are promoted to one-dimensional points, a
1-D array of length D is read as D scalar points. Every kernel evaluates
pairwise blocks through one vectorized ``pairwise`` method, from which
``eval``, ``gram`` and ``kvec`` derive.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, DimensionMismatch, WrongKernelVariant
from .linalg import SymMatrix


def as_point(x) -> np.ndarray:
    """Coerce a scalar or sequence to a finite 1-D float vector."""
    p = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if p.ndim != 1:
        raise DimensionMismatch(f"a point must be a scalar or 1-D vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    return p


def as_points(xs) -> np.ndarray:
    """Coerce a collection of points to a (D, n_x) float array."""
    a = np.asarray(xs, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    elif a.ndim != 2:
        raise DimensionMismatch(f"points must form a 1-D or 2-D array, got shape {a.shape}")
    if a.shape[0] == 0:
        raise DimensionMismatch("need at least one point")
    if not np.all(np.isfinite(a)):
        raise ValueError("point coordinates must be finite")
    return a


class Kernel(ABC):
    """Positive semi-definite kernel on real vectors."""

    @abstractmethod
    def pairwise(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Evaluate all pairs: (D, n) x (E, n) -> (D, E)."""

    def eval(self, x, x2) -> float:
        x = as_point(x)
        x2 = as_point(x2)
        if x.shape != x2.shape:
            raise DimensionMismatch(f"point dimensions differ: {x.shape[0]} vs {x2.shape[0]}")
        return float(self.pairwise(x[None, :], x2[None, :])[0, 0])

    def gram(self, xs) -> SymMatrix:
        pts = as_points(xs)
        return SymMatrix(self.pairwise(pts, pts))

    def kvec(self, xs, x) -> np.ndarray:
        pts = as_points(xs)
        p = as_point(x)
        if p.shape[0] != pts.shape[1]:
            raise DimensionMismatch(f"point dimension {p.shape[0]} does not match data dimension {pts.shape[1]}")
        return self.pairwise(pts, p[None, :])[:, 0]


def _check_dims(xs: np.ndarray, ys: np.ndarray) -> None:
    if xs.shape[1] != ys.shape[1]:
        raise DimensionMismatch(f"point dimensions differ: {xs.shape[1]} vs {ys.shape[1]}")


def _sqdist(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    diff = xs[:, None, :] - ys[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


@dataclass(frozen=True)
class SquaredExponential(Kernel):
    """k(x, x') = sigma_f^2 * exp(-||x - x'||^2 / (2 l^2))."""

    sigma_f: float
    lengthscale: float

    def __post_init__(self):
        _require_positive(sigma_f=self.sigma_f, lengthscale=self.lengthscale)

    def pairwise(self, xs, ys):
        _check_dims(xs, ys)
        return self.sigma_f**2 * np.exp(-_sqdist(xs, ys) / (2.0 * self.lengthscale**2))


@dataclass(frozen=True)
class Exponential(Kernel):
    """Ornstein-Uhlenbeck form: k(x, x') = sigma_f^2 * exp(-||x - x'|| / l)."""

    sigma_f: float
    lengthscale: float

    def __post_init__(self):
        _require_positive(sigma_f=self.sigma_f, lengthscale=self.lengthscale)

    def pairwise(self, xs, ys):
        _check_dims(xs, ys)
        return self.sigma_f**2 * np.exp(-np.sqrt(_sqdist(xs, ys)) / self.lengthscale)


@dataclass(frozen=True)
class Polynomial(Kernel):
    """k(x, x') = (scale * <x, x'> + offset)^degree."""

    degree: int
    offset: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        if not isinstance(self.degree, (int, np.integer)) or self.degree < 1:
            raise ValueError(f"degree must be a positive integer, got {self.degree}")
        if self.offset < 0.0:
            raise ValueError(f"offset must be non-negative, got {self.offset}")
        _require_positive(scale=self.scale)

    def pairwise(self, xs, ys):
        _check_dims(xs, ys)
        # scale the inner products, not one factor, to keep exact symmetry
        return (self.scale * (xs @ ys.T) + self.offset) ** self.degree


class FiniteFeature(Kernel):
    """Explicit feature-map kernel k(x, x') = w^2 * phi(x)^T phi(x').

    ``features`` are scalar functions of a point. The weight scale is folded
    into :meth:`feature_matrix`, whose columns are ``w * phi(x_i)``, so the
    Gram matrix equals ``feature_matrix().T @ feature_matrix()``.
    """

    def __init__(self, features: Sequence[Callable[[np.ndarray], float]], weight_scale: float = 1.0,
                 monomial_degree: int | None = None):
        if len(features) == 0:
            raise ValueError("need at least one feature function")
        _require_positive(weight_scale=weight_scale)
        self.features = tuple(features)
        self.weight_scale = float(weight_scale)
        self.monomial_degree = monomial_degree

    @classmethod
    def monomials(cls, degree: int, weight_scale: float = 1.0) -> "FiniteFeature":
        """Monomial features 1, x, ..., x^degree for scalar inputs."""
        if degree < 0:
            raise ValueError(f"degree must be non-negative, got {degree}")
        feats = [lambda p, k=k: float(p[0]) ** k for k in range(degree + 1)]
        return cls(feats, weight_scale, monomial_degree=degree)

    def raw_features(self, xs) -> np.ndarray:
        """Unscaled feature matrix, column i = phi(x_i), shape (n_phi, D)."""
        pts = as_points(xs)
        out = np.empty((len(self.features), pts.shape[0]), dtype=np.float64)
        for j, f in enumerate(self.features):
            for i in range(pts.shape[0]):
                out[j, i] = f(pts[i])
        return out

    def feature_matrix(self, xs) -> np.ndarray:
        """Scaled feature matrix with columns ``weight_scale * phi(x_i)``."""
        return self.weight_scale * self.raw_features(xs)

    def pairwise(self, xs, ys):
        _check_dims(as_points(xs), as_points(ys))
        return self.weight_scale**2 * (self.raw_features(xs).T @ self.raw_features(ys))

    def __repr__(self) -> str:
        return (f"FiniteFeature(n_features={len(self.features)}, "
                f"weight_scale={self.weight_scale})")


def _require_positive(**named: float) -> None:
    for name, value in named.items():
        if not (math.isfinite(value) and value > 0.0):
            raise ValueError(f"{name} must be positive and finite, got {value}")


# Operation-style wrappers around the kernel methods.

def eval_kernel(k: Kernel, x, x2) -> float:
    return k.eval(x, x2)


def gram(k: Kernel, xs) -> SymMatrix:
    return k.gram(xs)


def kvec(k: Kernel, xs, x) -> np.ndarray:
    return k.kvec(xs, x)


def feature_matrix(k: Kernel, xs) -> np.ndarray:
    if not isinstance(k, FiniteFeature):
        raise WrongKernelVariant(f"feature_matrix requires a finite-feature kernel, got {type(k).__name__}")
    return k.feature_matrix(xs)


# Config (de)serialization used by the CLI.

def kernel_to_config(k: Kernel) -> dict:
    if isinstance(k, SquaredExponential):
        return {"type": "squared_exponential", "sigma_f": k.sigma_f, "lengthscale": k.lengthscale}
    if isinstance(k, Exponential):
        return {"type": "exponential", "sigma_f": k.sigma_f, "lengthscale": k.lengthscale}
    if isinstance(k, Polynomial):
        return {"type": "polynomial", "degree": k.degree, "offset": k.offset, "scale": k.scale}
    if isinstance(k, FiniteFeature):
        if k.monomial_degree is None:
            raise ConfigError("only monomial finite-feature kernels are serializable")
        return {"type": "finite_feature", "degree": k.monomial_degree, "weight_scale": k.weight_scale}
    raise ConfigError(f"unknown kernel type {type(k).__name__}")


def kernel_from_config(cfg: dict) -> Kernel:
    if not isinstance(cfg, dict) or "type" not in cfg:
        raise ConfigError("kernel config must be an object with a 'type' key")
    body = {key: value for key, value in cfg.items() if key != "type"}
    try:
        if cfg["type"] == "squared_exponential":
            return SquaredExponential(**body)
        if cfg["type"] == "exponential":
            return Exponential(**body)
        if cfg["type"] == "polynomial":
            return Polynomial(**body)
        if cfg["type"] == "finite_feature":
            return FiniteFeature.monomials(**body)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad kernel config: {exc}") from exc
    raise ConfigError(f"unknown kernel type {cfg['type']!r}")
