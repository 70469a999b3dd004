"""Dense symmetric positive-definite solves shared by all regressors.

One Cholesky factorization of the regularized Gram matrix backs every
predictor: mean predictions need one triangular solve pair, the noise-only
variance needs the inverse applied twice. Factorization failures trigger an
escalating diagonal jitter before giving up.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve

from .errors import DimensionMismatch, NotPositiveDefinite

# Jitter is eps * (trace/dim + ridge), eps escalating tenfold per retry.
_JITTER_EPS_FIRST = 1e-10
_JITTER_EPS_LAST = 1e-6
_JITTER_RETRIES = 5


class SymMatrix:
    """Dense symmetric real matrix, symmetrized on construction.

    Entries are stored as the average of the input and its transpose, so
    ``entries[i, j] == entries[j, i]`` holds exactly. All entries must be
    finite.
    """

    __slots__ = ("entries",)

    def __init__(self, entries) -> None:
        a = np.array(entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        a = (a + a.T) / 2.0
        a.flags.writeable = False
        self.entries = a

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __repr__(self) -> str:
        return f"SymMatrix(dim={self.dim})"


@dataclass(frozen=True)
class CholFactor:
    """Lower Cholesky factor of ``A + ridge*I + jitter_applied*I``."""

    lower: np.ndarray
    jitter_applied: float

    @property
    def dim(self) -> int:
        return self.lower.shape[0]


def cholesky(a: SymMatrix, ridge: float = 0.0) -> CholFactor:
    """Factor ``a + ridge*I``, escalating jitter on failure.

    ``jitter_applied`` records the diagonal shift that was actually added on
    top of the ridge; it is zero whenever the unjittered factorization
    succeeds. Raises :class:`NotPositiveDefinite` once the jitter ladder is
    exhausted.
    """
    if ridge < 0.0:
        raise ValueError(f"ridge must be non-negative, got {ridge}")
    dim = a.dim
    shifted = a.entries.copy()
    shifted[np.diag_indices(dim)] += ridge

    try:
        lower = np.linalg.cholesky(shifted)
        return _freeze(lower, 0.0)
    except np.linalg.LinAlgError:
        pass

    scale = float(np.trace(a.entries)) / dim + ridge
    if scale <= 0.0:
        scale = 1.0  # zero matrix: fall back to an absolute shift
    eps = _JITTER_EPS_FIRST
    for _ in range(_JITTER_RETRIES):
        jitter = eps * scale
        try:
            lower = np.linalg.cholesky(shifted + jitter * np.eye(dim))
            return _freeze(lower, jitter)
        except np.linalg.LinAlgError:
            eps *= 10.0
    raise NotPositiveDefinite(
        f"factorization failed for dim={dim} even with jitter up to {_JITTER_EPS_LAST * scale:.3e}"
    )


def _freeze(lower: np.ndarray, jitter: float) -> CholFactor:
    lower.flags.writeable = False
    return CholFactor(lower=lower, jitter_applied=jitter)


def solve(f: CholFactor, b: np.ndarray) -> np.ndarray:
    """Solve ``(A + shift*I) v = b`` using the cached factor."""
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (f.dim,):
        raise DimensionMismatch(f"right-hand side has shape {b.shape}, factor dim is {f.dim}")
    return cho_solve((f.lower, True), b, check_finite=False)


def solve_twice(f: CholFactor, b: np.ndarray) -> np.ndarray:
    """Apply the inverse twice: ``solve(f, solve(f, b))``."""
    return solve(f, solve(f, b))
