"""Counter-based random streams.

Everything stochastic in this package draws from a :class:`Stream`, a thin
wrapper around a Philox bit generator keyed by ``(seed, path)``. Philox is
counter-based, so streams with distinct keys are independent and a stream's
output depends only on its key, never on how many other streams exist or in
which order they are consumed. ``split`` derives child streams, which is how
Monte Carlo chunks and experiment stages get reproducible, parallel-safe
randomness from one user-facing seed.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def _fold_path(path: tuple[int, ...]) -> int:
    # splitmix64-style mixing; empty path folds to 0 so Stream(seed) is
    # distinct from every Stream(seed).split(i).
    h = 0
    for p in path:
        h = (h ^ ((int(p) + 1) & _MASK64)) & _MASK64
        h = (h + 0x9E3779B97F4A7C15) & _MASK64
        h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
        h = (h ^ (h >> 27)) * 0x94D049BB133111EB & _MASK64
        h = h ^ (h >> 31)
    return h


class Stream:
    """Seeded, splittable source of randomness.

    Parameters
    ----------
    seed : int
        64-bit unsigned seed. Identical seeds reproduce identical draws.
    path : tuple of int, optional
        Split lineage. Users normally leave this empty and call ``split``.
    """

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        if not isinstance(seed, (int, np.integer)):
            raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
        self.seed = int(seed) & _MASK64
        self.path = tuple(int(p) for p in path)
        key = np.array([self.seed, _fold_path(self.path)], dtype=np.uint64)
        self.generator = np.random.Generator(np.random.Philox(key=key))

    def split(self, *path: int) -> "Stream":
        """Return an independent child stream at ``self.path + path``."""
        return Stream(self.seed, self.path + path)

    def __repr__(self) -> str:
        return f"Stream(seed={self.seed}, path={self.path})"
