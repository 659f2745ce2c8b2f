"""Walker/Vose alias method: O(1) draws from a fixed discrete distribution."""

from __future__ import annotations

import numpy as np


class AliasTable:
    """Alias table over non-negative weights.

    Construction walks the small/large stacks in ascending index order, so
    the table (and every seeded sampling sequence) is deterministic for a
    given weight vector.
    """

    def __init__(self, weights):
        w = np.ascontiguousarray(weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty 1-d array")
        if not np.isfinite(w).all() or (w < 0).any():
            raise ValueError("weights must be finite and non-negative")
        total = float(w.sum())
        if total <= 0:
            raise ValueError("weights must have positive total mass")
        n = w.size
        self.n = n
        self.probabilities = w / total

        scaled = self.probabilities * n
        prob = np.ones(n, dtype=np.float64)
        alias = np.arange(n, dtype=np.int32)
        small = [i for i in range(n) if scaled[i] < 1.0]
        large = [i for i in range(n) if scaled[i] >= 1.0]
        while small and large:
            s = small.pop()
            l = large.pop()
            prob[s] = scaled[s]
            alias[s] = l
            scaled[l] = (scaled[l] - 1.0) + scaled[s]
            (small if scaled[l] < 1.0 else large).append(l)
        # leftovers hold exactly probability 1/n each, up to rounding
        self.prob = prob
        self.alias = alias

    def sample(self, rng: np.random.Generator, size=None):
        """Draw ids; a scalar when size is None, else an int32 array."""
        bins = rng.integers(0, self.n, size=size)
        coins = rng.random(size=size)
        picked = np.where(coins < self.prob[bins], bins, self.alias[bins])
        if size is None:
            return int(picked)
        return picked.astype(np.int32)

    def implied_pmf(self) -> np.ndarray:
        """Reconstruct the distribution the table actually encodes."""
        spill = np.bincount(self.alias, weights=1.0 - self.prob, minlength=self.n)
        return (self.prob + spill) / self.n
