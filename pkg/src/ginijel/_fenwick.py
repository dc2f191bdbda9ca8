"""Binary indexed (Fenwick) accumulator over integer ranks.

Keeps running counts and value sums so that, after inserting every
observation keyed by its y-rank, prefix queries answer "how many points
have smaller rank, and what do their x values sum to" in O(log m).
Used by the O(n log n) row-sum computation of the signed pairwise
kernel, where strict less-than / greater-than splits around tied ranks
are required.
"""

from __future__ import annotations

import numpy as np


class Fenwick:
    """Counts and sums indexed by ranks ``0 .. size-1``."""

    __slots__ = ("size", "_count", "_total")

    def __init__(self, size: int):
        self.size = size
        self._count = np.zeros(size + 1, dtype=np.int64)
        self._total = np.zeros(size + 1, dtype=np.float64)

    def add(self, rank: int, value: float) -> None:
        i = rank + 1
        count = self._count
        total = self._total
        while i <= self.size:
            count[i] += 1
            total[i] += value
            i += i & (-i)

    def prefix(self, rank: int) -> tuple[int, float]:
        """Count and value sum over ranks ``<= rank`` (-1 yields zeros)."""
        i = rank + 1
        c = 0
        t = 0.0
        count = self._count
        total = self._total
        while i > 0:
            c += count[i]
            t += total[i]
            i -= i & (-i)
        return c, t
