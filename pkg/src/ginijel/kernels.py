"""Pairwise kernels for Gini-correlation estimation, and the sample type.

The Gini correlation of a bivariate pair (X, Y) is the ratio of two
pairwise expectations,

    gamma(X, Y) = E k_cov / E k_scale,

where ``k_cov`` is a quarter of the x-difference signed by the y-order
and ``k_scale`` is a quarter of the absolute x-difference (half the
usual Gini mean difference kernel).  Everything downstream - point
estimates, jackknife pseudo-values, empirical-likelihood statistics -
is built from the kernels in this module.

Observations are plain ``(x, y)`` pairs; samples are held as a pair of
float64 arrays by :class:`BivariateSample`.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import OutOfRange

Obs = Sequence[float]


def _sign(t: float) -> float:
    if t > 0:
        return 1.0
    if t < 0:
        return -1.0
    return 0.0


def gini_cov_kernel(a: Obs, b: Obs) -> float:
    """Covariance-type kernel: quarter x-difference signed by the y order.

    Symmetric in its arguments; zero when the y values tie.  Its mean over
    all pairs of a sample estimates cov(X, G(Y)) up to the constant fixed
    by the scale kernel, so the ratio of the two kernel means is the Gini
    correlation.
    """
    x1, y1 = a
    x2, y2 = b
    return 0.25 * (x1 - x2) * _sign(y1 - y2)


def gini_scale_kernel(a: Obs, b: Obs) -> float:
    """Scale kernel: quarter absolute x-difference (half the Gini mean
    difference kernel).  Nonnegative; zero only for tied x values."""
    x1, _ = a
    x2, _ = b
    return 0.25 * abs(x1 - x2)


def estimating_kernel(a: Obs, b: Obs, gamma: float) -> float:
    """Kernel of the estimating function scale * gamma - cov.

    Its pairwise mean is zero exactly when gamma equals the sample Gini
    correlation; it is affine in gamma with slope ``gini_scale_kernel``.
    """
    return gini_scale_kernel(a, b) * gamma - gini_cov_kernel(a, b)


def equality_kernel(a: Obs, b: Obs, delta: float, gamma_yx: float) -> tuple[float, float]:
    """Two-dimensional kernel for the within-sample equality problem.

    The first coordinate is the estimating kernel at ``delta + gamma_yx``
    in the (x, y) orientation; the second is the estimating kernel at
    ``gamma_yx`` with the coordinate roles swapped.  Both coordinates have
    zero mean when ``delta`` is the difference of the two Gini
    correlations and ``gamma_yx`` is the swapped-orientation value.
    """
    first = estimating_kernel(a, b, delta + gamma_yx)
    sa = (a[1], a[0])
    sb = (b[1], b[0])
    second = estimating_kernel(sa, sb, gamma_yx)
    return first, second


def two_sample_kernel(pair1: tuple[Obs, Obs], pair2: tuple[Obs, Obs],
                      delta1: float, delta2: float) -> tuple[float, float]:
    """Two-dimensional kernel for comparing two independent samples.

    ``pair1`` holds two observations from the first sample, ``pair2`` two
    from the second.  Writing k1/k2 for the cov/scale kernels of a pair
    and primes for the swapped orientation, the coordinates are

        k2(1) k2(2) delta1 - k1(1) k2(2) + k2(1) k1(2)
        k2'(1) k2'(2) delta2 - k1'(1) k2'(2) + k2'(1) k1'(2)

    whose means vanish exactly at the true differences of the Gini
    correlations in the two orientations.
    """
    a1, a2 = pair1
    b1, b2 = pair2
    c1 = gini_cov_kernel(a1, a2)
    s1 = gini_scale_kernel(a1, a2)
    c2 = gini_cov_kernel(b1, b2)
    s2 = gini_scale_kernel(b1, b2)
    first = s1 * s2 * delta1 - c1 * s2 + s1 * c2

    sa1, sa2 = (a1[1], a1[0]), (a2[1], a2[0])
    sb1, sb2 = (b1[1], b1[0]), (b2[1], b2[0])
    c1p = gini_cov_kernel(sa1, sa2)
    s1p = gini_scale_kernel(sa1, sa2)
    c2p = gini_cov_kernel(sb1, sb2)
    s2p = gini_scale_kernel(sb1, sb2)
    second = s1p * s2p * delta2 - c1p * s2p + s1p * c2p
    return first, second


class BivariateSample:
    """Paired observations held as two float64 arrays of equal length.

    Entries must be finite; the pairing is positional.  The object is
    immutable in intent: mutate the arrays at your own risk.
    """

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if x.ndim != 1 or y.ndim != 1:
            raise OutOfRange("sample coordinates must be one-dimensional")
        if x.shape != y.shape:
            raise OutOfRange(
                f"coordinate lengths differ: {x.shape[0]} vs {y.shape[0]}")
        if x.shape[0] == 0:
            raise OutOfRange("sample is empty")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise OutOfRange("sample contains non-finite entries")
        self.x = x
        self.y = y

    @classmethod
    def from_pairs(cls, pairs: Iterable[Obs]) -> "BivariateSample":
        arr = np.asarray(list(pairs), dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise OutOfRange("expected an iterable of (x, y) pairs")
        return cls(arr[:, 0], arr[:, 1])

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def swap(self) -> "BivariateSample":
        """The same observations with the coordinate roles exchanged."""
        return BivariateSample(self.y, self.x)

    def take(self, indices) -> "BivariateSample":
        return BivariateSample(self.x[indices], self.y[indices])

    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.y.tolist()))

    @property
    def has_y_ties(self) -> bool:
        return np.unique(self.y).size < self.n

    @property
    def y_tie_count(self) -> int:
        """Number of observations in excess of the distinct y values."""
        return self.n - int(np.unique(self.y).size)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"BivariateSample(n={self.n})"
