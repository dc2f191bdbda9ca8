"""Sampling designs, closed-form constants, and distribution helpers.

Three bivariate families drive the simulation studies: a normal with a
given 2x2 scatter, a multivariate t built from it (normal over an
independent chi scale), and a normal-lognormal pair in which the second
coordinate of the normal is exponentiated.  For the elliptical families
both Gini correlations equal the scatter correlation; for the
normal-lognormal pair the swapped-orientation value has the closed form
implemented by :func:`lognormal_gini_yx`, which is what makes exact
null/alternative values available to the studies.

Also here: the closed-form asymptotic variances of the Gini and Pearson
estimators under normality, a nested Monte Carlo estimate of the Gini
asymptotic variance for any sampleable family, thin wrappers for the
normal and chi-square distribution functions, and the counter-based
per-replication RNG streams the studies rely on for order-independent
reproducibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import special

from .errors import InvalidScatter, OutOfRange
from .kernels import BivariateSample

_FAMILIES = ("normal", "t", "normal_lognormal")


@dataclass(frozen=True)
class ScatterSpec:
    """Symmetric positive-definite 2x2 scatter matrix.

    Stored by its three free entries; ``rho`` is the implied correlation
    ``s12 / sqrt(s11 s22)``.
    """

    s11: float
    s12: float
    s22: float

    def __post_init__(self):
        if not (self.s11 > 0.0 and self.s22 > 0.0):
            raise InvalidScatter("diagonal entries must be positive")
        if not self.s11 * self.s22 - self.s12 ** 2 > 0.0:
            raise InvalidScatter("scatter matrix must be positive definite")

    @property
    def rho(self) -> float:
        return self.s12 / math.sqrt(self.s11 * self.s22)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.s11, self.s12], [self.s12, self.s22]])

    def cholesky(self) -> np.ndarray:
        return np.linalg.cholesky(self.matrix)


@dataclass(frozen=True)
class DistributionSpec:
    """A sampleable bivariate family: ``normal``, ``t`` (needs ``df``),
    or ``normal_lognormal`` (second coordinate exponentiated)."""

    family: str
    scatter: ScatterSpec
    df: Optional[int] = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise OutOfRange(
                f"family must be one of {_FAMILIES}, got {self.family!r}")
        if self.family == "t":
            if self.df is None or self.df < 1:
                raise OutOfRange("t family needs a positive integer df")


def replication_rng(base_seed: int, index: int) -> np.random.Generator:
    """Independent counter-based stream for one replication.

    Streams are keyed by ``(base_seed, index)``, so any subset of
    replications can be drawn in any order (or in parallel) and still
    produce identical values.
    """
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence((base_seed, index))))


def _as_rng(seed: Union[int, np.random.Generator]) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return replication_rng(int(seed), 0)


def _draw_xy(spec: DistributionSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    chol = spec.scatter.cholesky()
    z = rng.standard_normal((n, 2)) @ chol.T
    if spec.family == "t":
        scale = np.sqrt(rng.chisquare(spec.df, size=n) / spec.df)
        z /= scale[:, None]
    return z


def draw_sample(spec: DistributionSpec, n: int,
                seed: Union[int, np.random.Generator]) -> BivariateSample:
    """Draw n paired observations from the family of ``spec``."""
    if n < 1:
        raise OutOfRange("sample size must be positive")
    rng = _as_rng(seed)
    z = _draw_xy(spec, n, rng)
    if spec.family == "normal_lognormal":
        return BivariateSample(z[:, 0], np.exp(z[:, 1]))
    return BivariateSample(z[:, 0], z[:, 1])


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def gini_asymptotic_variance_normal(rho: float) -> float:
    """Asymptotic variance of the Gini correlation estimator, bivariate
    normal with correlation ``rho``.

    Vanishes at rho = +-1, equals pi/3 at independence, and is even in
    rho.
    """
    if not -1.0 <= rho <= 1.0:
        raise OutOfRange("rho must lie in [-1, 1]")
    return (math.pi / 3.0
            + (math.pi / 3.0 + 4.0 * math.sqrt(3.0)) * rho * rho
            - 4.0 * rho * math.asin(rho / 2.0)
            - 4.0 * rho * rho * math.sqrt(4.0 - rho * rho))


def pearson_asymptotic_variance_normal(rho: float) -> float:
    """Asymptotic variance of the Pearson estimator under normality."""
    if not -1.0 <= rho <= 1.0:
        raise OutOfRange("rho must lie in [-1, 1]")
    return (1.0 - rho * rho) ** 2


def lognormal_gini_yx(rho: float, log_sd: float) -> float:
    """Swapped-orientation Gini correlation of a normal-lognormal pair.

    For (X, log Y) bivariate normal with correlation ``rho`` and log-Y
    standard deviation ``log_sd``:

        gamma(Y, X) = (2 Phi(rho log_sd / sqrt 2) - 1)
                      / (2 Phi(log_sd / sqrt 2) - 1).

    The unswapped orientation keeps gamma(X, Y) = rho, so the difference
    of orientations has the closed form ``rho - lognormal_gini_yx(...)``.
    """
    if not -1.0 <= rho <= 1.0:
        raise OutOfRange("rho must lie in [-1, 1]")
    if not log_sd > 0.0:
        raise OutOfRange("log_sd must be positive")
    root2 = math.sqrt(2.0)
    return ((2.0 * normal_cdf(rho * log_sd / root2) - 1.0)
            / (2.0 * normal_cdf(log_sd / root2) - 1.0))


# ---------------------------------------------------------------------------
# distribution functions
# ---------------------------------------------------------------------------

def normal_cdf(x: float) -> float:
    """Standard normal distribution function."""
    return float(special.ndtr(x))


def normal_quantile(p: float) -> float:
    """Standard normal quantile; p strictly inside (0, 1)."""
    if not 0.0 < p < 1.0:
        raise OutOfRange("p must lie strictly inside (0, 1)")
    return float(special.ndtri(p))


def chisq_cdf(x: float, df: float) -> float:
    """Chi-square distribution function via the regularized incomplete
    gamma function."""
    if df <= 0:
        raise OutOfRange("df must be positive")
    if x <= 0.0:
        return 0.0
    return float(special.gammainc(df / 2.0, x / 2.0))


def chisq_quantile(p: float, df: float) -> float:
    """Chi-square quantile; p in [0, 1)."""
    if df <= 0:
        raise OutOfRange("df must be positive")
    if not 0.0 <= p < 1.0:
        raise OutOfRange("p must lie in [0, 1)")
    return float(2.0 * special.gammaincinv(df / 2.0, p))


# ---------------------------------------------------------------------------
# Monte Carlo asymptotic variance
# ---------------------------------------------------------------------------

def gini_asymptotic_variance_mc(spec: DistributionSpec, orientation: str = "xy",
                                n_outer: int = 10_000, n_inner: int = 1_000,
                                seed: int = 0) -> float:
    """Nested Monte Carlo estimate of the Gini asymptotic variance.

    Draws an outer sample of evaluation points and an independent inner
    sample for the conditional expectations g1(z) = E k_cov(z, Z') and
    g2(z) = E k_scale(z, Z'); assembles the delta-method variance of the
    kernel-mean ratio from their first and second moments.  Fixed seed
    gives a fixed value.
    """
    if orientation not in ("xy", "yx"):
        raise ValueError(f"orientation must be 'xy' or 'yx', got {orientation!r}")
    rng = replication_rng(seed, 0)
    outer = draw_sample(spec, n_outer, rng)
    inner = draw_sample(spec, n_inner, rng)
    if orientation == "yx":
        outer, inner = outer.swap(), inner.swap()

    xi, yi = inner.x, inner.y
    g1 = np.empty(n_outer)
    g2 = np.empty(n_outer)
    chunk = max(1, 2_000_000 // n_inner)
    for start in range(0, n_outer, chunk):
        xo = outer.x[start:start + chunk, None]
        yo = outer.y[start:start + chunk, None]
        dx = xo - xi[None, :]
        g1[start:start + chunk] = 0.25 * np.mean(dx * np.sign(yo - yi[None, :]), axis=1)
        g2[start:start + chunk] = 0.25 * np.mean(np.abs(dx), axis=1)

    t1 = g1.mean()
    t2 = g2.mean()
    z1 = np.mean(g1 * g1) - t1 * t1
    z2 = np.mean(g2 * g2) - t2 * t2
    z3 = np.mean(g1 * g2) - t1 * t2
    return float(4.0 * z1 / t2 ** 2
                 + 4.0 * t1 * t1 * z2 / t2 ** 4
                 - 8.0 * t1 * z3 / t2 ** 3)
