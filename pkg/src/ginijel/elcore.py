"""Empirical likelihood solvers for mean-zero constraint values.

Given constraint values v_1..v_n (jackknife pseudo-values upstream), the
empirical log-likelihood ratio at mean zero is

    -2 log R = 2 sum_i log(1 + lam' v_i),

with the multiplier lam solving ``mean(v_i / (1 + lam' v_i)) = 0``.  The
scalar problem has a unique root inside the feasibility interval and is
solved by a bracketed Newton iteration; the two-dimensional problem is
the strictly convex dual ``min_lam sum_i -log(1 + lam' v_i)``, solved by
damped Newton with feasibility line search.

Zero outside the convex hull of the values means no distribution
supported on the data satisfies the constraint: the solvers raise
:class:`HullViolation`, and the ``neg2_log_ratio*`` wrappers translate
that into a +inf statistic, the natural value during interval inversion.

All-zero values satisfy the constraint with uniform weights; by
convention the statistic is 0 there.

The adjusted variant appends one synthetic value opposing the sum of the
others, scaled by ``max(1, log(n)/2)``; the augmented problem is always
feasible and its statistic never exceeds the unadjusted one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import HullViolation, SingularCovariance

_TOL = 1e-10
_MAX_NEWTON = 300
_MAX_GRADIENT = 50


@dataclass(frozen=True)
class ELSolution:
    """Result of an empirical-likelihood optimization.

    ``lam`` is the Lagrange multiplier (float for scalar constraints,
    length-2 array for joint ones), ``neg2_log_r`` the statistic.
    """

    lam: Union[float, np.ndarray]
    neg2_log_r: float
    iterations: int
    converged: bool


def solve_scalar(values) -> ELSolution:
    """Solve the scalar estimating equation by safeguarded Newton.

    The equation ``f(lam) = mean(v / (1 + lam v)) = 0`` is strictly
    decreasing on the feasibility interval ``(-1/max v, -1/min v)`` and
    diverges to +-inf at its ends, so the root is unique; Newton steps
    are clipped into the current sign-change bracket.  Terminates when
    ``|f| < 1e-10``.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        raise HullViolation("no constraint values")
    vmin, vmax = float(v.min()), float(v.max())
    if vmin == 0.0 and vmax == 0.0:
        return ELSolution(0.0, 0.0, 0, True)
    if not (vmin < 0.0 < vmax):
        raise HullViolation("zero is outside the span of the values")

    lo = -1.0 / vmax
    hi = -1.0 / vmin
    lam = 0.0
    f = float(np.mean(v))
    iterations = 0
    for iterations in range(1, _MAX_NEWTON + 1):
        if abs(f) < _TOL:
            break
        if f > 0.0:      # f decreasing: root lies to the right
            lo = lam
        else:
            hi = lam
        denom = 1.0 + lam * v
        fprime = -float(np.mean((v / denom) ** 2))
        step = -f / fprime if fprime < 0.0 else 0.0
        cand = lam + step
        if not (lo < cand < hi):
            cand = 0.5 * (lo + hi)
        if cand == lam:   # bracket exhausted at float resolution
            break
        lam = cand
        f = float(np.mean(v / (1.0 + lam * v)))
    neg2 = 2.0 * float(np.sum(np.log1p(lam * v)))
    return ELSolution(lam, neg2, iterations, abs(f) < _TOL)


def neg2_log_ratio(values) -> float:
    """Scalar -2 log R, with +inf standing in for hull violations."""
    try:
        return solve_scalar(values).neg2_log_r
    except HullViolation:
        return math.inf


def _check_hull_2d(rows: np.ndarray) -> None:
    # zero is strictly inside the convex hull of the rows iff their
    # direction angles leave no gap of pi or more
    nonzero = rows[np.any(rows != 0.0, axis=1)]
    if nonzero.shape[0] == 0:
        return
    angles = np.sort(np.arctan2(nonzero[:, 1], nonzero[:, 0]))
    gaps = np.diff(angles)
    wrap = angles[0] + 2.0 * math.pi - angles[-1]
    if max(gaps.max(initial=0.0), wrap) >= math.pi - 1e-12:
        raise HullViolation("zero is not interior to the hull of the rows")


def solve_vector(rows) -> ELSolution:
    """Solve the two-dimensional dual by damped Newton.

    Rows must have a nonsingular sample covariance
    (:class:`SingularCovariance` otherwise) and zero must lie strictly
    inside their convex hull (:class:`HullViolation` otherwise; checked
    exactly by an angular-gap scan).  Falls back to plain gradient
    descent if a Newton step cannot make progress.  Converges when the
    mean-residual norm drops below 1e-10.
    """
    v = np.asarray(rows, dtype=np.float64)
    if v.ndim != 2 or v.shape[1] != 2:
        raise ValueError("expected an (n, 2) array of constraint rows")
    n = v.shape[0]
    if n == 0:
        raise HullViolation("no constraint rows")
    if not v.any():
        return ELSolution(np.zeros(2), 0.0, 0, True)
    centered = v - v.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] <= 1e-12 * sv[0]:
        raise SingularCovariance("constraint rows are affinely degenerate")
    _check_hull_2d(v)

    lam = np.zeros(2)
    denom = np.ones(n)

    def residual(d):
        return (v / d[:, None]).mean(axis=0)

    f = residual(denom)
    iterations = 0
    for iterations in range(1, 101):
        if np.linalg.norm(f) < _TOL:
            break
        w = v / denom[:, None]
        hess = (w.T @ w) / n
        try:
            step = np.linalg.solve(hess, f)
        except np.linalg.LinAlgError:
            step = f
        t = 1.0
        obj = -np.sum(np.log(denom))
        for _ in range(60):
            cand = lam + t * step
            denom_c = 1.0 + v @ cand
            if denom_c.min() > 1e-12:
                obj_c = -np.sum(np.log(denom_c))
                if obj_c < obj + 1e-14:
                    break
            t *= 0.5
        else:
            # no usable Newton direction: short gradient-descent rescue
            for _ in range(_MAX_GRADIENT):
                g = residual(denom)
                t = 1.0
                while t > 1e-18:
                    cand = lam + t * g
                    denom_c = 1.0 + v @ cand
                    if denom_c.min() > 1e-12 and -np.sum(np.log(denom_c)) < -np.sum(np.log(denom)):
                        lam, denom = cand, denom_c
                        break
                    t *= 0.5
                else:
                    break
            f = residual(denom)
            break
        lam = cand
        denom = denom_c
        f = residual(denom)
    neg2 = 2.0 * float(np.sum(np.log(denom)))
    return ELSolution(lam, neg2, iterations, float(np.linalg.norm(f)) < _TOL)


def neg2_log_ratio_vector(rows) -> float:
    """Joint -2 log R, with +inf standing in for hull violations."""
    try:
        return solve_vector(rows).neg2_log_r
    except HullViolation:
        return math.inf


def adjustment_level(n: int) -> float:
    """Adjustment magnitude ``max(1, log(n)/2)`` for n original values."""
    return max(1.0, math.log(n) / 2.0)


def adjust_values(values) -> np.ndarray:
    """Append the balancing pseudo-value ``-(a_n / n) * sum(values)``.

    Works on scalar value vectors and on (n, 2) row arrays; the appended
    entry opposes the mean, which keeps zero inside the hull and makes
    the adjusted statistic finite and no larger than the plain one.
    """
    v = np.asarray(values, dtype=np.float64)
    n = v.shape[0]
    a_n = adjustment_level(n)
    tail = -(a_n / n) * v.sum(axis=0, keepdims=True)
    if v.ndim == 1:
        return np.concatenate((v, tail.ravel()))
    return np.vstack((v, tail))


def el_weights(values, lam) -> np.ndarray:
    """Implied observation probabilities ``1 / (n (1 + lam' v_i))``.

    At the solution they are positive, sum to one, and satisfy the
    mean-zero constraint; ``-2 sum log(n w_i)`` recovers the statistic.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim == 1:
        denom = 1.0 + lam * v
    else:
        denom = 1.0 + v @ np.asarray(lam, dtype=np.float64)
    return 1.0 / (v.shape[0] * denom)
