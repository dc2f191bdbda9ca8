import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ginijel.errors import OutOfRange
from ginijel.kernels import (
    BivariateSample,
    equality_kernel,
    estimating_kernel,
    gini_cov_kernel,
    gini_scale_kernel,
    two_sample_kernel,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
# exact multiples of 2^-10 stay exact under shifts up to 1e6, so sign
# comparisons cannot be flipped by floating-point absorption
lattice = st.integers(min_value=-(2 ** 30), max_value=2 ** 30).map(lambda k: k / 1024.0)
point = st.tuples(lattice, lattice)


# ---------------------------------------------------------------------------
# frozen scalar kernel values
# ---------------------------------------------------------------------------

def test_gini_cov_kernel_frozen():
    assert gini_cov_kernel((1, 1), (2, 2)) == pytest.approx(0.25, abs=1e-15)
    assert gini_cov_kernel((1, 1), (2, 1)) == 0.0          # tied y -> zero weight
    assert gini_cov_kernel((1, 3), (3, 1)) == pytest.approx(-0.5, abs=1e-15)


def test_gini_scale_kernel_frozen():
    assert gini_scale_kernel((1, 1), (2, 2)) == pytest.approx(0.25, abs=1e-15)
    assert gini_scale_kernel((1, 1), (1, 5)) == 0.0
    assert gini_scale_kernel((1, 3), (4, 1)) == pytest.approx(0.75, abs=1e-15)


def test_estimating_kernel_frozen():
    assert estimating_kernel((1, 1), (2, 2), 1.0) == pytest.approx(0.0, abs=1e-15)
    assert estimating_kernel((1, 1), (2, 2), 0.0) == pytest.approx(-0.25, abs=1e-15)
    assert estimating_kernel((1, 3), (3, 1), -1.0) == pytest.approx(0.0, abs=1e-15)


def test_equality_kernel_frozen():
    # both coordinates evaluated by hand
    assert equality_kernel((1, 1), (3, 2), 0.5, 0.0) == pytest.approx((-0.25, -0.25), abs=1e-15)
    # coincident observations kill every pairwise kernel
    assert equality_kernel((1, 1), (1, 1), 0.3, -0.7) == (0.0, 0.0)


def test_two_sample_kernel_frozen():
    a = ((1, 1), (2, 2))
    b = ((1, 2), (2, 1))
    # hand evaluation; for these single pairs the second coordinate equals
    # 0.0625 * (delta2 - 2), the first 0.0625 * (delta1 - 2)
    assert two_sample_kernel(a, b, 0.0, 0.0) == pytest.approx((-0.125, -0.125), abs=1e-15)
    first, _ = two_sample_kernel(a, b, 1.0, 0.0)
    assert first == pytest.approx(-0.0625, abs=1e-15)
    # degenerate first pair zeroes both coordinates
    assert two_sample_kernel(((1, 1), (1, 1)), b, 0.4, -0.2) == (0.0, 0.0)


# ---------------------------------------------------------------------------
# kernel properties
# ---------------------------------------------------------------------------

@given(point, point)
def test_kernels_symmetric_in_arguments(a, b):
    assert gini_cov_kernel(a, b) == gini_cov_kernel(b, a)
    assert gini_scale_kernel(a, b) == gini_scale_kernel(b, a)


@given(point, point)
def test_cov_kernel_bounded_by_scale_kernel(a, b):
    assert abs(gini_cov_kernel(a, b)) <= gini_scale_kernel(a, b) + 1e-15


@given(point, point, finite, finite)
def test_estimating_kernel_affine_in_gamma(a, b, g1, g2):
    # slope of the estimating kernel in gamma is the scale kernel
    k1 = estimating_kernel(a, b, g1)
    k2 = estimating_kernel(a, b, g2)
    assert k2 - k1 == pytest.approx((g2 - g1) * gini_scale_kernel(a, b), rel=1e-9, abs=1e-9)


@given(point, point, st.floats(-2, 2), st.floats(-1, 1))
def test_equality_kernel_matches_estimating_kernels(a, b, delta, gamma_yx):
    g1, g2 = equality_kernel(a, b, delta, gamma_yx)
    assert g1 == pytest.approx(estimating_kernel(a, b, delta + gamma_yx), abs=1e-12)
    sa, sb = (a[1], a[0]), (b[1], b[0])
    assert g2 == pytest.approx(estimating_kernel(sa, sb, gamma_yx), abs=1e-12)


@given(point, point, finite)
def test_scale_and_shift_invariance(a, b, shift):
    # shifting x and y leaves both kernels unchanged
    a2 = (a[0] + shift, a[1] + shift)
    b2 = (b[0] + shift, b[1] + shift)
    assert gini_cov_kernel(a2, b2) == pytest.approx(gini_cov_kernel(a, b), rel=1e-9, abs=1e-9)
    assert gini_scale_kernel(a2, b2) == pytest.approx(gini_scale_kernel(a, b), rel=1e-9, abs=1e-9)


@given(point, point, st.floats(min_value=1e-3, max_value=1e3))
def test_positive_x_scaling_is_linear(a, b, c):
    a2, b2 = (c * a[0], a[1]), (c * b[0], b[1])
    assert gini_cov_kernel(a2, b2) == pytest.approx(c * gini_cov_kernel(a, b), rel=1e-9, abs=1e-9)
    assert gini_scale_kernel(a2, b2) == pytest.approx(c * gini_scale_kernel(a, b), rel=1e-9, abs=1e-9)


@given(point, point)
def test_monotone_y_transform_invariance(a, b):
    # cov kernel depends on y only through the ordering
    f = lambda t: t ** 3 + 2.0 * t
    a2, b2 = (a[0], f(a[1])), (b[0], f(b[1]))
    assert gini_cov_kernel(a2, b2) == pytest.approx(gini_cov_kernel(a, b), abs=1e-12)


# ---------------------------------------------------------------------------
# the sample container
# ---------------------------------------------------------------------------

def test_sample_basic():
    s = BivariateSample([1, 2, 3], [4, 5, 6])
    assert s.n == 3
    assert s.x.dtype == np.float64
    np.testing.assert_array_equal(s.swap().x, s.y)
    np.testing.assert_array_equal(s.swap().y, s.x)


def test_sample_validation():
    with pytest.raises(OutOfRange):
        BivariateSample([1, 2], [1])
    with pytest.raises(OutOfRange):
        BivariateSample([1, np.nan], [1, 2])
    with pytest.raises(OutOfRange):
        BivariateSample([1, np.inf], [1, 2])
    with pytest.raises(OutOfRange):
        BivariateSample([], [])


def test_sample_tie_diagnostics():
    s = BivariateSample([1, 2, 3, 4], [5, 5, 6, 7])
    assert s.has_y_ties
    assert s.y_tie_count == 1
    t = BivariateSample([1, 2], [3, 4])
    assert not t.has_y_ties
    assert t.y_tie_count == 0


def test_sample_from_pairs_roundtrip():
    pairs = [(1, 2), (3, 4), (5, 6)]
    s = BivariateSample.from_pairs(pairs)
    assert s.pairs() == [(1.0, 2.0), (3.0, 4.0), (5.0, 6.0)]
