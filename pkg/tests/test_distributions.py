import math

import numpy as np
import pytest

from ginijel.errors import InvalidScatter, OutOfRange
from ginijel.distributions import (
    DistributionSpec,
    ScatterSpec,
    chisq_cdf,
    chisq_quantile,
    draw_sample,
    gini_asymptotic_variance_mc,
    gini_asymptotic_variance_normal,
    lognormal_gini_yx,
    normal_cdf,
    normal_quantile,
    pearson_asymptotic_variance_normal,
    replication_rng,
)
from ginijel.jackknife import loo_gamma, variance_from_loo
from ginijel.ustat import gini_gamma, pearson_r

V_HALF = 0.5991955631767586     # asymptotic gini variance at rho = 0.5, normal


# ---------------------------------------------------------------------------
# scatter and spec validation
# ---------------------------------------------------------------------------

def test_scatter_basics():
    sc = ScatterSpec(1.0, 1.0, 4.0)
    assert sc.rho == pytest.approx(0.5, abs=1e-15)
    np.testing.assert_allclose(sc.matrix, [[1.0, 1.0], [1.0, 4.0]])


def test_scatter_validation():
    with pytest.raises(InvalidScatter):
        ScatterSpec(1.0, 2.0, 1.0)          # |off-diagonal| too large
    with pytest.raises(InvalidScatter):
        ScatterSpec(-1.0, 0.0, 1.0)
    with pytest.raises(InvalidScatter):
        ScatterSpec(1.0, 1.0, 1.0)          # singular (rho = 1)


def test_spec_validation():
    sc = ScatterSpec(1.0, 0.5, 1.0)
    with pytest.raises(OutOfRange):
        DistributionSpec("gaussian", sc)
    with pytest.raises(OutOfRange):
        DistributionSpec("t", sc)           # df missing
    spec = DistributionSpec("t", sc, df=5)
    assert spec.df == 5


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def test_sampler_deterministic():
    spec = DistributionSpec("normal", ScatterSpec(1.0, 1.0, 4.0))
    a = draw_sample(spec, 100, 42)
    b = draw_sample(spec, 100, 42)
    np.testing.assert_array_equal(a.x, b.x)
    np.testing.assert_array_equal(a.y, b.y)
    c = draw_sample(spec, 100, 43)
    assert not np.array_equal(a.x, c.x)


def test_replication_streams_are_distinct_and_stable():
    r1 = replication_rng(7, 0).standard_normal(4)
    r2 = replication_rng(7, 1).standard_normal(4)
    r1_again = replication_rng(7, 0).standard_normal(4)
    np.testing.assert_array_equal(r1, r1_again)
    assert not np.array_equal(r1, r2)


def test_normal_sampler_moments():
    spec = DistributionSpec("normal", ScatterSpec(1.0, 1.0, 4.0))
    s = draw_sample(spec, 1_000_000, 1)
    assert s.x.var() == pytest.approx(1.0, rel=0.01)
    assert s.y.var() == pytest.approx(4.0, rel=0.01)
    assert pearson_r(s) == pytest.approx(0.5, abs=0.005)


def test_t_sampler_moments():
    spec = DistributionSpec("t", ScatterSpec(1.0, 1.0, 4.0), df=5)
    s = draw_sample(spec, 1_000_000, 2)
    # marginal variance of a scatter-Sigma multivariate t is Sigma_ii df/(df-2)
    assert s.x.var() == pytest.approx(5 / 3, rel=0.05)
    assert s.y.var() == pytest.approx(4 * 5 / 3, rel=0.05)


def test_lognormal_sampler_transform():
    spec = DistributionSpec("normal_lognormal", ScatterSpec(4.0, 1.0, 1.0))
    s = draw_sample(spec, 400_000, 3)
    assert np.all(s.y > 0)
    logs = np.log(s.y)
    assert logs.var() == pytest.approx(1.0, rel=0.02)
    r = np.corrcoef(s.x, logs)[0, 1]
    assert r == pytest.approx(0.5, abs=0.01)


def test_elliptical_gini_equals_rho():
    spec = DistributionSpec("t", ScatterSpec(1.0, 1.0, 4.0), df=5)
    s = draw_sample(spec, 200_000, 4)
    assert gini_gamma(s) == pytest.approx(0.5, abs=0.012)
    assert gini_gamma(s, "yx") == pytest.approx(0.5, abs=0.012)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def test_gini_variance_normal_frozen():
    assert gini_asymptotic_variance_normal(0.0) == pytest.approx(math.pi / 3, abs=1e-12)
    assert gini_asymptotic_variance_normal(1.0) == pytest.approx(0.0, abs=1e-12)
    assert gini_asymptotic_variance_normal(-1.0) == pytest.approx(0.0, abs=1e-12)
    assert gini_asymptotic_variance_normal(0.5) == pytest.approx(0.599196, abs=1e-6)
    assert gini_asymptotic_variance_normal(0.5) == pytest.approx(V_HALF, abs=1e-12)


def test_gini_variance_normal_shape():
    grid = np.linspace(-1, 1, 41)
    vals = [gini_asymptotic_variance_normal(r) for r in grid]
    assert all(v >= -1e-12 for v in vals)
    for r in grid:                              # even function
        assert gini_asymptotic_variance_normal(-r) == pytest.approx(
            gini_asymptotic_variance_normal(r), abs=1e-12)
    with pytest.raises(OutOfRange):
        gini_asymptotic_variance_normal(1.2)


def test_pearson_variance_normal():
    assert pearson_asymptotic_variance_normal(0.5) == pytest.approx(0.5625, abs=1e-12)
    assert pearson_asymptotic_variance_normal(0.0) == 1.0
    assert pearson_asymptotic_variance_normal(1.0) == 0.0


def test_lognormal_gini_yx_frozen():
    assert lognormal_gini_yx(0.0, 1.0) == 0.0
    assert lognormal_gini_yx(1.0, 2.0) == pytest.approx(1.0, abs=1e-12)
    # reference-table alternative values: rho - gamma_yx at log-scale 1
    for rho, label in ((0.1, -0.008), (0.5, -0.031), (0.9, -0.014)):
        delta0 = rho - lognormal_gini_yx(rho, 1.0)
        assert delta0 == pytest.approx(label, abs=5e-4)
    # and at log-scale 4 (two-sample design)
    for rho, label in ((0.1, -0.1237), (0.5, -0.3467), (0.9, -0.0937)):
        d20 = rho - lognormal_gini_yx(rho, 4.0)
        assert d20 == pytest.approx(label, abs=5e-5)
    with pytest.raises(OutOfRange):
        lognormal_gini_yx(0.5, -1.0)


# ---------------------------------------------------------------------------
# distribution helpers
# ---------------------------------------------------------------------------

def test_normal_cdf_quantile_frozen():
    assert normal_cdf(0.0) == pytest.approx(0.5, abs=1e-15)
    assert normal_cdf(0.70711) == pytest.approx(0.760250, abs=1e-6)
    assert normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)
    for p in (0.001, 0.3, 0.5, 0.77, 0.999):
        assert normal_cdf(normal_quantile(p)) == pytest.approx(p, abs=1e-12)
    with pytest.raises(OutOfRange):
        normal_quantile(0.0)
    with pytest.raises(OutOfRange):
        normal_quantile(1.0)


def test_chisq_frozen():
    assert chisq_quantile(0.95, 1) == pytest.approx(3.841459, abs=1e-6)
    assert chisq_quantile(0.90, 2) == pytest.approx(4.605170, abs=1e-6)
    for p in (0.05, 0.5, 0.9, 0.99):
        for df in (1, 2, 5):
            assert chisq_cdf(chisq_quantile(p, df), df) == pytest.approx(p, abs=1e-10)
    assert chisq_cdf(-1.0, 1) == 0.0
    with pytest.raises(OutOfRange):
        chisq_quantile(1.5, 1)
    with pytest.raises(OutOfRange):
        chisq_quantile(0.5, 0)


# ---------------------------------------------------------------------------
# Monte Carlo asymptotic variance
# ---------------------------------------------------------------------------

def test_mc_variance_matches_closed_form():
    spec = DistributionSpec("normal", ScatterSpec(1.0, 1.0, 4.0))
    v = gini_asymptotic_variance_mc(spec, n_outer=10_000, n_inner=1_000, seed=11)
    assert v == pytest.approx(V_HALF, rel=0.05)
    again = gini_asymptotic_variance_mc(spec, n_outer=10_000, n_inner=1_000, seed=11)
    assert v == again                       # fixed seed, fixed value


def test_mc_variance_yx_orientation_runs():
    spec = DistributionSpec("normal_lognormal", ScatterSpec(4.0, 1.0, 1.0))
    v = gini_asymptotic_variance_mc(spec, orientation="yx",
                                    n_outer=4000, n_inner=400, seed=5)
    assert 0.0 < v < 10.0


# ---------------------------------------------------------------------------
# jackknife variance consistency (needs the sampler, hence lives here)
# ---------------------------------------------------------------------------

def test_jackknife_variance_tracks_asymptotic_variance():
    spec = DistributionSpec("normal", ScatterSpec(1.0, 1.0, 4.0))
    reps = 200
    n = 200
    vals = np.empty(reps)
    for r in range(reps):
        s = draw_sample(spec, n, replication_rng(99, r))
        vals[r] = variance_from_loo(loo_gamma(s))
    target = V_HALF / n
    assert vals.mean() == pytest.approx(target, rel=0.25)
