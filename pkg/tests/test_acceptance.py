"""Acceptance suite: one test per shipped claim, one verdict line each.

Every test prints a single ``ACCEPTANCE <k> <PASS|FAIL|SKIP>`` line with
the measured values (bypassing capture, so it shows up in any run) and
then asserts the claim at its stated tolerance and runtime budget.

The first two criteria check against reference results for the UCI
banknote authentication dataset and are skipped when the file has not
been fetched (``scripts/fetch_banknote.py`` documents the download).
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from test_jackknife import (
    naive_delta_pseudo,
    naive_gamma_pseudo,
    naive_two_sample_rows,
)
from test_ustat import components_naive, row_sums_naive

from ginijel.distributions import (
    DistributionSpec,
    ScatterSpec,
    draw_sample,
    gini_asymptotic_variance_normal,
    lognormal_gini_yx,
    replication_rng,
)
from ginijel.elcore import el_weights, solve_scalar, solve_vector
from ginijel.errors import HullViolation
from ginijel.inference import (
    ci_jel,
    ci_normal_jackknife,
    delta_statistic,
    gamma_statistic,
    two_sample_statistic,
)
from ginijel.jackknife import (
    delta_pseudo_values,
    gamma_pseudo_values,
    two_sample_pseudo_basis,
    two_sample_pseudo_values,
)
from ginijel.kernels import BivariateSample
from ginijel.simstudy import (
    coverage_config,
    equality_config,
    run_coverage_study,
    run_equality_study,
    run_two_sample_study,
    two_sample_config,
)
from ginijel.ustat import (
    gini_components,
    gini_delta,
    gini_gamma,
    loo_component_arrays,
    row_sums,
)

BANKNOTE = Path(__file__).resolve().parents[1] / "data" / "banknote.csv"

# column indices for the two studied variable pairs
PAIRS = {"VW,SW": (0, 1), "SW,KW": (1, 2)}

# reference point estimates: (pair, class) -> (gamma_xy, gamma_yx, delta)
REFERENCE_POINTS = {
    ("VW,SW", 1): (0.0471, 0.1595, -0.1124),
    ("VW,SW", 0): (-0.2459, -0.1916, -0.0543),
    ("SW,KW", 1): (-0.8436, -0.8910, 0.0474),
    ("SW,KW", 0): (-0.7638, -0.7525, -0.0113),
}

# reference 90% intervals: (pair, class, target, method) -> (lower, upper)
REFERENCE_INTERVALS = {
    ("VW,SW", 1, "gamma_xy", "jel"): (-0.0197, 0.1329),
    ("VW,SW", 1, "gamma_xy", "ajel"): (-0.0197, 0.1334),
    ("VW,SW", 1, "gamma_xy", "jackknife"): (-0.0407, 0.1349),
    ("VW,SW", 1, "gamma_yx", "jel"): (0.0992, 0.2365),
    ("VW,SW", 1, "gamma_yx", "ajel"): (0.0992, 0.2369),
    ("VW,SW", 1, "gamma_yx", "jackknife"): (0.0803, 0.2388),
    ("VW,SW", 1, "delta", "jel"): (-0.1324, -0.0865),
    ("VW,SW", 1, "delta", "ajel"): (-0.1324, -0.0864),
    ("VW,SW", 1, "delta", "jackknife"): (-0.1387, -0.0861),
    ("VW,SW", 0, "gamma_xy", "jel"): (-0.2936, -0.1828),
    ("VW,SW", 0, "gamma_xy", "ajel"): (-0.2936, -0.1826),
    ("VW,SW", 0, "gamma_xy", "jackknife"): (-0.3087, -0.1831),
    ("VW,SW", 0, "gamma_yx", "jel"): (-0.2370, -0.1317),
    ("VW,SW", 0, "gamma_yx", "ajel"): (-0.2370, -0.1315),
    ("VW,SW", 0, "gamma_yx", "jackknife"): (-0.2513, -0.1319),
    ("VW,SW", 0, "delta", "jel"): (-0.0685, -0.0358),
    ("VW,SW", 0, "delta", "ajel"): (-0.0685, -0.0357),
    ("VW,SW", 0, "delta", "jackknife"): (-0.0730, -0.0355),
    ("SW,KW", 1, "gamma_xy", "jel"): (-0.8632, -0.8169),
    ("SW,KW", 1, "gamma_xy", "ajel"): (-0.8632, -0.8167),
    ("SW,KW", 1, "gamma_xy", "jackknife"): (-0.8694, -0.8178),
    ("SW,KW", 1, "gamma_yx", "jel"): (-0.9023, -0.8755),
    ("SW,KW", 1, "gamma_yx", "ajel"): (-0.9023, -0.8754),
    ("SW,KW", 1, "gamma_yx", "jackknife"): (-0.9058, -0.8762),
    ("SW,KW", 1, "delta", "jel"): (0.0363, 0.0628),
    ("SW,KW", 1, "delta", "ajel"): (0.0363, 0.0629),
    ("SW,KW", 1, "delta", "jackknife"): (0.0327, 0.0620),
    ("SW,KW", 0, "gamma_xy", "jel"): (-0.7867, -0.7320),
    ("SW,KW", 0, "gamma_xy", "ajel"): (-0.7867, -0.7318),
    ("SW,KW", 0, "gamma_xy", "jackknife"): (-0.7939, -0.7337),
    ("SW,KW", 0, "gamma_yx", "jel"): (-0.7752, -0.7206),
    ("SW,KW", 0, "gamma_yx", "ajel"): (-0.7752, -0.7205),
    ("SW,KW", 0, "gamma_yx", "jackknife"): (-0.7823, -0.7228),
    # the jel/ajel lower endpoint below disagrees in scale with its own
    # jackknife row (-0.0206) and with the point estimate -0.0113; it is
    # almost surely a digit transposition of -0.0184, but it is kept
    # verbatim so a mismatch is reported rather than papered over
    ("SW,KW", 0, "delta", "jel"): (-0.1840, -0.0017),
    ("SW,KW", 0, "delta", "ajel"): (-0.1840, -0.0017),
    ("SW,KW", 0, "delta", "jackknife"): (-0.0206, -0.0019),
}


def announce(capsys, line):
    with capsys.disabled():
        print(line, flush=True)


def load_banknote_classes():
    raw = np.genfromtxt(BANKNOTE, delimiter=",")
    labels = raw[:, 4].astype(int)
    samples = {}
    for label in (0, 1):
        rows = raw[labels == label]
        for pair, (i, j) in PAIRS.items():
            samples[(pair, label)] = BivariateSample(rows[:, i], rows[:, j])
    return samples


# ---------------------------------------------------------------------------
# 1. banknote point estimates
# ---------------------------------------------------------------------------

def test_criterion_1_banknote_point_estimates(capsys):
    if not BANKNOTE.exists():
        announce(capsys, "ACCEPTANCE 1 SKIP: banknote dataset not found at "
                         f"{BANKNOTE} (run scripts/fetch_banknote.py)")
        pytest.skip("banknote dataset not fetched")
    start = time.perf_counter()
    samples = load_banknote_classes()
    worst = 0.0
    for key, (g_xy, g_yx, d) in REFERENCE_POINTS.items():
        s = samples[key]
        for ref, got in ((g_xy, gini_gamma(s)), (g_yx, gini_gamma(s, "yx")),
                         (d, gini_delta(s))):
            worst = max(worst, abs(got - ref))
    elapsed = time.perf_counter() - start
    verdict = "PASS" if worst <= 1e-4 and elapsed < 5.0 else "FAIL"
    announce(capsys, f"ACCEPTANCE 1 {verdict} ({elapsed:.1f}s): banknote "
                     f"point estimates, max |error| {worst:.2e} "
                     f"(tolerance 1e-4)")
    assert worst <= 1e-4
    assert elapsed < 5.0


# ---------------------------------------------------------------------------
# 2. banknote 90% intervals
# ---------------------------------------------------------------------------

def test_criterion_2_banknote_intervals(capsys):
    if not BANKNOTE.exists():
        announce(capsys, "ACCEPTANCE 2 SKIP: banknote dataset not found at "
                         f"{BANKNOTE} (run scripts/fetch_banknote.py)")
        pytest.skip("banknote dataset not fetched")
    start = time.perf_counter()
    samples = load_banknote_classes()
    worst, worst_key = 0.0, None
    for (pair, label, target, method), ref in REFERENCE_INTERVALS.items():
        s = samples[(pair, label)]
        if method == "jackknife":
            got = ci_normal_jackknife(s, target=target, level=0.90)
        else:
            got = ci_jel(s, target=target, level=0.90,
                         adjusted=(method == "ajel"))
        err = max(abs(got.lower - ref[0]), abs(got.upper - ref[1]))
        if err > worst:
            worst, worst_key = err, (pair, label, target, method)
    elapsed = time.perf_counter() - start
    verdict = "PASS" if worst <= 5e-3 and elapsed < 120.0 else "FAIL"
    announce(capsys, f"ACCEPTANCE 2 {verdict} ({elapsed:.1f}s): banknote "
                     f"90% intervals, max endpoint |error| {worst:.2e} at "
                     f"{worst_key} (tolerance 5e-3)")
    assert worst <= 5e-3, worst_key
    assert elapsed < 120.0


# ---------------------------------------------------------------------------
# 3. closed-form identities
# ---------------------------------------------------------------------------

def test_criterion_3_closed_form_identities(capsys):
    v0 = gini_asymptotic_variance_normal(0.0)
    v1 = gini_asymptotic_variance_normal(1.0)
    identity_err = max(abs(v0 - math.pi / 3.0), abs(v1))

    # orientation differences rho - gamma(Y,X) for (X, exp W) data
    truth_err = 0.0
    for rho, ref in zip((0.1, 0.5, 0.9), (-0.008, -0.031, -0.014)):
        truth_err = max(truth_err,
                        abs((rho - lognormal_gini_yx(rho, 1.0)) - ref))
    for rho, ref in zip((0.1, 0.5, 0.9), (-0.1237, -0.3467, -0.0937)):
        truth_err = max(truth_err,
                        abs((rho - lognormal_gini_yx(rho, 4.0)) - ref))

    ok = identity_err <= 1e-12 and truth_err <= 5e-4
    announce(capsys, f"ACCEPTANCE 3 {'PASS' if ok else 'FAIL'}: variance "
                     f"identities |error| {identity_err:.2e} (tol 1e-12); "
                     f"orientation-difference truths |error| "
                     f"{truth_err:.2e} (tol 5e-4)")
    assert identity_err <= 1e-12
    assert truth_err <= 5e-4


# ---------------------------------------------------------------------------
# 4. fast paths match naive recomputation
# ---------------------------------------------------------------------------

def _random_sample(rng, n):
    x = rng.normal(size=n)
    y = 0.6 * x + 0.8 * rng.normal(size=n)
    if rng.random() < 0.3:
        y = np.exp(y)  # a skewed marginal now and then
    return BivariateSample(x, y)


def test_criterion_4_fast_paths_match_naive(capsys):
    start = time.perf_counter()
    rng = np.random.default_rng(20260819)
    worst = 0.0

    def record(got, ref):
        nonlocal worst
        got = np.asarray(got, dtype=float)
        ref = np.asarray(ref, dtype=float)
        scale = np.maximum(np.abs(ref), 1.0)
        worst = max(worst, float(np.max(np.abs(got - ref) / scale)))

    for index in range(200):
        n = int(rng.integers(5, 61))
        s = _random_sample(rng, n)

        for orientation in ("xy", "yx"):
            fast = gini_components(s, orientation)
            naive = components_naive(s, orientation)
            record((fast.u_cov, fast.u_scale), (naive.u_cov, naive.u_scale))

        rs = row_sums(s)
        ref_cov, ref_scale = row_sums_naive(s)
        record(rs.cov, ref_cov)
        record(rs.scale, ref_scale)

        c = gini_components(s)
        loo_cov, loo_scale = loo_component_arrays(c, rs)
        for i in range(n):
            keep = [k for k in range(n) if k != i]
            sub = components_naive(s.take(keep))
            record((loo_cov[i], loo_scale[i]), (sub.u_cov, sub.u_scale))

        gamma = float(rng.uniform(-1.0, 1.0))
        record(gamma_pseudo_values(s, gamma).values,
               naive_gamma_pseudo(s, gamma))
        delta = float(rng.uniform(-0.5, 0.5))
        record(delta_pseudo_values(s, delta).values,
               naive_delta_pseudo(s, delta))

        if index % 2 == 0:
            n1 = int(rng.integers(5, 15))
            n2 = int(rng.integers(5, 15))
            s1 = _random_sample(rng, n1)
            s2 = _random_sample(rng, n2)
            d1 = float(rng.uniform(-0.5, 0.5))
            d2 = float(rng.uniform(-0.5, 0.5))
            record(two_sample_pseudo_values(s1, s2, d1, d2).values,
                   naive_two_sample_rows(s1, s2, d1, d2))

    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 30.0
    announce(capsys, f"ACCEPTANCE 4 {'PASS' if ok else 'FAIL'} "
                     f"({elapsed:.1f}s): 200 randomized instances, max "
                     f"relative error {worst:.2e} (tolerance 1e-10)")
    assert worst <= 1e-10
    assert elapsed < 30.0


# ---------------------------------------------------------------------------
# 5. Wilks calibration of the three EL statistics
# ---------------------------------------------------------------------------

def test_criterion_5_wilks_calibration(capsys):
    start = time.perf_counter()
    reps, n, rho = 2000, 200, 0.5
    gamma_spec = DistributionSpec("normal", ScatterSpec(1.0, 2.0 * rho, 4.0))
    delta_spec = DistributionSpec("normal", ScatterSpec(4.0, 2.0 * rho, 1.0))
    joint_spec = DistributionSpec("normal", ScatterSpec(1.0, 4.0 * rho, 16.0))

    stats = np.empty((reps, 3))
    for i in range(reps):
        rng = replication_rng(20260819, i)
        stats[i, 0] = gamma_statistic(draw_sample(gamma_spec, n, rng), rho)
        stats[i, 1] = delta_statistic(draw_sample(delta_spec, n, rng), 0.0)
        s1 = draw_sample(joint_spec, n, rng)
        s2 = draw_sample(joint_spec, n, rng)
        stats[i, 2] = two_sample_statistic(s1, s2, 0.0, 0.0)

    q90 = np.quantile(stats, 0.90, axis=0)
    targets = (2.7055, 2.7055, 4.6052)
    slacks = (0.30, 0.30, 0.40)
    errs = [abs(q - t) for q, t in zip(q90, targets)]
    ok = all(e <= s for e, s in zip(errs, slacks))
    elapsed = time.perf_counter() - start
    announce(capsys, f"ACCEPTANCE 5 {'PASS' if ok else 'FAIL'} "
                     f"({elapsed:.1f}s): empirical 90th percentiles "
                     f"gamma {q90[0]:.4f}, difference {q90[1]:.4f} "
                     f"(target 2.7055 +-0.30), joint {q90[2]:.4f} "
                     f"(target 4.6052 +-0.40)")
    assert errs[0] <= 0.30
    assert errs[1] <= 0.30
    assert errs[2] <= 0.40
    assert elapsed < 300.0


# ---------------------------------------------------------------------------
# 6. interval coverage and length at scale
# ---------------------------------------------------------------------------

def test_criterion_6_coverage_reproduction(capsys):
    start = time.perf_counter()
    normal_cell = run_coverage_study(coverage_config(
        "normal", 0.5, 200, replications=250, repeats=4, levels=(0.95,),
        methods=("jel",), targets=("gamma_xy",), base_seed=20260819),
        n_jobs=4).cell("jel", "gamma_xy", 0.95)
    t_cell = run_coverage_study(coverage_config(
        "t", 0.5, 200, replications=250, repeats=4, levels=(0.90,),
        methods=("jel",), targets=("gamma_xy",), base_seed=20260819),
        n_jobs=4).cell("jel", "gamma_xy", 0.90)
    elapsed = time.perf_counter() - start

    cov_n = normal_cell.coverage.mean
    len_n = normal_cell.length.mean
    cov_t = t_cell.coverage.mean
    clauses = [
        ("normal coverage", 0.935 <= cov_n <= 0.965,
         f"{cov_n:.4f} in [0.935, 0.965]"),
        ("normal mean length", abs(len_n - 0.171) <= 0.010,
         f"{len_n:.4f} vs 0.171 +-0.010"),
        ("t(5) coverage", 0.87 <= cov_t <= 0.91,
         f"{cov_t:.4f} in [0.87, 0.91]"),
    ]
    failed = [name for name, ok, _ in clauses if not ok]
    verdict = "PASS" if not failed and elapsed < 600.0 else "FAIL"
    detail = "; ".join(f"{name} {'PASS' if ok else 'FAIL'} ({shown})"
                       for name, ok, shown in clauses)
    announce(capsys, f"ACCEPTANCE 6 {verdict} ({elapsed:.1f}s): {detail}")
    assert elapsed < 600.0
    # The length target is not attainable by a chi-square-calibrated
    # interval at this design point: criterion 5 pins the -2 log ratio's
    # 90th percentile at its chi-square value, which forces the mean
    # 95% length toward 2 sqrt(3.8415 v / n) with v = v_gamma(0.5)
    # = 0.5992, i.e. about 0.215 -- where both this interval and the
    # jackknife baseline in fact land.  A 0.171-long interval at n=200
    # would need a threshold near 2.46 and would cover well below 95%.
    # The claim is asserted as stated and reported honestly as red.
    assert not failed, f"failed clauses: {failed}"


# ---------------------------------------------------------------------------
# 7. test calibration and power at scale
# ---------------------------------------------------------------------------

def test_criterion_7_test_calibration_and_power(capsys):
    start = time.perf_counter()
    null_cell = run_equality_study(equality_config(
        "normal", 0.5, 200, replications=500, repeats=1, levels=(0.90,),
        methods=("jel",), base_seed=7001), n_jobs=4).cell("jel", "delta", 0.90)
    power_cell = run_equality_study(equality_config(
        "normal_lognormal", 0.9, 200, replications=500, repeats=1,
        levels=(0.90,), methods=("jel",), base_seed=7002),
        n_jobs=4).cell("jel", "delta", 0.90)
    joint_cell = run_two_sample_study(two_sample_config(
        0.9, 150, 200, replications=500, repeats=1, levels=(0.90,),
        methods=("jel",), base_seed=7003), n_jobs=4).cell("jel", "joint", 0.90)
    elapsed = time.perf_counter() - start

    mean_p = null_cell.p_value.mean
    power = power_cell.power.mean
    joint_p = joint_cell.p_value.mean
    ok = (abs(mean_p - 0.509) <= 0.03 and abs(power - 0.37) <= 0.05
          and abs(joint_p - 0.143) <= 0.03)
    announce(capsys, f"ACCEPTANCE 7 {'PASS' if ok else 'FAIL'} "
                     f"({elapsed:.1f}s): null mean p {mean_p:.4f} "
                     f"(0.509 +-0.03); power {power:.4f} (0.37 +-0.05); "
                     f"two-sample mean p {joint_p:.4f} (0.143 +-0.03)")
    assert abs(mean_p - 0.509) <= 0.03
    assert abs(power - 0.37) <= 0.05
    assert abs(joint_p - 0.143) <= 0.03


# ---------------------------------------------------------------------------
# 8. structural properties
# ---------------------------------------------------------------------------

def _random_spec(rng):
    rho = float(rng.uniform(-0.85, 0.85))
    s11 = float(rng.uniform(0.25, 4.0))
    s22 = float(rng.uniform(0.25, 4.0))
    scatter = ScatterSpec(s11, rho * math.sqrt(s11 * s22), s22)
    family = ("normal", "t", "normal_lognormal")[int(rng.integers(3))]
    return DistributionSpec(family, scatter, df=5 if family == "t" else None)


def test_criterion_8_structural_properties(capsys):
    start = time.perf_counter()
    rng = np.random.default_rng(88)

    # adjusted-EL intervals contain the unadjusted ones
    containment_slack = 0.0
    for index in range(500):
        n = int(rng.integers(8, 41))
        s = draw_sample(_random_spec(rng), n, rng)
        target = ("gamma_xy", "gamma_yx", "delta")[index % 3]
        plain = ci_jel(s, target=target, level=0.90)
        adjusted = ci_jel(s, target=target, level=0.90, adjusted=True)
        containment_slack = max(containment_slack,
                                adjusted.lower - plain.lower,
                                plain.upper - adjusted.upper)

    # higher confidence levels give nested intervals
    nesting_slack = 0.0
    for _ in range(100):
        s = draw_sample(_random_spec(rng), int(rng.integers(10, 41)), rng)
        c80 = ci_jel(s, level=0.80)
        c90 = ci_jel(s, level=0.90)
        c95 = ci_jel(s, level=0.95)
        nesting_slack = max(nesting_slack,
                            c90.lower - c80.lower, c80.upper - c90.upper,
                            c95.lower - c90.lower, c90.upper - c95.upper)

    # EL weights are a probability vector meeting the constraint, and the
    # statistic is recoverable from them
    weight_err = 0.0
    for index in range(200):
        n = int(rng.integers(8, 41))
        s = draw_sample(_random_spec(rng), n, rng)
        gamma = gini_gamma(s) + float(rng.uniform(-0.02, 0.02))
        try:
            values = gamma_pseudo_values(s, gamma).values
            solution = solve_scalar(values)
        except HullViolation:
            values = gamma_pseudo_values(s, gini_gamma(s)).values
            solution = solve_scalar(values)
        weights = el_weights(values, solution.lam)
        assert np.all(weights > 0)
        weight_err = max(
            weight_err,
            abs(float(weights.sum()) - 1.0),
            abs(float(weights @ values)),
            abs(-2.0 * float(np.log(len(values) * weights).sum())
                - solution.neg2_log_r))
        if index % 4 == 0:
            s2 = draw_sample(_random_spec(rng), int(rng.integers(8, 41)), rng)
            basis = two_sample_pseudo_basis(s, s2)
            d1 = gini_gamma(s) - gini_gamma(s2)
            d2 = gini_gamma(s, "yx") - gini_gamma(s2, "yx")
            rows = basis.rows(d1 + float(rng.uniform(-0.01, 0.01)),
                              d2 + float(rng.uniform(-0.01, 0.01)))
            try:
                solution = solve_vector(rows)
            except HullViolation:
                rows = basis.rows(d1, d2)
                solution = solve_vector(rows)
            weights = el_weights(rows, solution.lam)
            assert np.all(weights > 0)
            weight_err = max(
                weight_err,
                abs(float(weights.sum()) - 1.0),
                float(np.max(np.abs(weights @ rows))),
                abs(-2.0 * float(np.log(rows.shape[0] * weights).sum())
                    - solution.neg2_log_r))

    # estimator invariances: monotone y transform, affine x map
    invariance_err = 0.0
    for _ in range(100):
        s = draw_sample(_random_spec(rng), int(rng.integers(8, 41)), rng)
        base = gini_gamma(s)
        mono = gini_gamma(BivariateSample(s.x, s.y ** 3 + 2.0 * s.y))
        a, b = float(rng.uniform(0.1, 5.0)), float(rng.uniform(-3.0, 3.0))
        affine = gini_gamma(BivariateSample(a * s.x + b, s.y))
        invariance_err = max(invariance_err, abs(mono - base),
                             abs(affine - base))

    # study results do not depend on the worker count
    config = coverage_config("normal", 0.3, 25, replications=8, repeats=1,
                             levels=(0.90,), methods=("jel", "jackknife"),
                             base_seed=55)
    serial = run_coverage_study(config, n_jobs=1).to_json()
    parallel = run_coverage_study(config, n_jobs=3).to_json()
    deterministic = serial == parallel

    elapsed = time.perf_counter() - start
    ok = (containment_slack <= 1e-9 and nesting_slack <= 1e-9
          and weight_err <= 1e-9 and invariance_err <= 1e-11
          and deterministic)
    announce(capsys, f"ACCEPTANCE 8 {'PASS' if ok else 'FAIL'} "
                     f"({elapsed:.1f}s): containment slack "
                     f"{containment_slack:.1e}; nesting slack "
                     f"{nesting_slack:.1e}; weight-sum error "
                     f"{weight_err:.1e}; invariance error "
                     f"{invariance_err:.1e}; worker-count determinism "
                     f"{deterministic}")
    assert containment_slack <= 1e-9
    assert nesting_slack <= 1e-9
    assert weight_err <= 1e-9
    assert invariance_err <= 1e-11
    assert deterministic
