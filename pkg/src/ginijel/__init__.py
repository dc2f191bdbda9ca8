"""Nonparametric inference for Gini correlations.

Point estimation of the two Gini correlations of a bivariate sample,
jackknife empirical likelihood (plain and adjusted) confidence
intervals and tests for them and for their difference, a joint
two-sample comparison, normal-approximation baselines, and a Monte
Carlo study runner.
"""

from .errors import (
    ConfigInvalid,
    DegenerateSample,
    GiniJelError,
    HullViolation,
    IndexOutOfRange,
    InvalidScatter,
    NegativeVariance,
    NonConvergence,
    OutOfRange,
    ParseError,
    SampleTooSmall,
    SingularCovariance,
)
from .kernels import (
    BivariateSample,
    equality_kernel,
    estimating_kernel,
    gini_cov_kernel,
    gini_scale_kernel,
    two_sample_kernel,
)
from .ustat import (
    GiniComponents,
    RowSums,
    gini_components,
    gini_delta,
    gini_gamma,
    leave_one_out,
    loo_component_arrays,
    pearson_r,
    row_sums,
    two_sample_estimate,
    two_sample_estimate_naive,
    u_statistic_naive,
)
from .jackknife import (
    PseudoValues,
    delta_pseudo_basis,
    delta_pseudo_values,
    gamma_pseudo_basis,
    gamma_pseudo_values,
    jackknife_variance,
    loo_delta,
    loo_gamma,
    two_sample_pseudo_basis,
    two_sample_pseudo_values,
)
from .elcore import (
    ELSolution,
    adjust_values,
    adjustment_level,
    el_weights,
    neg2_log_ratio,
    neg2_log_ratio_vector,
    solve_scalar,
    solve_vector,
)
from .distributions import (
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
from .inference import (
    IntervalEstimate,
    RegionGrid,
    TestResult,
    ci_jel,
    ci_normal_asymptotic,
    ci_normal_jackknife,
    ci_pearson,
    delta_statistic,
    gamma_statistic,
    joint_region_grid,
    pearson_variance_moments,
    test_equality,
    test_two_sample,
    two_sample_statistic,
)
from .simstudy import (
    StudyCell,
    StudyConfig,
    StudyReport,
    SummaryStat,
    coverage_config,
    equality_config,
    run_coverage_study,
    run_equality_study,
    run_study,
    run_two_sample_study,
    two_sample_config,
)

__version__ = "0.1.0"
