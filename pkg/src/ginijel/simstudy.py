"""Monte Carlo study runner for the interval and test procedures.

Three study kinds are supported, each matching one simulation design:

- ``coverage``: draw a bivariate sample, build a confidence interval for
  each requested method/target/level, and record whether it contains the
  true correlation along with its length.
- ``equality``: draw one sample and exercise the equal-correlations test
  (EL statistic at zero), recording the p-value, the rejection indicator
  per level (power when the null is false, size when it is true), and
  whether the true difference is inside the level's acceptance region.
- ``two_sample``: draw two independent samples and exercise the joint
  test of both cross-sample correlation differences.

Replications are driven by counter-based RNG streams keyed on
``(base_seed, replication index)``, so results are bitwise identical for
any worker count: parallelism changes only who computes a replication,
never what it computes, and aggregation always runs in index order.

Replications are grouped into ``repeats`` outer batches; every reported
aggregate is the mean over batches of the within-batch mean, together
with the standard deviation across batches (0 when there is a single
batch).  A replication whose EL solve fails is excluded from that
method's aggregates and counted; if more than 1% of replications fail
for any method the runner refuses to aggregate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from .distributions import (
    DistributionSpec,
    ScatterSpec,
    chisq_quantile,
    draw_sample,
    gini_asymptotic_variance_normal,
    lognormal_gini_yx,
    normal_cdf,
    normal_quantile,
    replication_rng,
)
from .elcore import adjust_values, neg2_log_ratio, neg2_log_ratio_vector
from .errors import (
    ConfigInvalid,
    DegenerateSample,
    HullViolation,
    NonConvergence,
    SingularCovariance,
)
from .inference import (
    ci_jel,
    ci_normal_asymptotic,
    ci_normal_jackknife,
    ci_pearson,
)
from .jackknife import (
    delta_pseudo_basis,
    loo_delta,
    two_sample_pseudo_basis,
    variance_from_loo,
)
from .ustat import gini_delta

_KINDS = ("coverage", "equality", "two_sample")
_METHODS_BY_KIND = {
    "coverage": ("jel", "ajel", "jackknife", "asymptotic", "pearson"),
    "equality": ("jel", "ajel", "jackknife"),
    "two_sample": ("jel", "ajel"),
}
_COVERAGE_TARGETS = ("gamma_xy", "gamma_yx")
_FAILURE_ERRORS = (NonConvergence, SingularCovariance, DegenerateSample,
                   HullViolation)
_MAX_FAILURE_SHARE = 0.01


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StudyConfig:
    """Complete description of one Monte Carlo experiment.

    ``replications`` samples are drawn per repeat and ``repeats`` repeats
    are run, so ``replications * repeats`` samples in total.  True
    parameter values must match the sampling design: ``true_gamma`` is
    the common Gini/Pearson correlation of an elliptical family
    (coverage studies), ``true_delta`` the orientation difference
    (equality studies), and ``true_delta1``/``true_delta2`` the
    cross-sample differences (two-sample studies).  ``variance_gamma``
    feeds the ``asymptotic`` interval method.
    """

    kind: str
    spec: DistributionSpec
    n: int
    methods: tuple
    levels: tuple
    replications: int
    repeats: int
    base_seed: int
    spec2: Optional[DistributionSpec] = None
    n2: Optional[int] = None
    targets: tuple = _COVERAGE_TARGETS
    true_gamma: Optional[float] = None
    true_delta: Optional[float] = None
    true_delta1: Optional[float] = None
    true_delta2: Optional[float] = None
    variance_gamma: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "targets", tuple(self.targets))
        if self.kind not in _KINDS:
            raise ConfigInvalid(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.replications < 1:
            raise ConfigInvalid("replications must be at least 1")
        if self.repeats < 1:
            raise ConfigInvalid("repeats must be at least 1")
        if not self.levels:
            raise ConfigInvalid("at least one confidence level is required")
        for lvl in self.levels:
            if not 0.5 < lvl < 1.0:
                raise ConfigInvalid(
                    f"levels must lie strictly between 0.5 and 1, got {lvl}")
        allowed = _METHODS_BY_KIND[self.kind]
        if not self.methods:
            raise ConfigInvalid("at least one method is required")
        for m in self.methods:
            if m not in allowed:
                raise ConfigInvalid(
                    f"method {m!r} is not available for {self.kind} studies "
                    f"(choose from {allowed})")
        if self.n < 5:
            raise ConfigInvalid(f"sample size must be at least 5, got {self.n}")
        if self.kind == "coverage":
            if not self.targets:
                raise ConfigInvalid("coverage studies need at least one target")
            for t in self.targets:
                if t not in _COVERAGE_TARGETS:
                    raise ConfigInvalid(
                        f"coverage target must be one of {_COVERAGE_TARGETS}, "
                        f"got {t!r}")
            if self.true_gamma is None:
                raise ConfigInvalid("coverage studies need true_gamma")
            if "asymptotic" in self.methods:
                if self.variance_gamma is None:
                    raise ConfigInvalid(
                        "the asymptotic method needs variance_gamma")
                if self.variance_gamma < 0:
                    raise ConfigInvalid("variance_gamma must be >= 0")
        elif self.kind == "equality":
            if self.true_delta is None:
                raise ConfigInvalid("equality studies need true_delta")
        else:  # two_sample
            if self.spec2 is None or self.n2 is None:
                raise ConfigInvalid("two-sample studies need spec2 and n2")
            if self.n2 < 5:
                raise ConfigInvalid(
                    f"second sample size must be at least 5, got {self.n2}")
            if self.true_delta1 is None or self.true_delta2 is None:
                raise ConfigInvalid(
                    "two-sample studies need true_delta1 and true_delta2")

    @property
    def total_replications(self) -> int:
        return self.replications * self.repeats


def coverage_config(family="normal", rho=0.5, n=200, *, replications=500,
                    repeats=5, levels=(0.90, 0.95),
                    methods=("jel", "ajel", "jackknife", "asymptotic", "pearson"),
                    targets=_COVERAGE_TARGETS, base_seed=20260819) -> StudyConfig:
    """Interval-coverage design: elliptical data with scatter
    [[1, 2 rho], [2 rho, 4]], so every target equals ``rho``.

    ``family`` is ``"normal"`` or ``"t"`` (five degrees of freedom).  The
    ``asymptotic`` method is fed the normal closed-form variance at the
    true correlation for both families, which is how the tabulated
    baselines behave (and explains their mild undercoverage under t).
    """
    if family not in ("normal", "t"):
        raise ConfigInvalid(
            f"coverage designs use 'normal' or 't' data, got {family!r}")
    spec = DistributionSpec(family, ScatterSpec(1.0, 2.0 * rho, 4.0),
                            df=5 if family == "t" else None)
    return StudyConfig(
        kind="coverage", spec=spec, n=n, methods=methods, levels=levels,
        replications=replications, repeats=repeats, base_seed=base_seed,
        targets=targets, true_gamma=rho,
        variance_gamma=gini_asymptotic_variance_normal(rho))


def equality_config(family="normal", rho=0.5, n=200, *, replications=500,
                    repeats=5, levels=(0.90, 0.95),
                    methods=("jel", "ajel", "jackknife"),
                    base_seed=20260819) -> StudyConfig:
    """Equal-correlations design: (X, W) normal with scatter
    [[4, 2 rho], [2 rho, 1]]; the sample is (X, W) itself (``"normal"``,
    a true null) or (X, exp W) (``"normal_lognormal"``, where the
    orientation difference has a closed form and the null is false).
    """
    if family not in ("normal", "normal_lognormal"):
        raise ConfigInvalid(
            f"equality designs use 'normal' or 'normal_lognormal' data, "
            f"got {family!r}")
    spec = DistributionSpec(family, ScatterSpec(4.0, 2.0 * rho, 1.0))
    if family == "normal":
        true_delta = 0.0
    else:
        true_delta = rho - lognormal_gini_yx(rho, 1.0)
    return StudyConfig(
        kind="equality", spec=spec, n=n, methods=methods, levels=levels,
        replications=replications, repeats=repeats, base_seed=base_seed,
        true_delta=true_delta)


def two_sample_config(rho=0.5, n1=150, n2=200, *, replications=500, repeats=5,
                      levels=(0.90, 0.95), methods=("jel", "ajel"),
                      base_seed=20260819) -> StudyConfig:
    """Two-sample design: sample 1 is (X, Y) bivariate normal with
    scatter [[1, 4 rho], [4 rho, 16]] and sample 2 is (T, exp W) with
    (T, W) from the same normal.  The first difference is 0 (monotone
    transforms of the second coordinate do not move gamma(X, Y)); the
    second has the lognormal closed form with log-scale 4.
    """
    scatter = ScatterSpec(1.0, 4.0 * rho, 16.0)
    spec1 = DistributionSpec("normal", scatter)
    spec2 = DistributionSpec("normal_lognormal", scatter)
    sigma2 = math.sqrt(scatter.s22)
    return StudyConfig(
        kind="two_sample", spec=spec1, spec2=spec2, n=n1, n2=n2,
        methods=methods, levels=levels, replications=replications,
        repeats=repeats, base_seed=base_seed,
        true_delta1=0.0, true_delta2=rho - lognormal_gini_yx(rho, sigma2))


# ---------------------------------------------------------------------------
# report types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SummaryStat:
    """Mean over repeats of a within-repeat average, and the standard
    deviation of that average across repeats."""

    mean: float
    sd: float


@dataclass(frozen=True)
class StudyCell:
    """Aggregates for one (method, target, level) combination."""

    method: str
    target: str
    level: float
    coverage: Optional[SummaryStat] = None
    length: Optional[SummaryStat] = None
    p_value: Optional[SummaryStat] = None
    power: Optional[SummaryStat] = None
    failures: int = 0


@dataclass(frozen=True)
class StudyReport:
    """All cells of one study plus the configuration echo."""

    kind: str
    replications: int
    repeats: int
    base_seed: int
    cells: tuple

    def cell(self, method: str, target: str, level: float) -> StudyCell:
        for c in self.cells:
            if (c.method == method and c.target == target
                    and abs(c.level - level) < 1e-12):
                return c
        raise KeyError(f"no cell for ({method!r}, {target!r}, {level})")

    def to_dict(self) -> dict:
        def stat(s):
            if s is None:
                return None
            return {"mean": round(s.mean, 6), "sd": round(s.sd, 6)}

        return {
            "kind": self.kind,
            "replications": self.replications,
            "repeats": self.repeats,
            "base_seed": self.base_seed,
            "cells": [
                {
                    "method": c.method,
                    "target": c.target,
                    "level": round(c.level, 6),
                    "coverage": stat(c.coverage),
                    "length": stat(c.length),
                    "p_value": stat(c.p_value),
                    "power": stat(c.power),
                    "failures": c.failures,
                }
                for c in self.cells
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        """Aligned table: one row per method/target, one column block per
        level holding every populated aggregate as mean(sd)."""
        present = [name for name in ("coverage", "length", "p_value", "power")
                   if any(getattr(c, name) is not None for c in self.cells)]
        levels = sorted({c.level for c in self.cells})
        rows = []
        seen = []
        for c in self.cells:
            key = (c.method, c.target)
            if key not in seen:
                seen.append(key)
        header = ["method", "target"] + [f"{lvl:.2f}" for lvl in levels]
        legend = "cells: " + " ".join(present) + ", each mean(sd)"
        for method, target in seen:
            row = [method, target]
            for lvl in levels:
                c = self.cell(method, target, lvl)
                parts = []
                for name in present:
                    s = getattr(c, name)
                    parts.append("-" if s is None
                                 else f"{s.mean:.3f}({s.sd:.3f})")
                row.append(" ".join(parts))
            rows.append(row)
        widths = [max(len(r[i]) for r in rows + [header])
                  for i in range(len(header))]
        lines = [legend,
                 "  ".join(h.ljust(w) for h, w in zip(header, widths))]
        for row in rows:
            lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# per-replication workers
# ---------------------------------------------------------------------------

def _coverage_layout(config):
    """(method, target, level) triples in report order; two slots each."""
    triples = []
    for m in config.methods:
        targets = ("pearson",) if m == "pearson" else config.targets
        for t in targets:
            for lvl in config.levels:
                triples.append((m, t, lvl))
    return triples


def _coverage_replication(config: StudyConfig, index: int) -> np.ndarray:
    sample = draw_sample(config.spec, config.n,
                         replication_rng(config.base_seed, index))
    true = config.true_gamma
    out = []
    for m in config.methods:
        targets = ("pearson",) if m == "pearson" else config.targets
        block = []
        try:
            for t in targets:
                for lvl in config.levels:
                    if m == "jel":
                        ci = ci_jel(sample, t, lvl, adjusted=False)
                    elif m == "ajel":
                        ci = ci_jel(sample, t, lvl, adjusted=True)
                    elif m == "jackknife":
                        ci = ci_normal_jackknife(sample, t, lvl)
                    elif m == "asymptotic":
                        ci = ci_normal_asymptotic(
                            sample, t, lvl, variance=config.variance_gamma)
                    else:
                        ci = ci_pearson(sample, lvl)
                    block.append(1.0 if ci.lower <= true <= ci.upper else 0.0)
                    block.append(ci.upper - ci.lower)
        except _FAILURE_ERRORS:
            block = [math.nan] * (2 * len(targets) * len(config.levels))
        out.extend(block)
    return np.asarray(out)


def _test_block(stat_null, stat_true, df, levels):
    """[p-value] + per level [covered, reject] for an EL test statistic."""
    from .distributions import chisq_cdf

    p = 1.0 - chisq_cdf(stat_null, df) if math.isfinite(stat_null) else 0.0
    block = [p]
    for lvl in levels:
        threshold = chisq_quantile(lvl, df)
        block.append(1.0 if stat_true <= threshold else 0.0)
        block.append(1.0 if stat_null > threshold else 0.0)
    return block


def _equality_replication(config: StudyConfig, index: int) -> np.ndarray:
    sample = draw_sample(config.spec, config.n,
                         replication_rng(config.base_seed, index))
    d0 = config.true_delta
    width = 1 + 2 * len(config.levels)
    out = []
    for m in config.methods:
        try:
            if m == "jackknife":
                d_hat = gini_delta(sample)
                se = math.sqrt(variance_from_loo(loo_delta(sample)))
                if se > 0:
                    p = 2.0 * (1.0 - normal_cdf(abs(d_hat) / se))
                else:
                    p = 1.0 if d_hat == 0.0 else 0.0
                block = [p]
                for lvl in config.levels:
                    z = normal_quantile(0.5 * (1.0 + lvl))
                    block.append(1.0 if abs(d_hat - d0) <= z * se else 0.0)
                    block.append(1.0 if abs(d_hat) > z * se else 0.0)
            else:
                slope, const = delta_pseudo_basis(sample)

                def stat(theta, adjusted=(m == "ajel")):
                    values = theta * slope + const
                    if adjusted:
                        values = adjust_values(values)
                    return neg2_log_ratio(values)

                block = _test_block(stat(0.0), stat(d0), 1, config.levels)
        except _FAILURE_ERRORS:
            block = [math.nan] * width
        out.extend(block)
    return np.asarray(out)


def _two_sample_replication(config: StudyConfig, index: int) -> np.ndarray:
    rng = replication_rng(config.base_seed, index)
    sample1 = draw_sample(config.spec, config.n, rng)
    sample2 = draw_sample(config.spec2, config.n2, rng)
    width = 1 + 2 * len(config.levels)
    out = []
    for m in config.methods:
        try:
            basis = two_sample_pseudo_basis(sample1, sample2)

            def stat(d1, d2, adjusted=(m == "ajel")):
                rows = basis.rows(d1, d2)
                if adjusted:
                    rows = adjust_values(rows)
                return neg2_log_ratio_vector(rows)

            block = _test_block(stat(0.0, 0.0),
                                stat(config.true_delta1, config.true_delta2),
                                2, config.levels)
        except _FAILURE_ERRORS:
            block = [math.nan] * width
        out.extend(block)
    return np.asarray(out)


# ---------------------------------------------------------------------------
# aggregation
# ---------------------------------------------------------------------------

def _check_failure_budget(failures_by_method: dict, total: int) -> None:
    """Refuse to aggregate when more than 1% of replications failed for
    any method: aggregates over a censored replication set would not be
    comparable to the uncensored design."""
    for method, count in failures_by_method.items():
        if count > _MAX_FAILURE_SHARE * total:
            raise NonConvergence(
                f"method {method!r}: {count} of {total} replications failed "
                f"the EL solve, exceeding the {_MAX_FAILURE_SHARE:.0%} budget")


def _run_replications(worker, config: StudyConfig, n_jobs: int) -> np.ndarray:
    total = config.total_replications
    if n_jobs == 1:
        rows = [worker(config, i) for i in range(total)]
    else:
        rows = Parallel(n_jobs=n_jobs)(
            delayed(worker)(config, i) for i in range(total))
    return np.vstack(rows).reshape(config.repeats, config.replications, -1)


def _slot_stats(values: np.ndarray, repeats: int) -> SummaryStat:
    """values: (repeats, replications) with NaN marking excluded rows."""
    valid = ~np.isnan(values)
    counts = np.maximum(valid.sum(axis=1), 1)
    per_repeat = np.where(valid, values, 0.0).sum(axis=1) / counts
    sd = float(per_repeat.std(ddof=1)) if repeats > 1 else 0.0
    return SummaryStat(mean=float(per_repeat.mean()), sd=sd)


def run_coverage_study(config: StudyConfig, n_jobs: int = 1) -> StudyReport:
    """Interval coverage and length for every method/target/level."""
    if config.kind != "coverage":
        raise ConfigInvalid(f"expected a coverage config, got {config.kind!r}")
    data = _run_replications(_coverage_replication, config, n_jobs)
    triples = _coverage_layout(config)

    failures = {}
    col = 0
    for m in config.methods:
        targets = ("pearson",) if m == "pearson" else config.targets
        n_cols = 2 * len(targets) * len(config.levels)
        failures[m] = int(np.isnan(data[:, :, col]).sum())
        col += n_cols
    _check_failure_budget(failures, config.total_replications)

    cells = []
    for i, (m, t, lvl) in enumerate(triples):
        cells.append(StudyCell(
            method=m, target=t, level=lvl,
            coverage=_slot_stats(data[:, :, 2 * i], config.repeats),
            length=_slot_stats(data[:, :, 2 * i + 1], config.repeats),
            failures=failures[m]))
    return StudyReport(kind=config.kind, replications=config.replications,
                       repeats=config.repeats, base_seed=config.base_seed,
                       cells=tuple(cells))


def _run_test_study(config: StudyConfig, worker, target: str, df: int,
                    n_jobs: int) -> StudyReport:
    data = _run_replications(worker, config, n_jobs)
    width = 1 + 2 * len(config.levels)

    failures = {m: int(np.isnan(data[:, :, i * width]).sum())
                for i, m in enumerate(config.methods)}
    _check_failure_budget(failures, config.total_replications)

    cells = []
    for i, m in enumerate(config.methods):
        base = i * width
        p = _slot_stats(data[:, :, base], config.repeats)
        for j, lvl in enumerate(config.levels):
            cells.append(StudyCell(
                method=m, target=target, level=lvl,
                coverage=_slot_stats(data[:, :, base + 1 + 2 * j],
                                     config.repeats),
                p_value=p,
                power=_slot_stats(data[:, :, base + 2 + 2 * j],
                                  config.repeats),
                failures=failures[m]))
    return StudyReport(kind=config.kind, replications=config.replications,
                       repeats=config.repeats, base_seed=config.base_seed,
                       cells=tuple(cells))


def run_equality_study(config: StudyConfig, n_jobs: int = 1) -> StudyReport:
    """Equal-correlations test: p-values, rejection rates, and acceptance
    of the true difference, per method and level."""
    if config.kind != "equality":
        raise ConfigInvalid(f"expected an equality config, got {config.kind!r}")
    return _run_test_study(config, _equality_replication, "delta", 1, n_jobs)


def run_two_sample_study(config: StudyConfig, n_jobs: int = 1) -> StudyReport:
    """Joint two-sample test: p-values, rejection rates, and acceptance
    of the true difference pair, per method and level."""
    if config.kind != "two_sample":
        raise ConfigInvalid(
            f"expected a two-sample config, got {config.kind!r}")
    return _run_test_study(config, _two_sample_replication, "joint", 2, n_jobs)


def run_study(config: StudyConfig, n_jobs: int = 1) -> StudyReport:
    """Dispatch on the config's study kind."""
    runner = {
        "coverage": run_coverage_study,
        "equality": run_equality_study,
        "two_sample": run_two_sample_study,
    }[config.kind]
    return runner(config, n_jobs=n_jobs)
