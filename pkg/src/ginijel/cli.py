"""Command-line driver: estimation, intervals, tests, regions, studies.

Subcommands
-----------
``estimate``
    Point estimates for one sample: both Gini correlations, their
    difference, and the Pearson correlation, as JSON.
``ci``
    One confidence interval (``jel``, ``ajel``, ``jackknife``,
    ``asymptotic`` or ``pearson``), as JSON.
``test``
    The equal-correlations test on one sample (``--mode equality``) or
    the joint test of both cross-sample differences (``--mode
    two_sample``), as JSON.
``region``
    Joint confidence-region membership on a rectangular grid of
    difference pairs, as CSV for external plotting.
``simulate``
    A Monte Carlo study described by a ``key = value`` config file;
    writes ``report.json`` and ``report.txt`` and echoes the text table.

Input files are comma-separated numeric text with an optional single
header line (auto-detected: a first row with any non-numeric cell).
Two-column files are used as-is.  Five-column files are treated as
class-labeled measurement files — four data columns (named ``VW``,
``SW``, ``KW``, ``EI`` when there is no header) plus a trailing 0/1
class column — and ``--class`` (``0``/``genuine`` or ``1``/``forgery``)
selects the rows; two-sample commands can instead split one such file
into its two classes.  Any other width needs ``--cols`` to pick the two
data columns, by 0-based index or by name.

All output uses fixed decimal formatting with six digits and no
colour, so it is locale-independent and safe to parse.

Exit codes: 0 success; 1 usage error; 2 data error (unreadable or
malformed input); 3 numerical failure (solver non-convergence, singular
constraint covariance, negative variance, or a tripped failure budget
in a study run).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from .distributions import gini_asymptotic_variance_normal
from .errors import (
    ConfigInvalid,
    DegenerateSample,
    GiniJelError,
    InvalidScatter,
    NegativeVariance,
    NonConvergence,
    OutOfRange,
    ParseError,
    SampleTooSmall,
    SingularCovariance,
)
from .inference import (
    ci_jel,
    ci_normal_asymptotic,
    ci_normal_jackknife,
    ci_pearson,
    joint_region_grid,
    test_equality,
    test_two_sample,
)
from .kernels import BivariateSample
from .simstudy import (
    coverage_config,
    equality_config,
    run_study,
    two_sample_config,
)
from .ustat import gini_delta, gini_gamma, pearson_r

_CANONICAL_NAMES = ("VW", "SW", "KW", "EI")
_CLASS_LABELS = {"0": 0, "genuine": 0, "1": 1, "forgery": 1}
_EXPECTED_CLASS_COUNTS = (762, 610)


class _UsageError(Exception):
    """An unusable command line; mapped to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 by default, which this tool reserves
    # for data errors; raise instead and let main() map it to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


# ---------------------------------------------------------------------------
# data files
# ---------------------------------------------------------------------------

class _Table:
    """A parsed data file: data columns plus optional class labels."""

    __slots__ = ("path", "header", "data", "labels")

    def __init__(self, path, header, data, labels):
        self.path = path
        self.header = header
        self.data = data
        self.labels = labels


def _is_number(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _load_table(path):
    with open(path, newline="") as fh:
        raw = list(csv.reader(fh))
    rows = [(lineno, [c.strip() for c in cells])
            for lineno, cells in enumerate(raw, start=1)
            if any(c.strip() for c in cells)]
    if not rows:
        raise ParseError(f"{path}: file is empty")

    header = None
    if not all(_is_number(c) for c in rows[0][1]):
        header = rows[0][1]
        rows = rows[1:]
        if not rows:
            raise ParseError(f"{path}: no data rows below the header")

    width = len(header) if header is not None else len(rows[0][1])
    if width < 2:
        raise ParseError(f"{path}: need at least two columns, found {width}")

    data = np.empty((len(rows), width))
    for r, (lineno, cells) in enumerate(rows):
        if len(cells) != width:
            raise ParseError(
                f"{path}: line {lineno} has {len(cells)} fields, "
                f"expected {width}", line=lineno)
        for c, cell in enumerate(cells):
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(
                    f"{path}: line {lineno}, column {c + 1}: could not "
                    f"read {cell!r} as a number", line=lineno, column=c + 1)
            if not math.isfinite(value):
                raise ParseError(
                    f"{path}: line {lineno}, column {c + 1}: non-finite "
                    f"value {cell!r}", line=lineno, column=c + 1)
            data[r, c] = value

    labels = None
    if width == 5:
        labels = _read_class_labels(path, data, rows)
        data = data[:, :4]
        if header is not None:
            header = header[:4]
    return _Table(path, header, data, labels)


def _read_class_labels(path, data, rows):
    for (lineno, cells), value in zip(rows, data[:, 4]):
        if value not in (0.0, 1.0):
            raise ParseError(
                f"{path}: line {lineno}, column 5: class label must be 0 "
                f"or 1, got {cells[4]!r}", line=lineno, column=5)
    labels = data[:, 4].astype(int)
    counts = (int((labels == 0).sum()), int((labels == 1).sum()))
    if counts[0] and counts[1]:
        if counts != _EXPECTED_CLASS_COUNTS:
            print(f"ginijel: warning: {path}: expected "
                  f"{_EXPECTED_CLASS_COUNTS[0]} genuine (class 0) and "
                  f"{_EXPECTED_CLASS_COUNTS[1]} forgery (class 1) rows, "
                  f"found {counts[0]} and {counts[1]}", file=sys.stderr)
    else:
        present = 0 if counts[0] else 1
        if counts[present] != _EXPECTED_CLASS_COUNTS[present]:
            print(f"ginijel: warning: {path}: expected "
                  f"{_EXPECTED_CLASS_COUNTS[present]} rows of class "
                  f"{present}, found {counts[present]}", file=sys.stderr)
    return labels


def _column_names(table):
    if table.header is not None:
        return table.header
    if table.labels is not None:
        return list(_CANONICAL_NAMES)
    return []


def _resolve_cols(table, cols):
    ncols = table.data.shape[1]
    if cols is None:
        if ncols == 2:
            return 0, 1
        raise OutOfRange(
            f"{table.path} has {ncols} data columns; choose two with --cols")
    parts = [p.strip() for p in cols.split(",")]
    if len(parts) != 2 or not all(parts):
        raise OutOfRange(
            f"--cols expects two comma-separated columns, got {cols!r}")
    names = [n.lower() for n in _column_names(table)]
    picked = []
    for part in parts:
        try:
            index = int(part)
        except ValueError:
            if part.lower() not in names:
                available = (", ".join(_column_names(table))
                             or f"indices 0..{ncols - 1}")
                raise OutOfRange(
                    f"no column named {part!r} in {table.path}; "
                    f"available: {available}")
            index = names.index(part.lower())
        if not 0 <= index < ncols:
            raise OutOfRange(
                f"column index {index} out of range for {table.path} "
                f"({ncols} data columns)")
        picked.append(index)
    if picked[0] == picked[1]:
        raise OutOfRange("--cols needs two different columns")
    return tuple(picked)


def _parse_class(text):
    if text is None:
        return None
    label = _CLASS_LABELS.get(text.strip().lower())
    if label is None:
        raise OutOfRange(
            f"--class must be 0, 1, genuine or forgery, got {text!r}")
    return label


def _single_sample(table, cols, klass):
    """One sample from a file, filtering by class when requested."""
    i, j = _resolve_cols(table, cols)
    if table.labels is None:
        if klass is not None:
            raise OutOfRange(
                f"--class only applies to class-labeled files; "
                f"{table.path} has no class column")
        rows = slice(None)
    elif klass is None:
        present = np.unique(table.labels)
        if len(present) > 1:
            raise OutOfRange(
                f"{table.path} mixes classes; choose one with --class")
        rows = slice(None)
    else:
        rows = table.labels == klass
        if not rows.any():
            raise SampleTooSmall(
                f"{table.path} has no rows of class {klass}")
    return BivariateSample(table.data[rows, i], table.data[rows, j])


def _split_sample(table, cols):
    """Split one class-labeled file into its two per-class samples."""
    i, j = _resolve_cols(table, cols)
    if table.labels is None:
        raise OutOfRange(
            "two-sample commands need either --file2 or a class-labeled "
            "file to split")
    first = table.labels == 0
    second = table.labels == 1
    if not (first.any() and second.any()):
        raise OutOfRange(
            f"{table.path} holds a single class; splitting needs both")
    return (BivariateSample(table.data[first, i], table.data[first, j]),
            BivariateSample(table.data[second, i], table.data[second, j]))


def _two_samples(args):
    klass = _parse_class(args.klass)
    if args.file2 is not None:
        sample1 = _single_sample(_load_table(args.file), args.cols, klass)
        sample2 = _single_sample(_load_table(args.file2), args.cols, klass)
        return sample1, sample2
    if klass is not None:
        raise OutOfRange(
            "--class conflicts with splitting one file into both classes; "
            "pass --file2 to compare chosen classes")
    return _split_sample(_load_table(args.file), args.cols)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _round6(value):
    v = float(value)
    if v != v:
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return round(v, 6)


def _emit(args, text):
    if args.out is not None:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload):
    _emit(args, json.dumps(payload, indent=2) + "\n")


def _interval_payload(ci):
    return {
        "point": _round6(ci.point),
        "lower": _round6(ci.lower),
        "upper": _round6(ci.upper),
        "level": _round6(ci.level),
        "method": ci.method,
        "target": ci.target,
        "lower_clipped": bool(ci.lower_clipped),
        "upper_clipped": bool(ci.upper_clipped),
        "non_monotone": bool(ci.non_monotone),
    }


def _check_levels(levels):
    for level in levels:
        if not 0.5 < level < 1.0:
            raise OutOfRange(
                f"confidence level must lie in (0.5, 1), got {level}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_estimate(args):
    table = _load_table(args.file)
    sample = _single_sample(table, args.cols, _parse_class(args.klass))
    _emit_json(args, {
        "gamma_xy": _round6(gini_gamma(sample)),
        "gamma_yx": _round6(gini_gamma(sample, "yx")),
        "delta": _round6(gini_delta(sample)),
        "pearson": _round6(pearson_r(sample)),
        "n": sample.n,
    })


def _asymptotic_variance(args, sample):
    if args.variance is not None:
        return args.variance
    if args.family is None:
        raise OutOfRange(
            "the asymptotic method needs --variance or --family normal")
    if args.target == "delta":
        raise OutOfRange(
            "no closed-form variance is available for the difference "
            "target; pass --variance")
    orientation = "xy" if args.target == "gamma_xy" else "yx"
    rho_hat = min(1.0, max(-1.0, gini_gamma(sample, orientation)))
    return gini_asymptotic_variance_normal(rho_hat)


def _cmd_ci(args):
    _check_levels((args.level,))
    if args.adjusted and args.method not in ("jel", "ajel"):
        raise OutOfRange("--adjusted only applies to the jel/ajel methods")
    if args.variance is not None and args.method not in ("asymptotic",
                                                         "pearson"):
        raise OutOfRange(
            "--variance only applies to the asymptotic and pearson methods")
    if args.family is not None and args.method not in ("asymptotic",
                                                       "pearson"):
        raise OutOfRange(
            "--family only applies to the asymptotic and pearson methods")

    table = _load_table(args.file)
    sample = _single_sample(table, args.cols, _parse_class(args.klass))
    if args.method == "jel":
        ci = ci_jel(sample, args.target, args.level, adjusted=args.adjusted)
    elif args.method == "ajel":
        ci = ci_jel(sample, args.target, args.level, adjusted=True)
    elif args.method == "jackknife":
        ci = ci_normal_jackknife(sample, args.target, args.level)
    elif args.method == "asymptotic":
        ci = ci_normal_asymptotic(sample, args.target, args.level,
                                  variance=_asymptotic_variance(args, sample))
    else:  # pearson
        if args.variance is not None:
            ci = ci_pearson(sample, args.level, variance_source="supplied",
                            variance=args.variance)
        else:
            ci = ci_pearson(sample, args.level)
    _emit_json(args, _interval_payload(ci))


def _cmd_test(args):
    levels = tuple(args.level) if args.level else (0.90, 0.95)
    _check_levels(levels)
    if args.mode == "equality":
        if args.file2 is not None:
            raise OutOfRange("--file2 only applies to --mode two_sample")
        table = _load_table(args.file)
        sample = _single_sample(table, args.cols, _parse_class(args.klass))
        result = test_equality(sample, adjusted=args.adjusted, levels=levels)
    else:
        sample1, sample2 = _two_samples(args)
        result = test_two_sample(sample1, sample2, adjusted=args.adjusted,
                                 levels=levels)
    _emit_json(args, {
        "statistic": _round6(result.statistic),
        "df": result.df,
        "p_value": _round6(result.p_value),
        "reject_at": {str(level): bool(reject)
                      for level, reject in result.reject_at.items()},
    })


def _parse_grid(text):
    parts = text.split(":")
    if len(parts) != 5:
        raise OutOfRange(
            f"--grid must look like x0:x1:y0:y1:res, got {text!r}")
    try:
        bounds = tuple(float(p) for p in parts[:4])
        resolution = int(parts[4])
    except ValueError:
        raise OutOfRange(
            f"--grid must hold four numbers and an integer resolution, "
            f"got {text!r}")
    return bounds, resolution


def _cmd_region(args):
    _check_levels((args.level,))
    bounds, resolution = _parse_grid(args.grid)
    sample1, sample2 = _two_samples(args)
    grid = joint_region_grid(sample1, sample2, level=args.level,
                             bounds=bounds, resolution=resolution,
                             adjusted=args.adjusted)
    lines = ["delta1,delta2,member,point_estimate"]
    for i, d1 in enumerate(grid.delta1):
        for j, d2 in enumerate(grid.delta2):
            lines.append(f"{d1:.6f},{d2:.6f},{int(grid.member[i, j])},0")
    d1_hat, d2_hat = grid.point_estimate
    lines.append(
        f"{d1_hat:.6f},{d2_hat:.6f},{int(grid.point_member)},1")
    if grid.failures:
        print(f"ginijel: note: {grid.failures} grid nodes failed "
              f"numerically and count as non-members", file=sys.stderr)
    _emit(args, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# study configs
# ---------------------------------------------------------------------------

_COMMON_KEYS = {"kind", "replications", "repeats", "levels", "methods",
                "seed"}
_KIND_KEYS = {
    "coverage": _COMMON_KEYS | {"family", "rho", "n", "targets"},
    "equality": _COMMON_KEYS | {"family", "rho", "n"},
    "two_sample": _COMMON_KEYS | {"rho", "n1", "n2"},
}
_INT_KEYS = {"n", "n1", "n2", "replications", "repeats", "seed"}
_FLOAT_KEYS = {"rho"}
_LIST_KEYS = {"levels", "methods", "targets"}


def _read_config_entries(path):
    with open(path) as fh:
        text = fh.read()
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigInvalid(
                f"{path}: line {lineno}: expected 'key = value', "
                f"got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        if key in entries:
            raise ConfigInvalid(f"{path}: duplicate config key {key!r}",
                                key=key)
        entries[key] = (lineno, value.strip())
    return entries


def _convert_config_value(path, key, lineno, value):
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _LIST_KEYS:
            parts = tuple(p.strip() for p in value.split(",") if p.strip())
            return tuple(float(p) for p in parts) if key == "levels" else parts
    except ValueError:
        raise ConfigInvalid(
            f"{path}: line {lineno}: could not read {value!r} for "
            f"config key {key!r}", key=key)
    return value


def _load_study_config(path, reps=None, repeats=None, seed=None):
    entries = _read_config_entries(path)
    known = set().union(*_KIND_KEYS.values())
    for key, (lineno, _) in entries.items():
        if key not in known:
            raise ConfigInvalid(
                f"{path}: line {lineno}: unknown config key {key!r}",
                key=key)
    if "kind" not in entries:
        raise ConfigInvalid(
            f"{path}: config must set 'kind' to coverage, equality or "
            f"two_sample", key="kind")
    kind = entries.pop("kind")[1]
    if kind not in _KIND_KEYS:
        raise ConfigInvalid(
            f"kind must be coverage, equality or two_sample, got {kind!r}",
            key="kind")
    for key, (lineno, _) in entries.items():
        if key not in _KIND_KEYS[kind]:
            raise ConfigInvalid(
                f"{path}: line {lineno}: config key {key!r} does not apply "
                f"to kind {kind!r}", key=key)

    kwargs = {key: _convert_config_value(path, key, lineno, value)
              for key, (lineno, value) in entries.items()}
    if reps is not None:
        kwargs["replications"] = reps
    if repeats is not None:
        kwargs["repeats"] = repeats
    if seed is not None:
        kwargs["seed"] = seed
    if "seed" in kwargs:
        kwargs["base_seed"] = kwargs.pop("seed")

    builder = {"coverage": coverage_config, "equality": equality_config,
               "two_sample": two_sample_config}[kind]
    return builder(**kwargs)


def _cmd_simulate(args):
    config = _load_study_config(args.config, reps=args.reps,
                                repeats=args.repeats, seed=args.seed)
    report = run_study(config, n_jobs=args.jobs)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "report.json"), "w") as fh:
        fh.write(report.to_json() + "\n")
    text = report.to_text() + "\n"
    with open(os.path.join(args.out, "report.txt"), "w") as fh:
        fh.write(text)
    sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_input_options(parser, with_file2=False):
    parser.add_argument("--file", required=True,
                        help="input CSV (two data columns, or class-labeled)")
    if with_file2:
        parser.add_argument("--file2",
                            help="second input CSV (defaults to splitting "
                                 "--file by its class column)")
    parser.add_argument("--cols",
                        help="two columns by 0-based index or name, "
                             "e.g. '0,1' or 'VW,SW'")
    parser.add_argument("--class", dest="klass", metavar="CLASS",
                        help="row class for class-labeled files: "
                             "0/genuine or 1/forgery")
    parser.add_argument("--out", help="write the result here instead of "
                                      "stdout")


def _build_parser():
    parser = _Parser(
        prog="ginijel",
        description="Nonparametric inference on Gini correlations: point "
                    "estimates, empirical-likelihood and normal-theory "
                    "confidence intervals, equality and two-sample tests, "
                    "confidence-region grids, and Monte Carlo studies.")
    sub = parser.add_subparsers(dest="command", metavar="command",
                                required=True)

    estimate = sub.add_parser(
        "estimate", help="point estimates for one sample, as JSON")
    _add_input_options(estimate)
    estimate.set_defaults(handler=_cmd_estimate)

    ci = sub.add_parser("ci", help="one confidence interval, as JSON")
    _add_input_options(ci)
    ci.add_argument("--target", default="gamma_xy",
                    choices=("gamma_xy", "gamma_yx", "delta"),
                    help="parameter the interval covers")
    ci.add_argument("--method", default="jel",
                    choices=("jel", "ajel", "jackknife", "asymptotic",
                             "pearson"),
                    help="interval construction")
    ci.add_argument("--level", type=float, default=0.90,
                    help="confidence level in (0.5, 1)")
    ci.add_argument("--adjusted", action="store_true",
                    help="use the adjusted EL statistic (same as ajel)")
    ci.add_argument("--variance", type=float,
                    help="asymptotic variance for the asymptotic/pearson "
                         "methods")
    ci.add_argument("--family", choices=("normal",),
                    help="closed-form variance family for the "
                         "asymptotic/pearson methods")
    ci.set_defaults(handler=_cmd_ci)

    test = sub.add_parser(
        "test", help="equality test on one sample, or the joint "
                     "two-sample test, as JSON")
    _add_input_options(test, with_file2=True)
    test.add_argument("--mode", required=True,
                      choices=("equality", "two_sample"),
                      help="which hypothesis to test")
    test.add_argument("--level", type=float, action="append",
                      help="decision level; repeatable "
                           "(default 0.90 and 0.95)")
    test.add_argument("--adjusted", action="store_true",
                      help="use the adjusted EL statistic")
    test.set_defaults(handler=_cmd_test)

    region = sub.add_parser(
        "region", help="joint confidence-region membership grid, as CSV")
    _add_input_options(region, with_file2=True)
    region.add_argument("--level", type=float, default=0.90,
                        help="confidence level in (0.5, 1)")
    region.add_argument("--grid", default="-1:1:-1:1:41",
                        help="grid as x0:x1:y0:y1:res within [-2, 2]")
    region.add_argument("--adjusted", action="store_true",
                        help="use the adjusted EL statistic")
    region.set_defaults(handler=_cmd_region)

    simulate = sub.add_parser(
        "simulate", help="run a Monte Carlo study from a config file")
    simulate.add_argument("--config", required=True,
                          help="key = value study description")
    simulate.add_argument("--out", required=True,
                          help="directory for report.json and report.txt")
    simulate.add_argument("--reps", type=int,
                          help="override the configured replications")
    simulate.add_argument("--repeats", type=int,
                          help="override the configured repeats")
    simulate.add_argument("--seed", type=int,
                          help="override the configured seed")
    simulate.add_argument("--jobs", type=int, default=1,
                          help="parallel workers (results do not depend "
                               "on this)")
    simulate.set_defaults(handler=_cmd_simulate)
    return parser


def _glue_grid_value(argv):
    # argparse reads a detached grid value such as '-0.5:0.5:-0.5:0.5:9'
    # as an option because of the leading dash; the '=' form is immune.
    glued = []
    tokens = iter(argv)
    for token in tokens:
        if token == "--grid":
            value = next(tokens, None)
            glued.append(token if value is None else f"--grid={value}")
        else:
            glued.append(token)
    return glued


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    try:
        args = parser.parse_args(_glue_grid_value(argv))
    except _UsageError as exc:
        print(f"ginijel: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if not exc.code else 1
    try:
        args.handler(args)
        return 0
    except (NonConvergence, SingularCovariance, NegativeVariance) as exc:
        return _fail(exc, 3)
    except (ParseError, SampleTooSmall, DegenerateSample, OSError) as exc:
        return _fail(exc, 2)
    except (ConfigInvalid, OutOfRange, InvalidScatter, ValueError) as exc:
        return _fail(exc, 1)
    except GiniJelError as exc:
        return _fail(exc, 3)


def _fail(exc, code):
    print(f"ginijel: error: {exc}", file=sys.stderr)
    return code


def entry_point():
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry_point()
