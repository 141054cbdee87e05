"""Command-line front end.

Subcommands: ``expected-zeros``, ``asymptotics``, ``montecarlo``, ``puiseux``
and ``region``. Exit status is 0 on success, 2 on invalid input and 3 on a
numerical failure; output files are written atomically.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .covariance import (
    Covariance,
    binomial_covariance,
    classify_region,
    from_gamma,
    in_region,
    two_dependent,
)
from .errors import NumericalError, ValidationError
from .expected_zeros import Method, expected_zeros
from .montecarlo import McConfig, empirical_expected_zeros
from .puiseux import empirical_asymptotics, general_exponent, predicted_root
from .rootfind import track_branches

log = logging.getLogger("gafzeros")

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _num(v: complex) -> str:
    return repr(v.real) if v.imag == 0 else repr(v)


class Cov:
    """A parsed covariance together with its textual descriptor."""

    def __init__(self, cov: Covariance, label: str, ab=None):
        self.cov, self.label, self.ab = cov, label, ab


def parse_cov(args) -> Cov:
    if args.two_dependent is not None:
        a, b = args.two_dependent
        return Cov(two_dependent(a, b), f"two_dependent({a!r},{b!r})", (a, b))
    if args.binomial is not None:
        return Cov(binomial_covariance(args.binomial), f"binomial({args.binomial})")
    if args.gamma is not None:
        vals = [complex(v.replace(" ", "")) for v in args.gamma.split(",")]
        return Cov(from_gamma(vals), "gamma(" + ",".join(_num(v) for v in vals) + ")")
    if args.cov_json is not None:
        with open(args.cov_json) as fh:
            cov = Covariance.from_json(fh.read())
        from .covariance import check_positive_definite

        check_positive_definite(cov)
        return Cov(cov, f"json({os.path.basename(args.cov_json)})")
    raise ValidationError("a covariance is required (--two-dependent, --binomial, --gamma or --cov-json)")


def parse_grid(spec: str) -> np.ndarray:
    """``log1m:S0,S1,COUNT`` (uniform in log(1 - r^2)) or ``linear:R0,R1,COUNT``."""
    kind, _, body = spec.partition(":")
    try:
        lo, hi, count = body.split(",")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise ValidationError(f"malformed grid spec {spec!r}") from None
    if kind == "log1m":
        if lo <= 0 or hi <= 0 or lo >= 1 or hi >= 1:
            raise ValidationError("log1m bounds are values of 1 - r^2 in (0, 1)")
        r = np.sqrt(1.0 - np.logspace(math.log10(lo), math.log10(hi), count))
    elif kind == "linear":
        r = np.linspace(lo, hi, count)
    else:
        raise ValidationError(f"unknown grid spacing {kind!r}")
    if np.any(r <= 0) or np.any(r >= 1):
        raise ValidationError("r grid must lie inside (0, 1)")
    return r


def parse_range(spec: str) -> np.ndarray:
    try:
        lo, hi, count = spec.split(":")
        return np.linspace(float(lo), float(hi), int(count))
    except ValueError:
        raise ValidationError(f"malformed range {spec!r}, expected LO:HI:COUNT") from None


def r_values(args) -> np.ndarray:
    if args.r_grid:
        return parse_grid(args.r_grid)
    if args.r:
        return np.array(args.r, dtype=float)
    raise ValidationError("give --r or --r-grid")


def emit(args, rows: list, columns: list):
    if args.format == "json":
        text = json.dumps(rows, indent=2, default=str) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(row.get(c)) for c in columns])
        text = buf.getvalue()
    write_output(args.output, text)


def write_output(path, text: str):
    if not path:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def cmd_expected_zeros(args):
    c = parse_cov(args)
    methods = [Method(m) for m in (args.method or ["residue"])]
    jobs = [(r, m) for r in r_values(args) for m in methods]

    def run(job):
        r, m = job
        res = expected_zeros(c.cov, float(r), m)
        d = res.diagnostics
        resid = d.get("root_residual", abs(d.get("imag", 0.0)))
        return {
            "cov": c.label,
            "a": c.ab[0] if c.ab else None,
            "b": c.ab[1] if c.ab else None,
            "r": res.r,
            "baseline": res.baseline,
            "correction": res.correction,
            "total": res.total,
            "method": m.value,
            "residual": float(resid),
        }

    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        rows = list(pool.map(run, jobs))
    emit(args, rows, ["cov", "a", "b", "r", "baseline", "correction", "total", "method", "residual"])


def cmd_asymptotics(args):
    c = parse_cov(args)
    pred = general_exponent(c.cov)
    out = {
        "cov": c.label,
        "case_label": pred.case_label,
        "alpha": pred.alpha,
        "alpha_fraction": str(pred.exponent),
        "constant": pred.constant,
    }
    if args.sweep:
        s = np.sort(1.0 - parse_grid("log1m:" + args.sweep) ** 2)[::-1]
        emp = empirical_asymptotics(c.cov, s, pred)
        out["empirical"] = {
            "s": emp.s.tolist(),
            "correction": emp.correction.tolist(),
            "alpha": emp.exponent,
            "constant": emp.constant,
            "alpha_abs_error": abs(emp.exponent - pred.alpha),
            "constant_rel_error": (
                abs(emp.constant - pred.constant) / pred.constant if pred.constant else None
            ),
        }
    if args.format == "csv":
        emit(args, [out], ["cov", "case_label", "alpha", "alpha_fraction", "constant"])
    else:
        write_output(args.output, json.dumps(out, indent=2) + "\n")


def cmd_montecarlo(args):
    c = parse_cov(args)
    rows = []
    for r in r_values(args):
        cfg = McConfig(
            r=float(r), trials=args.trials, seed=args.seed,
            truncation=args.truncation, diagnostics=args.diagnostics,
        )
        rep = empirical_expected_zeros(c.cov, cfg)
        analytic = expected_zeros(c.cov, float(r)).total
        z = (rep.mean - analytic) / rep.stderr if rep.stderr > 0 else None
        rows.append({
            "cov": c.label, "r": rep.r, "N": rep.truncation, "trials": rep.trials,
            "seed": rep.seed, "mean": rep.mean, "stderr": rep.stderr,
            "analytic": analytic, "z_score": z, "tail_bound": rep.tail_bound,
            "winding_mismatches": rep.winding_mismatches,
        })
    emit(args, rows, ["cov", "r", "N", "trials", "seed", "mean", "stderr", "analytic", "z_score"])


def cmd_puiseux(args):
    n = args.n
    r = np.sort(parse_grid(args.r_grid))
    cov = binomial_covariance(n)
    track = track_branches(cov, r)
    # label tracked branches by their closest Puiseux prediction at the last r
    pred_last = np.array([predicted_root(n, j, r[-1]) for j in range(2 * n)])
    from scipy.optimize import linear_sum_assignment

    rows_, cols_ = linear_sum_assignment(np.abs(track.branches[:, -1][:, None] - pred_last[None, :]))
    label = dict(zip(rows_, cols_))
    rows = []
    for m, rv in enumerate(r):
        for b in range(2 * n):
            j = int(label[b])
            z = track.branches[b, m]
            p = predicted_root(n, j, rv)
            rows.append({
                "n": n, "r": rv, "one_minus_r": 1.0 - rv, "branch": j,
                "tracked_re": z.real, "tracked_im": z.imag,
                "predicted_re": p.real, "predicted_im": p.imag, "error": abs(z - p),
            })
    emit(args, rows, ["n", "r", "one_minus_r", "branch", "tracked_re", "tracked_im",
                      "predicted_re", "predicted_im", "error"])


def cmd_region(args):
    rows = []
    for b in parse_range(args.b):
        for a in parse_range(args.a):
            rows.append({
                "a": float(a), "b": float(b),
                "label": classify_region(a, b).value, "in_region": int(in_region(a, b)),
            })
    emit(args, rows, ["a", "b", "label", "in_region"])


def _add_cov_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--two-dependent", nargs=2, type=float, metavar=("A", "B"))
    g.add_argument("--binomial", type=int, metavar="N")
    g.add_argument("--gamma", help="comma-separated gamma(0..n), Python complex syntax")
    g.add_argument("--cov-json", help='file with {"n": int, "gamma": [[re, im], ...]}')


def _add_r_flags(p):
    p.add_argument("--r", type=float, action="append")
    p.add_argument("--r-grid", help="log1m:S0,S1,COUNT or linear:R0,R1,COUNT")


def _add_common(p):
    # added per subcommand: argparse parents share action objects, so
    # set_defaults on one subparser would leak into the others
    p.add_argument("--output", help="output path (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--config", help="JSON file of option defaults; flags win")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gafzeros", description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = _add_common(sub.add_parser("expected-zeros"))
    _add_cov_flags(p)
    _add_r_flags(p)
    p.add_argument("--method", action="append", choices=[m.value for m in Method])
    p.set_defaults(func=cmd_expected_zeros)

    p = _add_common(sub.add_parser("asymptotics"))
    _add_cov_flags(p)
    p.add_argument("--sweep", metavar="S0,S1,COUNT", help="attach a fitted sweep over 1 - r^2")
    p.set_defaults(func=cmd_asymptotics, format="json")

    p = _add_common(sub.add_parser("montecarlo"))
    _add_cov_flags(p)
    _add_r_flags(p)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--truncation", type=int)
    p.add_argument("--diagnostics", action="store_true")
    p.set_defaults(func=cmd_montecarlo)

    p = _add_common(sub.add_parser("puiseux"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r-grid", required=True)
    p.set_defaults(func=cmd_puiseux)

    p = _add_common(sub.add_parser("region"))
    p.add_argument("--a", default="-1:1:201")
    p.add_argument("--b", default="-0.6:0.6:121")
    p.set_defaults(func=cmd_region)
    return parser


_VALUE_FLAGS = ("--a", "--b", "--gamma", "--r-grid", "--sweep")


def _glue_values(argv):
    """Turn ``--a -1:1:201`` into ``--a=-1:1:201``.

    argparse reads a value starting with ``-`` that is not a plain number as
    an option, which rules out ranges and lists with a negative first entry.
    """
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _with_config(parser, argv):
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    args = parser.parse_args(argv)
    if not args.config:
        return args
    with open(args.config) as fh:
        cfg = json.load(fh)
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    subparser.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()})
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _with_config(parser, argv)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
