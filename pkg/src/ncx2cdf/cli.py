"""Command-line front end.

Subcommands: ``eval``, ``compare``, ``scan``, ``bench``, ``selftest``.

Exit codes: 0 success, 1 self-test failure, 2 domain error, 3 non-convergence,
64 malformed arguments, 74 I/O error.
"""

import argparse
import csv
import io
import json
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import ncx2, oracle, selftest
from ._jit import backend
from .base import DomainError, EvalPolicy, NonConvergenceError

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_DOMAIN = 2
EXIT_NONCONV = 3
EXIT_USAGE = 64
EXIT_IO = 74

FIELDS = ("nu", "lambda", "x", "method", "value", "converged", "terms", "time_ns", "delta_vs_oracle")
BENCH_FIELDS = ("nu", "lambda", "x", "method", "median_ns", "iqr_ns", "rel_speed", "delta_vs_oracle")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- grids -------------------------------------------------------------------


def parse_values(text, allow_lam=False):
    """``"0.25,1,4"`` or the log-spaced range ``"min:max:count"``; ``lam`` means x = lambda."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"range must be min:max:count, got {text!r}")
        try:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise UsageError(f"malformed range {text!r}") from None
        if not (lo > 0 and hi > 0 and count >= 1):
            raise UsageError(f"log range needs positive bounds and count >= 1, got {text!r}")
        if count == 1:
            return (lo,)
        return tuple(float(v) for v in np.geomspace(lo, hi, count))
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if allow_lam and tok in ("lam", "lambda"):
            out.append("lam")
            continue
        try:
            out.append(float(tok))
        except ValueError:
            raise UsageError(f"not a number: {tok!r}") from None
    if not out:
        raise UsageError("empty value list")
    return tuple(out)


@dataclass(frozen=True)
class GridSpec:
    """Cartesian (nu, lambda, x) grid; an x entry ``"lam"`` stands for x = lambda."""

    nu_values: tuple
    lambda_values: tuple
    x_values: tuple

    def __post_init__(self):
        for name in ("nu_values", "lambda_values", "x_values"):
            if not getattr(self, name):
                raise UsageError(f"{name} must be nonempty")

    def points(self):
        for nu in self.nu_values:
            for lam in self.lambda_values:
                for x in self.x_values:
                    yield nu, lam, (lam if x == "lam" else x)


def parse_methods(text):
    if text in (None, "", "all"):
        return list(ncx2.ALL_METHODS)
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok == "auto":
            out.append("auto")
            continue
        try:
            out.append(ncx2.CdfMethod(tok))
        except ValueError:
            raise UsageError(f"unknown method {tok!r}; choose from {[m.value for m in ncx2.ALL_METHODS]}") from None
    return out


# -- evaluation ----------------------------------------------------------------


def _policy(args):
    try:
        pol = EvalPolicy.from_env()
        if getattr(args, "rtol", None) is not None:
            pol = EvalPolicy(args.rtol, pol.abs_tol, pol.max_terms)
        if getattr(args, "max_terms", None) is not None:
            pol = EvalPolicy(pol.rel_tol, pol.abs_tol, args.max_terms)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return pol


def reference_value(nu, lam, x, mode, mc_samples, seed):
    if mode == "none":
        return None
    if mode == "quad":
        return oracle.quad_cdf(nu, lam, x)
    if not float(nu).is_integer():
        return None
    return oracle.mc_cdf(int(nu), lam, x, oracle.McConfig(mc_samples, seed))[0]


def evaluate_point(task):
    """All rows for one grid point; runs in worker processes for ``--jobs``."""
    nu, lam, x, methods, policy, mode, mc_samples, seed = task
    try:
        ref = reference_value(nu, lam, x, mode, mc_samples, seed)
    except Exception:  # noqa: BLE001 - the oracle failing must not abort the scan
        ref = None
    params = ncx2.Ncx2Params(nu, lam, x)
    rows = []
    for m in methods:
        name = str(ncx2.auto_method(params)) if m == "auto" else str(m)
        row = {"nu": nu, "lambda": lam, "x": x, "method": name, "value": None, "converged": None,
               "terms": None, "time_ns": None, "delta_vs_oracle": None}
        if m != "auto" and ncx2.domain_error(m, params):
            row["converged"] = "skipped"
            rows.append(row)
            continue
        try:
            rep = ncx2.cdf(params, m, policy, ref)
        except DomainError:
            row["converged"] = "skipped"
        except NonConvergenceError:
            row["converged"] = "false"
        else:
            row.update(value=rep.value, converged="true", terms=rep.terms_or_panels, time_ns=rep.wall_time_ns,
                       delta_vs_oracle=None if ref is None else rep.discrepancy_vs_reference)
        rows.append(row)
    return rows, ref


def _run_grid(grid, methods, policy, mode, mc_samples, seed, jobs):
    tasks = [(nu, lam, x, methods, policy, mode, mc_samples, seed) for nu, lam, x in grid.points()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(evaluate_point, tasks))  # map keeps grid order
    else:
        results = [evaluate_point(t) for t in tasks]
    return results


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(rows, fmt, fields=FIELDS, timing=True):
    if not timing:
        rows = [{**r, "time_ns": None} if "time_ns" in r else r for r in rows]
    if fmt == "json":
        return json.dumps([{k: r.get(k) for k in fields} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        for r in rows:
            w.writerow([_fmt(r.get(k)) for k in fields])
        return buf.getvalue()
    table = [[str(f) for f in fields]] + [[_fmt(r.get(k)) for k in fields] for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(fields))]
    for row in table:
        buf.write("  ".join(c.ljust(wd) for c, wd in zip(row, widths)).rstrip() + "\n")
    return buf.getvalue()


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# -- subcommands ---------------------------------------------------------------


def cmd_eval(args):
    policy = _policy(args)
    params = ncx2.Ncx2Params(args.nu, args.lam, args.x)
    rep = ncx2.cdf(params, args.method, policy)
    print(format(rep.value, ".17g"))
    if args.verbose:
        print(f"method={rep.method} terms={rep.terms_or_panels} time_ns={rep.wall_time_ns}", file=sys.stderr)
    return EXIT_OK


def cmd_compare(args):
    policy = _policy(args)
    params = ncx2.Ncx2Params(args.nu, args.lam, args.x)
    methods = ncx2.applicable_methods(params)
    rows, ref = evaluate_point((args.nu, args.lam, args.x, methods, policy, args.oracle,
                                args.mc_samples, args.seed))
    if ref is not None:
        rows.append({"nu": args.nu, "lambda": args.lam, "x": args.x, "method": f"oracle-{args.oracle}",
                     "value": ref, "converged": "true", "terms": None, "time_ns": None, "delta_vs_oracle": 0.0})
    _emit(render(rows, args.format, timing=not args.no_timing), None)
    return EXIT_OK if any(r["converged"] == "true" for r in rows) else EXIT_NONCONV


def _grid_from(args):
    return GridSpec(parse_values(args.nu), parse_values(args.lam), parse_values(args.x, allow_lam=True))


def cmd_scan(args):
    policy = _policy(args)
    grid = _grid_from(args)
    methods = parse_methods(args.methods)
    results = _run_grid(grid, methods, policy, args.oracle, args.mc_samples, args.seed, args.jobs)
    rows = [row for point_rows, _ in results for row in point_rows]
    _emit(render(rows, args.format, timing=not args.no_timing), args.out)
    return EXIT_OK


def _quartiles(samples):
    if len(samples) < 2:
        return samples[0], 0
    q = statistics.quantiles(samples, n=4, method="inclusive")
    return statistics.median(samples), q[2] - q[0]


def cmd_bench(args):
    if args.repetitions < 3:
        raise UsageError("--repetitions must be >= 3")
    policy = _policy(args)
    grid = _grid_from(args)
    methods = parse_methods(args.methods)
    rows = []
    for nu, lam, x in grid.points():
        params = ncx2.Ncx2Params(nu, lam, x)
        ref = reference_value(nu, lam, x, args.oracle, args.mc_samples, args.seed)
        point = []
        for m in methods:
            if ncx2.domain_error(m, params):
                continue
            try:
                rep = ncx2.cdf(params, m, policy)  # warm-up (compiles kernels on first use)
                times = []
                for _ in range(args.repetitions):
                    t0 = time.perf_counter_ns()
                    ncx2.cdf(params, m, policy)
                    times.append(time.perf_counter_ns() - t0)
            except (DomainError, NonConvergenceError):
                continue
            med, iqr = _quartiles(times)
            point.append({"nu": nu, "lambda": lam, "x": x, "method": str(m), "median_ns": float(med),
                          "iqr_ns": float(iqr), "rel_speed": None,
                          "delta_vs_oracle": None if ref is None else abs(rep.value - ref)})
        base = next((r["median_ns"] for r in point if r["method"] == str(ncx2.CdfMethod.MARCUM_QUAD)), None)
        for r in point:
            r["rel_speed"] = base / r["median_ns"] if base and r["median_ns"] > 0 else None
        rows.extend(point)
    _emit(render(rows, args.format, BENCH_FIELDS), args.out)
    if args.format == "table":
        print(f"\nbackend={backend()} repetitions={args.repetitions}", file=sys.stderr)
        by_method = {}
        for r in rows:
            by_method.setdefault(r["method"], []).append(r["median_ns"])
        for m, vals in by_method.items():
            print(f"  {m:16s} median of medians {statistics.median(vals) / 1e3:10.1f} us", file=sys.stderr)
    return EXIT_OK


def cmd_selftest(args):
    results = selftest.run(args.level)
    failed = False
    for r in results:
        status = "ok" if r.ok else "FAIL"
        print(f"{r.name:14s} {status:4s} passed={r.passed} failed={len(r.failures)}")
        for f in r.failures[:20]:
            print(f"    {f}")
        failed = failed or not r.ok
    return EXIT_SELFTEST if failed else EXIT_OK


# -- parser ----------------------------------------------------------------------


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _add_policy(p):
    p.add_argument("--rtol", type=float, help="series relative tolerance (default 1e-14, env NCX2_EVAL_RTOL)")
    p.add_argument("--max-terms", type=_positive_int, help="series term budget (default 10000)")


def _add_oracle(p):
    p.add_argument("--oracle", choices=("quad", "mc", "none"), default="quad", help="reference for delta_vs_oracle")
    p.add_argument("--mc-samples", type=_positive_int, default=1_000_000)
    p.add_argument("--seed", type=int, default=42)


def _add_grid(p):
    p.add_argument("--nu", required=True, help="list a,b,c or log range min:max:count")
    p.add_argument("--lambda", dest="lam", required=True, help="list or log range")
    p.add_argument("--x", required=True, help="list or log range; 'lam' means x = lambda")
    p.add_argument("--methods", default="all", help="comma-separated method names or 'all'")
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")


def build_parser():
    parser = _Parser(prog="ncx2cdf", description="Non-central chi-square CDF through nine representations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    method_names = ["auto"] + [m.value for m in ncx2.ALL_METHODS]

    p = sub.add_parser("eval", help="evaluate one CDF value")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--method", choices=method_names, default="auto")
    p.add_argument("-v", "--verbose", action="store_true", help="print method and diagnostics to stderr")
    _add_policy(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="all applicable methods at one point")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.add_argument("--no-timing", action="store_true", help="blank the time_ns column")
    _add_oracle(p)
    _add_policy(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("scan", help="evaluate a grid to CSV or JSON")
    _add_grid(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--no-timing", action="store_true", help="blank the time_ns column")
    p.add_argument("--jobs", type=_positive_int, default=1, help="worker processes")
    _add_oracle(p)
    _add_policy(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bench", help="time each method over a grid")
    _add_grid(p)
    p.add_argument("--repetitions", type=int, default=5)
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    _add_oracle(p)
    _add_policy(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("selftest", help="run the invariant suites")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ncx2cdf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"ncx2cdf: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NonConvergenceError as exc:
        print(f"ncx2cdf: non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    except OSError as exc:
        print(f"ncx2cdf: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
