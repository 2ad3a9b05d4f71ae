"""Command line interface: ``permconc gen|tails|bounds|verify``.

Data goes to stdout (or ``--out``), diagnostics to stderr. Exit status is
0 on success, 1 when a verification check fails, 2 on usage or input
errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import arrays, bounds, exchange, montecarlo, oracle
from .permutations import make_stream, sample_uniform_batch
from .statistics import mean_t1, mean_t2, mean_t3, t1, t2_batch

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SUITES = (
    "drift-t1",
    "drift-t2",
    "exchange-t1",
    "exchange-t2",
    "vbound-t1",
    "moments-t2",
    "oracle-tails",
)
TOL = 1e-12


class UsageError(Exception):
    pass


def parse_grid(spec: str) -> np.ndarray:
    """Parse ``"a:b:step"`` into ``a, a+step, ...`` up to and including b.

    Points are computed as ``a + k*step`` (no accumulated rounding); b is
    included when it lies on the grid up to a relative 1e-9 slack.
    """
    try:
        a, b, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise UsageError(f"bad grid {spec!r}; expected 'a:b:step'") from None
    if step <= 0 or b < a or a < 0:
        raise UsageError(f"bad grid {spec!r}; need 0 <= a <= b and step > 0")
    count = math.floor((b - a) / step * (1 + 1e-9) + 1e-9) + 1
    return a + step * np.arange(count)


def _float_list(spec: str) -> list[float]:
    path = Path(spec)
    text = path.read_text() if path.is_file() else spec
    text = text.strip()
    if text.startswith("["):
        return [float(x) for x in json.loads(text)]
    return [float(x) for x in text.replace(",", " ").split()]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


# gen --------------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.kind == "constant":
        if args.c is None:
            raise UsageError("--c is required for --kind constant")
        arr = arrays.make_constant(args.n, args.c, args.dims)
    elif args.kind == "uniform":
        arr = arrays.make_uniform_random(args.n, args.seed, args.dims)
    elif args.kind == "footrule":
        if args.dims != 2:
            raise UsageError("footrule arrays are 2-dimensional (--dims 2)")
        arr = arrays.make_footrule(args.n)
    else:
        if args.dims != 2:
            raise UsageError("product arrays are 2-dimensional (--dims 2)")
        if args.cvec is None or args.dvec is None:
            raise UsageError("--cvec and --dvec are required for --kind product")
        arr = arrays.make_product(_float_list(args.cvec), _float_list(args.dvec))
    text = json.dumps(arrays.array_to_json(arr)) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# tails ------------------------------------------------------------------


def cmd_tails(args) -> int:
    arr = arrays.load_array(args.array)
    est = montecarlo.estimate_tail(
        arr, args.stat, parse_grid(args.t), args.samples, args.seed, threads=args.threads
    )
    if args.format == "json":
        text = json.dumps(est.to_json(), indent=1) + "\n"
    else:
        text = est.to_csv()
    _emit(text, args.out)
    return EXIT_OK


# bounds -----------------------------------------------------------------


def cmd_bounds(args) -> int:
    if args.mode == "sweep":
        if args.stat != "t1":
            raise UsageError("bounds sweep supports --stat t1 only")
        if args.n_list is None or args.lam is None:
            raise UsageError("bounds sweep needs --lambda and --n-list")
        ns = [int(x) for x in args.n_list.replace(",", " ").split()]
        rows = bounds.sweep_t1(args.lam, ns, args.mean_scale)
        keys = ["n", "t", "bound", "exponent", "ratio"]
        if args.format == "json":
            text = json.dumps(rows, indent=1) + "\n"
        else:
            text = _csv(keys, ([r[k] for k in keys] for r in rows))
        _emit(text, args.out)
        return EXIT_OK

    if args.mean is None or args.t is None:
        raise UsageError("bounds needs --mean and --t")
    if args.stat in ("t1", "t2") and args.n is None:
        raise UsageError(f"--n is required for --stat {args.stat}")
    spec = bounds.BoundSpec(args.stat, args.n or 0, args.mean, variant=args.variant)
    curve = bounds.bound_curve(spec, parse_grid(args.t))
    if args.format == "json":
        text = json.dumps([list(p) for p in curve]) + "\n"
    else:
        text = _csv(["t", "bound"], curve)
    _emit(text, args.out)
    return EXIT_OK


# verify -----------------------------------------------------------------


def _check(name, discrepancy, tolerance, passed=None, **extra) -> dict:
    discrepancy = float(discrepancy)
    if passed is None:
        passed = discrepancy <= tolerance
    return {"name": name, "passed": bool(passed), "discrepancy": discrepancy,
            "tolerance": tolerance, **extra}


def _sampled_states(n: int, count: int, seed: int, key: int, pairs: bool):
    rng = make_stream(seed, 1000 + key)
    sig = sample_uniform_batch(n, count, rng)
    if not pairs:
        return sig
    return sig, sample_uniform_batch(n, count, rng)


def _sigmas(n: int, trials: int, seed: int) -> np.ndarray:
    if n <= oracle.CAPS["t1"]:
        return oracle.all_permutations(n)
    return _sampled_states(n, trials, seed, 0, pairs=False)


def _suite_drift_t1(a3, ctx):
    n = a3.n
    mu = mean_t1(a3)
    worst = 0.0
    for s in _sigmas(n, ctx.trials, ctx.seed):
        worst = max(worst, abs(exchange.cond_drift_t1(a3, s) - 2 / n * (t1(a3, s) - mu)))
    return [_check("drift-t1", worst, TOL)]


def _suite_drift_t2(a3, ctx):
    _need3(a3.n)
    sig, pi = _sampled_states(a3.n, ctx.trials, ctx.seed, 1, pairs=True)
    worst = max(
        abs(exchange.cond_drift_t2(a3, s, p) - exchange.drift_t2_closed_form(a3, s, p))
        for s, p in zip(sig, pi)
    )
    return [_check("drift-t2", worst, TOL)]


def _suite_exchange_t1(a3, ctx):
    oracle._cap("exchange-t1", a3.n)
    mutation = "half-swap" if ctx.negative_control else None
    d = oracle.verify_exchangeable_t1(a3, mutation)
    return [_check("exchange-t1", d, 0.0, mutation=mutation)]


def _suite_exchange_t2(a3, ctx):
    _need3(a3.n)
    oracle._cap("exchange-t2", a3.n)
    mutation = "half-cycle" if ctx.negative_control else None
    d = oracle.verify_exchangeable_t2(a3, mutation)
    return [_check("exchange-t2", d, 0.0, mutation=mutation)]


def _suite_vbound_t1(a3, ctx):
    n = a3.n
    mu = mean_t1(a3)
    worst = -math.inf
    for s in _sigmas(n, ctx.trials, ctx.seed):
        excess = exchange.v_t1(a3, s) - n * (exchange.f_t1(a3, s) + 2 * mu)
        worst = max(worst, excess)
    return [_check("vbound-t1", max(worst, 0.0), TOL, max_excess=worst)]


def _suite_moments_t2(a3, ctx):
    n = a3.n
    _need3(n)
    mu = mean_t2(a3)
    sig, pi = _sampled_states(n, ctx.trials, ctx.seed, 2, pairs=True)
    t2v = t2_batch(a3, sig, pi)
    ex1 = ex2 = exv = -math.inf
    for s, p, tv in zip(sig, pi, t2v):
        m1, m2 = exchange.moment_bounds_t2(a3, s, p)
        b1, b2 = exchange.moment_upper_bounds_t2(n, tv, mu)
        ex1, ex2 = max(ex1, m1 - b1), max(ex2, m2 - b2)
        env = exchange.v_t2_envelope(n, exchange.f_t2_state(a3, s, p), mu)
        exv = max(exv, exchange.v_t2_state(a3, s, p) - env)
    return [
        _check("moments-t2-abs", max(ex1, 0.0), TOL, max_excess=ex1),
        _check("moments-t2-sq", max(ex2, 0.0), TOL, max_excess=ex2),
        _check("vbound-t2", max(exv, 0.0), TOL, max_excess=exv),
    ]


def _tail_checks(name, a, kind, bound_fn, ctx, threshold=None):
    dist = oracle.exact_distribution(a, kind)
    center = montecarlo.closed_form_mean(a, kind)
    upper = float(np.max(np.abs(dist.values - center)))
    grid = 0.25 * np.arange(math.floor(upper / 0.25) + 2)
    exact = np.array([float(x) for x in oracle.exact_tails(dist, center, grid)])
    bnd = np.array([bound_fn(t) for t in grid])
    mask = grid > threshold if threshold is not None else np.ones(grid.size, bool)
    violation = float(np.max(np.where(mask, exact - bnd, 0.0), initial=0.0))
    checks = [_check(f"{name}-domination", violation, 0.0, grid_points=int(mask.sum()))]
    est = montecarlo.estimate_tail(a, kind, grid, ctx.samples, ctx.seed, threads=ctx.threads)
    misses = int(np.sum((exact < est.ci_low) | (exact > est.ci_high)))
    allowed = max(1, grid.size // 100)
    checks.append(_check(f"{name}-coverage", misses, allowed, samples=ctx.samples))
    return checks


def _suite_oracle_tails(a3, ctx):
    n = a3.n
    a2 = arrays.make_uniform_random(n, ctx.seed, 2)
    checks = []
    oracle._cap("t1", n)
    checks += _tail_checks("oracle-t3", a2, "t3", lambda t: bounds.bound_t3(t, mean_t3(a2)), ctx)
    checks += _tail_checks("oracle-t1", a3, "t1", lambda t: bounds.bound_t1(t, n, mean_t1(a3)), ctx)
    if 3 <= n <= oracle.CAPS["t2"]:
        mu = mean_t2(a3)
        thr = 3 + exchange.sandwich_width(n, mu)
        checks += _tail_checks(
            "oracle-t2", a3, "t2", lambda t: bounds.bound_t2(t, n, mu), ctx, threshold=thr
        )
    return checks


SUITE_FUNCS = {
    "drift-t1": _suite_drift_t1,
    "drift-t2": _suite_drift_t2,
    "exchange-t1": _suite_exchange_t1,
    "exchange-t2": _suite_exchange_t2,
    "vbound-t1": _suite_vbound_t1,
    "moments-t2": _suite_moments_t2,
    "oracle-tails": _suite_oracle_tails,
}


def _need3(n: int) -> None:
    if n < 3:
        raise UsageError(f"this suite needs n >= 3, got n={n}")


def cmd_verify(args) -> int:
    if args.array:
        a3 = arrays.load_array(args.array)
        if a3.dims != 3:
            raise UsageError("verify --array needs a 3-d array")
    else:
        if args.n is None:
            raise UsageError("verify needs --n or --array")
        a3 = arrays.make_uniform_random(args.n, args.seed, 3)
    names = SUITES if args.suite == "all" else (args.suite,)
    results = []
    for name in names:
        try:
            checks = SUITE_FUNCS[name](a3, args)
        except (oracle.EnumerationCapError, UsageError) as exc:
            if args.suite != "all":
                raise
            results.append({"suite": name, "skipped": str(exc), "checks": []})
            continue
        results.append({"suite": name, "checks": checks})
    passed = all(c["passed"] for r in results for c in r["checks"])
    report = {
        "n": a3.n,
        "seed": args.seed,
        "trials": args.trials,
        "negative_control": args.negative_control,
        "passed": passed,
        "suites": results,
    }
    _emit(json.dumps(report, indent=1) + "\n", args.out)
    for r in results:
        if "skipped" in r:
            print(f"SKIP {r['suite']}: {r['skipped']}", file=sys.stderr)
        for c in r["checks"]:
            mark = "PASS" if c["passed"] else "FAIL"
            print(f"{mark} {c['name']}: {c['discrepancy']:.3g} (tol {c['tolerance']})", file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


# parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="permconc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    threads = argparse.ArgumentParser(add_help=False)
    threads.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                         help="worker threads (results do not depend on it)")

    g = sub.add_parser("gen", parents=[threads], help="generate a coefficient array")
    g.add_argument("--kind", required=True, choices=["constant", "uniform", "footrule", "product"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--dims", type=int, choices=[2, 3], default=3)
    g.add_argument("--c", type=float)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--cvec", help="comma-separated values or a file")
    g.add_argument("--dvec", help="comma-separated values or a file")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("tails", parents=[threads], help="Monte Carlo tail estimates")
    t.add_argument("--array", required=True)
    t.add_argument("--stat", required=True, choices=["t1", "t2", "t3"])
    t.add_argument("--samples", type=int, required=True)
    t.add_argument("--seed", type=int, required=True)
    t.add_argument("--t", required=True, help="grid 'a:b:step'")
    t.add_argument("--format", choices=["csv", "json"], default="csv")
    t.add_argument("--out")
    t.set_defaults(func=cmd_tails)

    b = sub.add_parser("bounds", parents=[threads], help="evaluate tail bounds")
    b.add_argument("mode", nargs="?", choices=["curve", "sweep"], default="curve")
    b.add_argument("--stat", required=True, choices=["t1", "t2", "t3"])
    b.add_argument("--n", type=int)
    b.add_argument("--mean", type=float)
    b.add_argument("--t", help="grid 'a:b:step'")
    b.add_argument("--variant", choices=["nominal", "finite_n"], default="nominal")
    b.add_argument("--lambda", dest="lam", type=float)
    b.add_argument("--n-list")
    b.add_argument("--mean-scale", type=float, default=0.5,
                   help="sweep uses E[T1] = mean_scale * n^2")
    b.add_argument("--format", choices=["csv", "json"], default="csv")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("verify", parents=[threads], help="run verification suites")
    v.add_argument("--suite", required=True, choices=[*SUITES, "all"])
    v.add_argument("--n", type=int)
    v.add_argument("--array", help="3-d array file (default: uniform random from --seed)")
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--samples", type=int, default=20000, help="Monte Carlo samples for oracle-tails")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--negative-control", action="store_true",
                   help="break the exchange moves; exchange suites must then fail")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, IndexError, OSError) as exc:
        print(f"permconc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
