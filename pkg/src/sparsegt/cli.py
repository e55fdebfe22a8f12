"""Command-line entry point.

Exit codes: 0 success, 1 verification or recovery failure, 2 invalid
parameters, 3 work budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import math
import statistics
import sys
import time
import warnings

import numpy as np

from . import bounds
from .construct import CodePlan, Kind, build, identity_plan, ks_plan, random_plan
from .decode import cover_decode, ks_list_decode
from .errors import GroupTestingError, GuaranteeExceeded, WorkBudgetExceeded
from .matrix import read_matrix_meta, read_outcome, write_matrix
from .sim import Decoder, ErrorMode, SimConfig, run_sim
from .verify import DEFAULT_BUDGET, disjunct_exact, disjunct_sufficient

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

SWEEP_COLUMNS = [
    "sweep", "value", "n", "d", "nu", "constraint", "limit",
    "lower_bound", "lower_bound_tests", "binding_rule",
    "achievable_t", "plan_kind", "q", "k_q", "t_q", "gap",
]


class UsageError(Exception):
    pass


def _positive(name, value, minimum=1):
    if value is None or value < minimum:
        raise UsageError(f"--{name} must be >= {minimum}")


def _print_kv(pairs: dict, out=None):
    out = out or sys.stdout
    for k, v in pairs.items():
        print(f"{k}={v}", file=out)


def _plan_from_args(args) -> tuple[CodePlan, bounds.BoundResult | None]:
    kind = getattr(args, "kind", "auto")
    if kind == "ks":
        for name in ("q", "kq", "tq", "n"):
            _positive(name, getattr(args, name))
        plan = ks_plan(args.q, args.kq, args.tq, args.n, d=args.d, nu=args.nu or 0)
        return plan, None
    if kind == "identity":
        _positive("n", args.n)
        return identity_plan(args.n, args.d or 1, args.nu or 0), None
    if kind == "random":
        _positive("n", args.n)
        _positive("d", args.d)
        return random_plan(args.n, args.d, args.nu or 0, args.alpha, args.c, args.seed), None
    _positive("n", args.n, 2)
    _positive("d", args.d)
    if args.nu is None or args.nu < 0:
        raise UsageError("--nu must be >= 0")
    if args.list_l is not None:
        _positive("list-l", args.list_l)
        return bounds.plan_list_decodable(args.n, args.d, args.nu, args.list_l), None
    if (args.wmax is None) == (args.rhomax is None):
        raise UsageError("give exactly one of --wmax / --rhomax")
    if args.wmax is not None:
        _positive("wmax", args.wmax)
        return (
            bounds.plan_sparse_codewords(args.n, args.d, args.nu, args.wmax),
            bounds.lb_sparse_codewords(args.n, args.d, args.nu, args.wmax),
        )
    _positive("rhomax", args.rhomax)
    return (
        bounds.plan_sparse_tests(args.n, args.d, args.nu, args.rhomax),
        bounds.lb_sparse_tests(args.n, args.d, args.nu, args.rhomax),
    )


def _add_plan_args(p, with_kind=False):
    p.add_argument("--n", type=int, help="number of items")
    p.add_argument("--d", type=int, help="maximum number of defectives")
    p.add_argument("--nu", type=int, default=0, help="error parameter (0 = noiseless)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--wmax", type=int, help="maximum column weight")
    g.add_argument("--rhomax", type=int, help="maximum row weight")
    g.add_argument("--list-l", dest="list_l", type=int, help="list-decodable plan at level L")
    if with_kind:
        p.add_argument("--kind", choices=["auto", "ks", "identity", "random"], default="auto")
        p.add_argument("--q", type=int)
        p.add_argument("--kq", type=int)
        p.add_argument("--tq", type=int)
        p.add_argument("--alpha", type=float, default=0.5)
        p.add_argument("--c", type=float, default=6.0)
        p.add_argument("--seed", type=int, default=0)


def cmd_plan(args) -> int:
    plan, lb = _plan_from_args(args)
    _print_kv(plan.to_meta())
    if lb is not None:
        print(f"lower_bound={lb.value!r}")
        print(f"lower_bound_tests={lb.tests}")
        print(f"binding_rule={lb.binding_rule}")
        print(f"gap={plan.t - lb.tests}")
        print(f"ratio={plan.t / lb.value if lb.value else math.inf!r}")
    return EXIT_OK


def cmd_build(args) -> int:
    plan, _ = _plan_from_args(args)
    m = build(plan)
    meta = plan.to_meta()
    if plan.kind is Kind.RANDOM_CONSTANT_WEIGHT:
        meta["rho_bound"] = str(max(m.row_weights()))
    write_matrix(m, args.out, meta)
    print(f"wrote {m.t}x{m.n} matrix to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    _positive("d", args.d, 0)
    _positive("nu", args.nu, 0)
    m, _ = read_matrix_meta(args.input)
    if m.n < 2:
        raise UsageError("matrix needs at least two columns")
    if args.exact:
        report = disjunct_exact(m, args.d, args.nu, budget=args.budget, workers=args.workers)
    else:
        report = disjunct_sufficient(m, args.d, args.nu)
    _print_kv(report.to_kv())
    return EXIT_OK if report.is_disjunct else EXIT_FAIL


def cmd_decode(args) -> int:
    _positive("nu", args.nu, 0)
    m, meta = read_matrix_meta(args.input)
    y = read_outcome(args.y)
    if args.list:
        result = ks_list_decode(CodePlan.from_meta(meta), y, args.nu)
    else:
        result = cover_decode(m, y, args.nu)
    print(" ".join(map(str, result.items)))
    return EXIT_OK


def cmd_simulate(args) -> int:
    m, meta = read_matrix_meta(args.input)
    plan = CodePlan.from_meta(meta) if "kind" in meta else None
    decoder = Decoder.LIST_RECOVERY if args.decoder == "list" else Decoder.COVER
    cfg = SimConfig(
        matrix=m,
        plan=plan,
        d=args.d,
        nu=args.nu,
        d_active=args.d_active,
        error_weight=args.errors,
        trials=args.trials,
        seed=args.seed,
        decoder=decoder,
        error_mode=ErrorMode.EXHAUSTIVE if args.mode == "exhaustive" else ErrorMode.RANDOM,
        mixed_sizes=args.mixed,
        override=args.override,
        workers=args.workers,
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", GuaranteeExceeded)
        try:
            report = run_sim(cfg)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.format == "kv":
        _print_kv(report.to_kv())
    else:
        print(report.to_text())
    return EXIT_OK if report.failure_count == 0 else EXIT_FAIL


def _sweep_values(args) -> list[int]:
    if args.values:
        return [int(v) for v in args.values.split(",")]
    return list(range(args.start, args.stop + 1, args.step))


def cmd_bounds(args) -> int:
    if args.wmax is None and args.rhomax is None:
        raise UsageError("bounds needs --wmax or --rhomax")
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    values = _sweep_values(args) if args.sweep else [None]
    for value in values:
        params = {"n": args.n, "d": args.d, "nu": args.nu, "wmax": args.wmax, "rhomax": args.rhomax}
        if args.sweep:
            params[args.sweep] = value
        n, d, nu = params["n"], params["d"], params["nu"]
        _positive("n", n, 2)
        _positive("d", d)
        if params["wmax"] is not None:
            constraint, limit = "wmax", params["wmax"]
            lb = bounds.lb_sparse_codewords(n, d, nu, limit)
            plan = bounds.plan_sparse_codewords(n, d, nu, limit)
        else:
            constraint, limit = "rhomax", params["rhomax"]
            lb = bounds.lb_sparse_tests(n, d, nu, limit)
            plan = bounds.plan_sparse_tests(n, d, nu, limit)
        writer.writerow([
            args.sweep or "", "" if value is None else value, n, d, nu, constraint, limit,
            repr(lb.value), lb.tests, lb.binding_rule,
            plan.t, plan.kind.value, plan.q or "", plan.k_q or "", plan.t_q or "",
            plan.t - lb.tests,
        ])
    return EXIT_OK


def cmd_bench(args) -> int:
    plan, _ = _plan_from_args(args)
    timings = {}
    start = time.perf_counter()
    m = build(plan)
    timings["build_s"] = time.perf_counter() - start
    start = time.perf_counter()
    suff = disjunct_sufficient(m, plan.d, plan.nu)
    timings["verify_sufficient_s"] = time.perf_counter() - start
    if args.exact:
        start = time.perf_counter()
        try:
            disjunct_exact(m, plan.d, plan.nu, budget=args.budget)
            timings["verify_exact_s"] = time.perf_counter() - start
        except WorkBudgetExceeded:
            timings["verify_exact_s"] = math.nan
    rng = np.random.default_rng(args.seed)
    cover, lst = [], []
    for _ in range(args.repeats):
        active = rng.choice(m.n, size=min(plan.d, m.n), replace=False)
        y = m.or_columns(int(j) for j in active)
        start = time.perf_counter()
        cover_decode(m, y, plan.nu)
        cover.append(time.perf_counter() - start)
        if plan.kind is Kind.KAUTZ_SINGLETON:
            start = time.perf_counter()
            ks_list_decode(plan, y, plan.nu)
            lst.append(time.perf_counter() - start)
    timings["decode_cover_median_s"] = statistics.median(cover)
    if lst:
        timings["decode_list_median_s"] = statistics.median(lst)
    _print_kv({"t": plan.t, "n": plan.n, "kind": plan.kind.value, "sufficient": str(suff.is_disjunct).lower()})
    _print_kv({k: repr(v) for k, v in timings.items()})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparsegt", description="Sparse combinatorial group testing toolkit")
    parser.add_argument("--workers", type=int, default=1, help="cap on worker processes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="choose a construction for a constraint regime")
    _add_plan_args(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("build", help="build a matrix and write it as GTM1")
    _add_plan_args(p, with_kind=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="check (d, nu)-disjunctness of a GTM1 matrix")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decode", help="decode an outcome vector")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--y", required=True, help="file holding one line of t bits")
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--list", action="store_true", help="Kautz-Singleton list-recovery decoder")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="OR-channel device discovery trials")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--d-active", dest="d_active", type=int, required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--nu", type=int)
    p.add_argument("--errors", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--decoder", choices=["cover", "list"], default="cover")
    p.add_argument("--mode", choices=["random", "exhaustive"], default="random")
    p.add_argument("--mixed", action="store_true", help="draw |S| uniformly from 0..d")
    p.add_argument("--override", action="store_true", help="silence the decoder-guarantee warning")
    p.add_argument("--format", choices=["text", "kv"], default="text")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bounds", help="CSV of lower bounds and achievable t")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--nu", type=int, default=0)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--wmax", type=int)
    g.add_argument("--rhomax", type=int)
    p.add_argument("--sweep", choices=["n", "d", "nu", "wmax", "rhomax"])
    p.add_argument("--values", help="comma-separated sweep values")
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--stop", type=int, default=1)
    p.add_argument("--step", type=int, default=1)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("bench", help="time build / verify / decode for a plan")
    _add_plan_args(p, with_kind=True)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--repeats", type=int, default=50)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except WorkBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, GroupTestingError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
