"""
Command line front end: ``splitvi run|bench|path|validate``.

Exit codes: 0 success, 1 usage error, 2 validation hard failure.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bench
from .config import ConfigError, load_run_file, parse_array
from .hilbert import check_adjoint_consistency
from .operators import (
    check_firmly_nonexpansive_sampled,
    check_ism_sampled,
    check_strongly_monotone_sampled,
)
from .problems import (
    DEFAULT_EXAMPLE1_DIM,
    EXAMPLE1_CASES,
    EXAMPLE2_CASES,
    build_example1,
    build_example2,
    example1_initial,
    example2_initial,
    lambda_upper_bound,
)
from .solvers import (
    VARIANTS,
    Schedule,
    SolverConfig,
    _split_correction,
    example1_schedule,
    example2_schedule,
    regularization_path,
    run,
    validate_schedule,
)

EXIT_OK, EXIT_USAGE, EXIT_HARD_FAIL = 0, 1, 2
DEFAULT_ALPHAS = "0.1,0.05,0.01,0.001,0.0001"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(args):
    """Resolve --problem into (problem, schedule, solver defaults, init)."""
    name = args.problem
    if name == "example1":
        p = build_example1(args.dim)
        defaults = dict(tol=1e-6, stop_rule="residual", moudafi_lambda=0.1, moudafi_gamma=0.1)
        return p, example1_schedule(), defaults, None
    if name == "example2":
        p = build_example2()
        defaults = dict(tol=1e-4, stop_rule="distance", moudafi_lambda=1 / 15, moudafi_gamma=1 / 15)
        return p, example2_schedule(), defaults, None
    rf = load_run_file(name)
    s = rf.solver
    defaults = dict(tol=s.tol, stop_rule=s.stop_rule, moudafi_lambda=s.moudafi_lambda,
                    moudafi_gamma=s.moudafi_gamma, variant=s.variant, max_iter=s.max_iter)
    return rf.problem, rf.schedule, defaults, rf.init


def _schedule(args, base: Schedule) -> Schedule:
    if getattr(args, "schedule", None) == "ex1":
        base = example1_schedule()
    elif getattr(args, "schedule", None) == "ex2":
        base = example2_schedule()
    rho = base.rho if getattr(args, "rho", None) is None else args.rho
    return Schedule(base.alpha_at, base.lambda_at, rho, base.c, base.label)


def _initial(args, p, file_init):
    spec = args.init
    if spec is None:
        if file_init is not None:
            return file_init
        spec = "Ia" if args.problem == "example1" else "IIa" if args.problem == "example2" else None
        if spec is None:
            raise UsageError("--init is required when the problem file has no init vector")
    if spec in EXAMPLE1_CASES:
        if args.problem != "example1":
            raise UsageError(f"initial preset {spec} is only valid with example1")
        return example1_initial(spec, p.n1)
    if spec in EXAMPLE2_CASES:
        if args.problem != "example2":
            raise UsageError(f"initial preset {spec} is only valid with example2")
        return example2_initial(spec)
    try:
        z = parse_array(spec)
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc
    if z.shape != (p.n1,):
        raise UsageError(f"--init has {z.size} entries, problem needs {p.n1}")
    return z


def cmd_run(args) -> int:
    p, sched, defaults, file_init = _load(args)
    sched = _schedule(args, sched)
    cfg = SolverConfig(
        variant=args.variant or defaults.get("variant", "regularized"),
        max_iter=args.max_iter or defaults.get("max_iter", 1000),
        tol=args.tol or defaults["tol"],
        stop_rule=args.stop_rule or defaults["stop_rule"],
        moudafi_lambda=args.moudafi_lambda or defaults["moudafi_lambda"],
        moudafi_gamma=args.moudafi_gamma or defaults["moudafi_gamma"],
    )
    z1 = _initial(args, p, file_init)
    res = run(p, sched, cfg, z1)
    if args.out:
        Path(args.out).write_text(bench.trace_csv(res, timing=args.timing))
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"problem={p.label} variant={cfg.variant} iterations={res.iterations} "
          f"converged={str(res.converged).lower()} final_tol={res.final_tol:.6e}")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.table not in (1, 2):
        raise UsageError("--table must be 1 or 2")
    report = bench.bench_table(args.table, args.dim, max_iter=args.max_iter or 10_000, jobs=args.jobs)
    text = bench.format_table(report)
    print(text, end="")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"table{args.table}.txt").write_text(text)
        for e in report.entries:
            (out / f"table{args.table}_{e.case}_{e.variant}.csv").write_text(
                bench.trace_csv(e.result, timing=args.timing))
    return EXIT_OK


def cmd_path(args) -> int:
    p, sched, _, _ = _load(args)
    try:
        alphas = [float(a) for a in args.alphas.split(",") if a.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --alphas: {exc}") from exc
    lam = args.lam if args.lam is not None else 2.0 / 3.0 * lambda_upper_bound(p, sched.rho)
    report = regularization_path(p, alphas, lam)
    text = bench.path_csv(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    m = "n/a" if report.m_estimate is None else f"{report.m_estimate:.6g}"
    print(f"lambda={lam:.6g} max_norm={report.max_norm:.6g} M={m} complete={str(report.complete).lower()}",
          file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def validation_checks(p, sched, horizon, seed):
    """(name, status, detail) triples covering the schedule and operator properties."""
    out = []
    rep = validate_schedule(sched, p, horizon)
    for c in rep.checks:
        out.append((f"schedule:{c.name}", c.status, c.detail))
    adj = check_adjoint_consistency(p.A, samples=1000, seed=seed)
    out.append(("adjoint", "pass" if adj.passed else "fail", f"max error {adj.max_error:.3e}"))
    for B in (p.B1, p.B2):
        for lam in (0.01, 0.1, 1.0):
            c = check_firmly_nonexpansive_sampled(B, lam, samples=200, seed=seed)
            out.append((c.name, "pass" if c.passed else "fail", f"worst margin {c.worst_margin:.3e}"))
    for f in (p.f1, p.f2):
        c = check_ism_sampled(f, f.dim, f.tau, samples=200, seed=seed, name=f"ism[{f.label}]")
        out.append((c.name, "pass" if c.passed else "fail", f"worst margin {c.worst_margin:.3e}"))
    for c in check_strongly_monotone_sampled(p.F, samples=200, seed=seed):
        out.append((c.name, "pass" if c.passed else "fail", f"worst margin {c.worst_margin:.3e}"))
    if sched.rho > 2 and p.norm_sq > 0:
        lam = lambda_upper_bound(p, sched.rho)
        c = check_ism_sampled(lambda x: _split_correction(p, x, lam), p.n1, 1.0 / (2.0 * p.norm_sq),
                              samples=200, seed=seed, threshold=1e-9, name="ism[A*(I-T)A]")
        out.append((c.name, "pass" if c.passed else "fail", f"worst margin {c.worst_margin:.3e}"))
    return out


def cmd_validate(args) -> int:
    p, sched, _, _ = _load(args)
    sched = _schedule(args, sched)
    checks = validation_checks(p, sched, args.horizon, args.seed)
    for name, status, detail in checks:
        print(f"{status.upper():<14} {name:<40} {detail}")
    hard = [n for n, s, _ in checks if s == "fail"]
    if hard:
        print(f"hard failures: {', '.join(hard)}")
        return EXIT_HARD_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="splitvi", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--problem", default="example1",
                        help="example1, example2, or a path to a problem file")
        sp.add_argument("--dim", type=int, default=DEFAULT_EXAMPLE1_DIM,
                        help="truncation dimension for example1")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out")

    sp = sub.add_parser("run", help="solve one problem and write its trace")
    common(sp)
    sp.add_argument("--variant", choices=VARIANTS)
    sp.add_argument("--schedule", choices=("ex1", "ex2"))
    sp.add_argument("--rho", type=float)
    sp.add_argument("--init", help="preset (Ia-Id, IIa-IId) or vector like [1,2,3]")
    sp.add_argument("--tol", type=float)
    sp.add_argument("--max-iter", type=int)
    sp.add_argument("--stop-rule", choices=("residual", "distance"))
    sp.add_argument("--moudafi-lambda", type=float)
    sp.add_argument("--moudafi-gamma", type=float)
    sp.add_argument("--timing", action="store_true", help="fill the elapsed_ms column")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("bench", help="reproduce an iteration-count table")
    common(sp)
    sp.add_argument("--table", type=int, required=True)
    sp.add_argument("--max-iter", type=int)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--timing", action="store_true")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("path", help="regularization path alpha -> 0")
    common(sp)
    sp.add_argument("--alphas", default=DEFAULT_ALPHAS)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.set_defaults(func=cmd_path)

    sp = sub.add_parser("validate", help="schedule conditions and operator properties")
    common(sp)
    sp.add_argument("--schedule", choices=("ex1", "ex2"))
    sp.add_argument("--rho", type=float)
    sp.add_argument("--horizon", type=int, default=10_000)
    sp.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"splitvi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
