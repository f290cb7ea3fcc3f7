"""
Reproduction runs for the two reference experiments and CSV writers.
"""

import csv
import io
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .problems import (
    DEFAULT_EXAMPLE1_DIM,
    EXAMPLE1_CASES,
    EXAMPLE2_CASES,
    SviProblem,
    build_example1,
    build_example2,
    example1_initial,
    example2_initial,
)
from .solvers import (
    VARIANTS,
    PathReport,
    Schedule,
    SolveResult,
    SolverConfig,
    example1_schedule,
    example2_schedule,
    run,
)

# published iteration counts, per case: (regularized, forward_backward, moudafi)
PUBLISHED_COUNTS = {
    1: {"Ia": (16, 31, 32), "Ib": (16, 30, 31), "Ic": (18, 34, 35), "Id": (16, 31, 32)},
    2: {"IIa": (58, 71, 77), "IIb": (52, 65, 71), "IIc": (52, 65, 71), "IId": (66, 78, 85)},
}

TRACE_COLUMNS = ("iter", "tol", "step_norm", "alpha_n", "lambda_n", "dist_to_known", "elapsed_ms")


@dataclass(frozen=True)
class Experiment:
    table: int
    problem: SviProblem
    schedule: Schedule
    cases: tuple
    tol: float
    stop_rule: str
    moudafi_lambda: float
    moudafi_gamma: float

    def initial(self, case):
        if self.table == 1:
            return example1_initial(case, self.problem.n1)
        return example2_initial(case)

    def config(self, variant, max_iter=10_000, tol=None):
        return SolverConfig(variant=variant, max_iter=max_iter, tol=self.tol if tol is None else tol,
                            stop_rule=self.stop_rule, moudafi_lambda=self.moudafi_lambda,
                            moudafi_gamma=self.moudafi_gamma)


def experiment(table: int, dim: int = DEFAULT_EXAMPLE1_DIM) -> Experiment:
    if table == 1:
        return Experiment(1, build_example1(dim), example1_schedule(), EXAMPLE1_CASES,
                          tol=1e-6, stop_rule="residual", moudafi_lambda=0.1, moudafi_gamma=0.1)
    if table == 2:
        return Experiment(2, build_example2(), example2_schedule(), EXAMPLE2_CASES,
                          tol=1e-4, stop_rule="distance", moudafi_lambda=1 / 15,
                          moudafi_gamma=1 / 15)
    raise ValueError(f"table must be 1 or 2, got {table}")


@dataclass
class BenchEntry:
    case: str
    variant: str
    result: SolveResult
    wall_time: float

    @property
    def iterations(self) -> int:
        return self.result.iterations

    @property
    def converged(self) -> bool:
        return self.result.converged


@dataclass
class BenchReport:
    table: int
    entries: List[BenchEntry] = field(default_factory=list)
    total_time: float = 0.0

    def counts(self) -> Dict[str, tuple]:
        out = {}
        for e in self.entries:
            out.setdefault(e.case, {})[e.variant] = e.iterations
        return {c: tuple(v[var] for var in VARIANTS) for c, v in out.items()}

    def entry(self, case, variant) -> BenchEntry:
        return next(e for e in self.entries if e.case == case and e.variant == variant)


def bench_table(table: int, dim: int = DEFAULT_EXAMPLE1_DIM, max_iter: int = 10_000,
                jobs: int = 1) -> BenchReport:
    """Run every case with every scheme; ``jobs > 1`` runs them on a thread pool."""
    exp = experiment(table, dim)
    tasks = [(case, variant) for case in exp.cases for variant in VARIANTS]

    def job(task):
        case, variant = task
        t0 = time.perf_counter()
        res = run(exp.problem, exp.schedule, exp.config(variant, max_iter), exp.initial(case))
        return BenchEntry(case, variant, res, time.perf_counter() - t0)

    t0 = time.perf_counter()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(job, tasks))
    else:
        entries = [job(t) for t in tasks]
    return BenchReport(table, entries, time.perf_counter() - t0)


def format_table(report: BenchReport, with_published=True) -> str:
    head = f"{'case':<6}" + "".join(f"{v:>20}" for v in VARIANTS)
    if with_published:
        head += f"   {'published':>12}"
    lines = [f"Table {report.table}: iterations (wall ms)", head, "-" * len(head)]
    published = PUBLISHED_COUNTS[report.table]
    for case in published:
        cells = []
        for v in VARIANTS:
            e = report.entry(case, v)
            mark = "" if e.converged else "*"
            cells.append(f"{e.iterations}{mark} ({1000 * e.wall_time:.2f})")
        line = f"{case:<6}" + "".join(f"{c:>20}" for c in cells)
        if with_published:
            line += "   " + f"{'/'.join(map(str, published[case])):>12}"
        lines.append(line)
    if any(not e.converged for e in report.entries):
        lines.append("* did not reach the tolerance within max_iter")
    lines.append(f"total wall time: {report.total_time:.3f} s")
    return "\n".join(lines) + "\n"


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def trace_csv(result: SolveResult, timing: bool = False) -> str:
    """Trace as CSV text. ``elapsed_ms`` is left empty unless ``timing`` is set,
    which keeps repeated runs byte-identical."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for r in result.trace.rows:
        w.writerow([
            r.n, _fmt(r.tol_value), _fmt(r.step_norm), _fmt(r.alpha), _fmt(r.lam),
            _fmt(r.dist_to_known), _fmt(1000 * r.elapsed) if timing else "",
        ])
    return buf.getvalue()


def path_csv(report: PathReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("alpha", "dist_to_known", "ratio", "converged"))
    for r in report.rows:
        w.writerow([_fmt(r.alpha), _fmt(r.dist_to_known), _fmt(r.ratio), int(r.converged)])
    return buf.getvalue()
