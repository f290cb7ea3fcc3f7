"""
Iterative schemes for split variational inclusions.

Three one-step maps are provided:

* :func:`step_regularized` -- the Tikhonov-regularized scheme
  ``z+ = J1(z - lam f1(z) - lam A*(I - T)Az - lam alpha F(z))`` with
  ``T = J2(I - lam f2)``. It converges strongly to the solution selected by
  ``F`` when the step and regularization schedules are admissible.
* :func:`step_forward_backward` -- the same map with ``alpha = 0``.
* :func:`step_moudafi` -- ``z+ = U(I - gamma A*(I - T)A) z`` with
  ``U = J1(I - lam f1)``.

:func:`run` drives any of them with a :class:`Schedule` and records an
:class:`IterationTrace`.
"""

import math
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .hilbert import DimensionError, as_vector
from .operators import forward_backward_map
from .problems import SviProblem, distance_tol, lambda_upper_bound, residual_tol

VARIANTS = ("regularized", "forward_backward", "moudafi")
STOP_RULES = ("residual", "distance")
TRACE_ITERATE_MAX_DIM = 16


# ---------------------------------------------------------------------------
# parameter schedules


@dataclass(frozen=True)
class RootAlpha:
    """``alpha_n = a / (sqrt(b n + c) + d)``."""

    a: float
    b: float = 1.0
    c: float = 0.0
    d: float = 0.0

    def __call__(self, n: int) -> float:
        return self.a / (math.sqrt(self.b * n + self.c) + self.d)


@dataclass(frozen=True)
class RationalLambda:
    """``lambda_n = n / (p n + q)``."""

    p: float
    q: float

    def __call__(self, n: int) -> float:
        return n / (self.p * n + self.q)


@dataclass(frozen=True)
class PowerAlpha:
    """``alpha_n = a / n**k``."""

    a: float
    k: float

    def __call__(self, n: int) -> float:
        return self.a / n ** self.k


@dataclass(frozen=True)
class Constant:
    value: float

    def __call__(self, n: int) -> float:
        return self.value


@dataclass(frozen=True)
class Schedule:
    alpha_at: Callable[[int], float]
    lambda_at: Callable[[int], float]
    rho: float = 2.5
    c: float = 0.05
    label: str = "schedule"


def example1_schedule() -> Schedule:
    return Schedule(RootAlpha(3.0, 1.0, 0.0, 3.0), RationalLambda(7.0, 3.0), rho=2.5, c=0.05,
                    label="ex1")


def example2_schedule() -> Schedule:
    return Schedule(RootAlpha(0.01, 500.0, 2.0, 2.0), RationalLambda(14.0, 1.0), rho=2.5, c=0.05,
                    label="ex2")


# ---------------------------------------------------------------------------
# configuration and results


@dataclass(frozen=True)
class SolverConfig:
    variant: str = "regularized"
    max_iter: int = 1000
    tol: float = 1e-6
    stop_rule: str = "residual"
    moudafi_lambda: float = 0.1
    moudafi_gamma: Optional[float] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.stop_rule not in STOP_RULES:
            raise ValueError(f"stop_rule must be one of {STOP_RULES}, got {self.stop_rule!r}")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.moudafi_lambda > 0:
            raise ValueError("moudafi_lambda must be positive")
        if self.moudafi_gamma is not None and not self.moudafi_gamma > 0:
            raise ValueError("moudafi_gamma must be positive")

    @property
    def gamma(self) -> float:
        # gamma defaults to the Moudafi resolvent parameter
        return self.moudafi_lambda if self.moudafi_gamma is None else self.moudafi_gamma


@dataclass
class TraceRow:
    n: int
    tol_value: float
    step_norm: float
    alpha: float
    lam: float
    dist_to_known: Optional[float]
    elapsed: float
    iterate: Optional[np.ndarray] = None


@dataclass
class IterationTrace:
    rows: List[TraceRow] = field(default_factory=list)
    initial_dist: Optional[float] = None

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)


@dataclass
class SolveResult:
    final_iterate: np.ndarray
    iterations: int
    converged: bool
    trace: IterationTrace
    variant: str = ""
    warnings: List[str] = field(default_factory=list)

    @property
    def final_tol(self) -> float:
        return self.trace.rows[-1].tol_value if self.trace.rows else math.nan


# ---------------------------------------------------------------------------
# one-step maps


def _split_correction(p: SviProblem, z: np.ndarray, lam: float) -> np.ndarray:
    """``A*(I - T)Az`` with ``T = J2(I - lam f2)``."""
    Az = p.A.apply(z)
    return p.A.apply_adjoint(Az - forward_backward_map(p.B2, p.f2, lam, Az))


def step_regularized(p: SviProblem, z, lam: float, alpha: float) -> np.ndarray:
    if not lam > 0:
        raise ValueError("lam must be positive")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    z = np.asarray(z, dtype=float)
    if z.shape != (p.n1,):
        raise DimensionError(f"iterate has shape {z.shape}, expected ({p.n1},)")
    arg = z - lam * p.f1(z) - lam * _split_correction(p, z, lam) - lam * alpha * p.F(z)
    return p.B1(lam, arg)


def step_forward_backward(p: SviProblem, z, lam: float) -> np.ndarray:
    return step_regularized(p, z, lam, 0.0)


def step_moudafi(p: SviProblem, z, lam: float, gamma: float) -> np.ndarray:
    if not (lam > 0 and gamma > 0):
        raise ValueError("lam and gamma must be positive")
    z = np.asarray(z, dtype=float)
    if z.shape != (p.n1,):
        raise DimensionError(f"iterate has shape {z.shape}, expected ({p.n1},)")
    w = z - gamma * _split_correction(p, z, lam)
    return forward_backward_map(p.B1, p.f1, lam, w)


def moudafi_gamma_ok(p: SviProblem, gamma: float) -> bool:
    """Whether ``gamma`` lies in ``(0, 1/||A||^2)``."""
    return gamma > 0 and (p.norm_sq == 0 or gamma < 1.0 / p.norm_sq)


# ---------------------------------------------------------------------------
# driver


def run(p: SviProblem, sched: Schedule, cfg: SolverConfig, z1) -> SolveResult:
    """Iterate the configured scheme from ``z1``.

    The stopping functional is evaluated after every step at the new iterate
    (with the step's own ``lambda`` for the residual rule); ``iterations`` is
    the number of steps taken when it first drops to ``cfg.tol``.
    """
    z = as_vector(z1, p.n1)
    warnings = []
    known = p.known_solution
    if cfg.stop_rule == "distance":
        if known is None:
            raise ValueError("distance stopping needs a problem with a known solution")
        y_star = p.known_image
    if cfg.variant == "moudafi" and not moudafi_gamma_ok(p, cfg.gamma):
        warnings.append(
            f"gamma={cfg.gamma:g} outside (0, 1/||A||^2) = (0, {1.0 / p.norm_sq:g})"
        )

    trace = IterationTrace(initial_dist=None if known is None else float(np.linalg.norm(z - known)))
    keep_iterates = p.n1 <= TRACE_ITERATE_MAX_DIM
    converged = False
    n = 0
    for n in range(1, cfg.max_iter + 1):
        t0 = time.perf_counter()
        if cfg.variant == "moudafi":
            lam, alpha = cfg.moudafi_lambda, 0.0
            z_next = step_moudafi(p, z, lam, cfg.gamma)
        else:
            lam = sched.lambda_at(n)
            alpha = sched.alpha_at(n) if cfg.variant == "regularized" else 0.0
            z_next = step_regularized(p, z, lam, alpha)
        if cfg.stop_rule == "residual":
            tol_value = residual_tol(p, lam, z_next)
        else:
            tol_value = distance_tol(z_next, known, p.A, y_star)
        elapsed = time.perf_counter() - t0
        trace.rows.append(TraceRow(
            n=n,
            tol_value=tol_value,
            step_norm=float(np.linalg.norm(z_next - z)),
            alpha=alpha,
            lam=lam,
            dist_to_known=None if known is None else float(np.linalg.norm(z_next - known)),
            elapsed=elapsed,
            iterate=z_next.copy() if keep_iterates else None,
        ))
        z = z_next
        if not np.all(np.isfinite(z)):
            warnings.append(f"iterate became non-finite at n={n}")
            break
        if tol_value <= cfg.tol:
            converged = True
            break
    return SolveResult(z, n, converged, trace, cfg.variant, warnings)


# ---------------------------------------------------------------------------
# schedule validation


@dataclass(frozen=True)
class Check:
    name: str
    status: str  # "pass", "fail", "advisory-pass" or "advisory-fail"
    detail: str = ""

    @property
    def hard_failure(self) -> bool:
        return self.status == "fail"


@dataclass
class ScheduleReport:
    checks: List[Check]

    @property
    def hard_failed(self) -> bool:
        return any(c.hard_failure for c in self.checks)

    @property
    def all_passed(self) -> bool:
        return all(c.status in ("pass", "advisory-pass") for c in self.checks)

    def by_name(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)


def validate_schedule(sched: Schedule, p: SviProblem, horizon: int = 10_000) -> ScheduleReport:
    """Per-term checks of the step and regularization schedules, plus limit trends.

    Membership ``alpha_n in (0, 1)`` and ``c < lambda_n < bound`` are checked
    for every ``n <= horizon`` and are hard. Divergence of the partial sums,
    ``alpha_n -> 0`` and ``|alpha_{n+1} - alpha_n| / alpha_n**2 -> 0`` cannot
    be decided from finitely many terms, so they are judged on the last decade
    ``[horizon/10, horizon]`` and reported as advisory.
    """
    if horizon < 10:
        raise ValueError("horizon must be >= 10")
    checks = []
    if not sched.rho > 2:
        checks.append(Check("rho", "fail", f"rho={sched.rho:g} must exceed 2"))
        return ScheduleReport(checks)
    checks.append(Check("rho", "pass", f"rho={sched.rho:g}"))

    n = np.arange(1, horizon + 2)
    alpha = np.array([sched.alpha_at(int(k)) for k in n])
    lam = np.array([sched.lambda_at(int(k)) for k in n[:-1]])

    bad = np.flatnonzero((alpha[:-1] <= 0) | (alpha[:-1] >= 1))
    checks.append(Check(
        "alpha-range",
        "fail" if bad.size else "pass",
        f"first violation at n={bad[0] + 1}" if bad.size else f"0 < alpha_n < 1 for n <= {horizon}",
    ))

    upper = lambda_upper_bound(p, sched.rho)
    bad = np.flatnonzero((lam <= sched.c) | (lam >= upper))
    checks.append(Check(
        "lambda-band",
        "fail" if bad.size else "pass",
        (f"first violation at n={bad[0] + 1}: lambda={lam[bad[0]]:.6g} not in ({sched.c:g}, {upper:.6g})"
         if bad.size else f"{sched.c:g} < lambda_n < {upper:.6g} for n <= {horizon}"),
    ))

    lo = horizon // 10
    a_lo, a_hi = alpha[lo - 1], alpha[horizon - 1]
    decays = a_hi < 0.9 * a_lo
    checks.append(Check(
        "alpha-to-zero", "advisory-pass" if decays else "advisory-fail",
        f"alpha_{lo}={a_lo:.4g}, alpha_{horizon}={a_hi:.4g}",
    ))

    partial = np.cumsum(alpha[:-1])
    growth = (partial[horizon - 1] - partial[lo - 1]) / partial[lo - 1]
    diverges = growth > 0.05
    checks.append(Check(
        "alpha-sum-diverges", "advisory-pass" if diverges else "advisory-fail",
        f"sum over last decade / sum up to n={lo} = {growth:.4g}",
    ))

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.abs(np.diff(alpha)) / alpha[:-1] ** 2
    r_lo, r_hi = ratio[lo - 1], ratio[horizon - 1]
    tail_max = ratio[lo - 1:].max()
    vanishing = bool(np.isfinite(tail_max) and r_hi <= r_lo and tail_max <= ratio[: lo].max())
    checks.append(Check(
        "alpha-ratio-to-zero", "advisory-pass" if vanishing else "advisory-fail",
        f"|da|/a^2 at n={lo}: {r_lo:.4g}, at n={horizon}: {r_hi:.4g}",
    ))
    return ScheduleReport(checks)


# ---------------------------------------------------------------------------
# regularized subproblem and the path alpha -> 0


@dataclass(frozen=True)
class FixedAlphaResult:
    x: np.ndarray
    iterations: int
    converged: bool
    residual: float


def solve_rsvi_fixed_alpha(p: SviProblem, alpha: float, lam: float, tol: float = 1e-12,
                           max_iter: int = 100_000, z0=None) -> FixedAlphaResult:
    """Approximate the unique solution ``x_alpha`` of the regularized inclusion.

    Iterates :func:`step_regularized` with constant ``(lam, alpha)`` until the
    fixed-point residual ``||z - step(z)||`` is at most ``tol``.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    z = np.zeros(p.n1) if z0 is None else as_vector(z0, p.n1)
    res = math.inf
    for it in range(1, max_iter + 1):
        z_next = step_regularized(p, z, lam, alpha)
        res = float(np.linalg.norm(z_next - z))
        z = z_next
        if res <= tol:
            return FixedAlphaResult(z, it, True, res)
    return FixedAlphaResult(z, max_iter, False, res)


@dataclass
class PathRow:
    alpha: float
    x: np.ndarray
    converged: bool
    dist_to_known: Optional[float]
    ratio: Optional[float]  # ||x_prev - x|| * alpha_prev / |alpha_prev - alpha|


@dataclass
class PathReport:
    rows: List[PathRow]
    max_norm: float
    m_estimate: Optional[float]

    @property
    def dists(self) -> List[Optional[float]]:
        return [r.dist_to_known for r in self.rows]

    @property
    def complete(self) -> bool:
        return all(r.converged for r in self.rows)


def regularization_path(p: SviProblem, alphas, lam: float, tol: float = 1e-12,
                        max_iter: int = 100_000) -> PathReport:
    """Solve the regularized inclusion along a decreasing sequence of ``alpha``.

    Reports the largest ``||x_alpha||`` seen (boundedness of the path), the
    smallest ``M`` with ``||x_a1 - x_a2|| <= M |a1 - a2| / a1`` over consecutive
    pairs, and the distance of each ``x_alpha`` to the known solution.
    """
    alphas = [float(a) for a in alphas]
    if not alphas or any(a <= 0 for a in alphas):
        raise ValueError("alphas must be positive")
    if any(a2 >= a1 for a1, a2 in zip(alphas, alphas[1:])):
        raise ValueError("alphas must be strictly decreasing")
    rows = []
    prev = None
    z0 = None
    for a in alphas:
        sol = solve_rsvi_fixed_alpha(p, a, lam, tol, max_iter, z0=z0)
        dist = None if p.known_solution is None else float(np.linalg.norm(sol.x - p.known_solution))
        ratio = None
        if prev is not None:
            ratio = float(np.linalg.norm(prev.x - sol.x) * prev.alpha / (prev.alpha - a))
        row = PathRow(a, sol.x, sol.converged, dist, ratio)
        rows.append(row)
        prev = row
        z0 = sol.x
    ratios = [r.ratio for r in rows if r.ratio is not None]
    return PathReport(
        rows=rows,
        max_norm=max(float(np.linalg.norm(r.x)) for r in rows),
        m_estimate=max(ratios) if ratios else None,
    )
