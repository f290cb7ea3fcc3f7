"""
Problem/run definitions read from INI-style files.

Example::

    [problem]
    dim1 = 3
    dim2 = 3
    B1 = l1                    ; scaled | l1 | box | ball | whole
    B2 = scaled
    B2_c = 7
    f1_scale = 2               ; f(x) = scale*x + shift, or diagonal weights
    f1_shift = [1, 1, -3]
    f2_weights = [1, 0.5, 0.25]
    A_scale = 2                ; or A_matrix = [[...], [...]] (+ optional A_adjoint)
    F_scale = 2
    known_solution = [0, 0, 1]

    [schedule]
    preset = ex2               ; or alpha_a/alpha_b/alpha_c/alpha_d, lambda_p/lambda_q
    rho = 2.5

    [solver]
    variant = regularized
    tol = 1e-4
    max_iter = 1000
    stop_rule = distance
    init = [1, -2, 16]

Vectors are bracketed comma lists; matrices are lists of rows.
"""

import ast
import configparser
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .hilbert import matrix_operator, scaled_identity
from .operators import (
    ConvexSet,
    make_affine_gradient,
    make_diagonal_ism,
    make_l1_resolvent,
    make_normal_cone_resolvent,
    make_scaled_identity_monotone,
    make_scaled_strongly_monotone,
    make_zero_ism,
)
from .problems import SviProblem
from .solvers import (
    Constant,
    RationalLambda,
    RootAlpha,
    Schedule,
    SolverConfig,
    example1_schedule,
    example2_schedule,
)


class ConfigError(ValueError):
    pass


def parse_array(text: str) -> np.ndarray:
    try:
        value = ast.literal_eval(text.strip())
    except (ValueError, SyntaxError) as exc:
        raise ConfigError(f"cannot parse {text!r} as a number list") from exc
    arr = np.array(value, dtype=float)
    return arr


def _resolvent(sec, key, dim):
    kind = sec.get(key, "whole").strip().lower()
    if kind == "scaled":
        return make_scaled_identity_monotone(sec.getfloat(f"{key}_c"), dim)
    if kind == "l1":
        return make_l1_resolvent(dim)
    if kind == "box":
        C = ConvexSet.box(parse_array(sec[f"{key}_lower"]), parse_array(sec[f"{key}_upper"]))
    elif kind == "ball":
        C = ConvexSet.ball(parse_array(sec[f"{key}_center"]), sec.getfloat(f"{key}_radius"))
    elif kind == "whole":
        C = ConvexSet.whole_space()
    else:
        raise ConfigError(f"{key}: unknown operator kind {kind!r}")
    return make_normal_cone_resolvent(C, dim)


def _ism(sec, key, dim):
    if f"{key}_weights" in sec:
        f = make_diagonal_ism(parse_array(sec[f"{key}_weights"]))
    elif f"{key}_scale" in sec:
        shift = parse_array(sec[f"{key}_shift"]) if f"{key}_shift" in sec else np.zeros(dim)
        f = make_affine_gradient(sec.getfloat(f"{key}_scale"), shift)
    else:
        f = make_zero_ism(dim)
    if f.dim != dim:
        raise ConfigError(f"{key} has dimension {f.dim}, expected {dim}")
    return f


def problem_from_section(sec) -> SviProblem:
    try:
        n1 = sec.getint("dim1")
        n2 = sec.getint("dim2", n1)
    except (TypeError, ValueError) as exc:
        raise ConfigError("[problem] needs an integer dim1") from exc
    if n1 is None:
        raise ConfigError("[problem] needs dim1")
    if "A_matrix" in sec:
        M = parse_array(sec["A_matrix"])
        adj = parse_array(sec["A_adjoint"]) if "A_adjoint" in sec else None
        A = matrix_operator(M, adjoint=adj)
    else:
        if n1 != n2:
            raise ConfigError("A_scale needs dim1 == dim2; use A_matrix otherwise")
        A = scaled_identity(sec.getfloat("A_scale", 1.0), n1)
    known = parse_array(sec["known_solution"]) if "known_solution" in sec else None
    return SviProblem(
        B1=_resolvent(sec, "B1", n1),
        B2=_resolvent(sec, "B2", n2),
        f1=_ism(sec, "f1", n1),
        f2=_ism(sec, "f2", n2),
        A=A,
        F=make_scaled_strongly_monotone(sec.getfloat("F_scale", 1.0), n1),
        known_solution=known,
        label=sec.get("label", "file"),
    )


def schedule_from_section(sec) -> Schedule:
    preset = sec.get("preset", "").strip().lower()
    if preset == "ex1":
        base = example1_schedule()
    elif preset == "ex2":
        base = example2_schedule()
    elif preset:
        raise ConfigError(f"unknown schedule preset {preset!r}")
    else:
        alpha = (Constant(sec.getfloat("alpha")) if "alpha" in sec else
                 RootAlpha(sec.getfloat("alpha_a", 1.0), sec.getfloat("alpha_b", 1.0),
                           sec.getfloat("alpha_c", 0.0), sec.getfloat("alpha_d", 1.0)))
        lam = (Constant(sec.getfloat("lambda")) if "lambda" in sec else
               RationalLambda(sec.getfloat("lambda_p", 10.0), sec.getfloat("lambda_q", 1.0)))
        base = Schedule(alpha, lam, label="file")
    return Schedule(base.alpha_at, base.lambda_at, rho=sec.getfloat("rho", base.rho),
                    c=sec.getfloat("c", base.c), label=base.label)


@dataclass
class RunFile:
    problem: SviProblem
    schedule: Schedule
    solver: SolverConfig
    init: Optional[np.ndarray]


def load_run_file(path) -> RunFile:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    parser.optionxform = str  # keep B1/f1 capitalization
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if "problem" not in parser:
        raise ConfigError(f"{path}: missing [problem] section")
    problem = problem_from_section(parser["problem"])
    sched_sec = parser["schedule"] if "schedule" in parser else parser[parser.default_section]
    schedule = schedule_from_section(sched_sec)
    s = parser["solver"] if "solver" in parser else parser[parser.default_section]
    solver = SolverConfig(
        variant=s.get("variant", "regularized"),
        max_iter=s.getint("max_iter", 1000),
        tol=s.getfloat("tol", 1e-6),
        stop_rule=s.get("stop_rule", "residual"),
        moudafi_lambda=s.getfloat("moudafi_lambda", 0.1),
        moudafi_gamma=s.getfloat("moudafi_gamma", None),
    )
    init = parse_array(s["init"]) if "init" in s else None
    return RunFile(problem, schedule, solver, init)
