"""
Independent reference computations.

Nothing here imports the solver: the scalar oracle re-derives each scheme
from closed-form scalar resolvents, and the sampled checks only evaluate
the defining inequalities.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ScalarSviInstance:
    """One-dimensional instance ``B1 x = b1 x``, ``B2 x = b2 x``, ``f1 x = fc1 x``,
    ``f2 x = fc2 x``, ``A x = a x``, ``F x = fF x``."""

    b1: float
    b2: float
    fc1: float
    fc2: float
    a: float
    fF: float


def scalar_oracle_step(inst: ScalarSviInstance, variant: str, lam: float, param: float, z: float) -> float:
    """One step of the chosen scheme in scalar arithmetic.

    ``param`` is ``alpha`` for ``"regularized"``, ``gamma`` for ``"moudafi"``
    and ignored for ``"forward_backward"``.
    """
    def J1(x):
        return x / (1.0 + lam * inst.b1)

    def J2(x):
        return x / (1.0 + lam * inst.b2)

    y = inst.a * z
    t = J2(y - lam * inst.fc2 * y)
    s = inst.a * (y - t)
    if variant == "moudafi":
        w = z - param * s
        return J1(w - lam * inst.fc1 * w)
    alpha = param if variant == "regularized" else 0.0
    return J1(z - lam * inst.fc1 * z - lam * s - lam * alpha * inst.fF * z)


@dataclass(frozen=True)
class OracleReport:
    name: str
    value: float
    threshold: float
    passed: bool


def finite_diff_grad_check(objective, grad, dim: int, samples=20, h=1e-5, seed=0,
                           scale=3.0, threshold=1e-6) -> OracleReport:
    """Central differences against ``grad`` at seeded points.

    Reports the largest relative error ``||g_fd - g|| / max(1, ||g||)``.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = scale * rng.standard_normal(dim)
        g = np.asarray(grad(x), dtype=float)
        fd = np.empty(dim)
        for i in range(dim):
            e = np.zeros(dim)
            e[i] = h
            fd[i] = (objective(x + e) - objective(x - e)) / (2 * h)
        err = np.linalg.norm(fd - g) / max(1.0, np.linalg.norm(g))
        worst = max(worst, float(err))
    return OracleReport("finite-difference gradient", worst, threshold, worst <= threshold)


def ism_constant_sampled(f, dim: int, claimed_tau: float, samples=1000, seed=0, scale=10.0,
                         threshold=1e-9) -> OracleReport:
    """Smallest ``<fx - fy, x - y> / ||fx - fy||^2`` over seeded pairs.

    Pairs with ``fx == fy`` are skipped. Passes iff the worst ratio is at least
    ``claimed_tau - threshold``.
    """
    if not claimed_tau > 0:
        raise ValueError("claimed_tau must be positive")
    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(samples):
        x = scale * rng.standard_normal(dim)
        y = scale * rng.standard_normal(dim)
        d = np.asarray(f(x)) - np.asarray(f(y))
        dd = float(d @ d)
        if dd == 0.0:
            continue
        worst = min(worst, float(d @ (x - y)) / dd)
    return OracleReport("ism modulus", worst, claimed_tau, worst >= claimed_tau - threshold)
