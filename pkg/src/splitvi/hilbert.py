"""
Finite-dimensional Hilbert space primitives.

Vectors are plain one-dimensional ``float64`` numpy arrays; :func:`as_vector`
is the single entry point that validates them. Linear operators carry an
explicit adjoint so that adjoint consistency can be checked instead of
assumed.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


class DimensionError(ValueError):
    """Raised when vector or operator dimensions do not agree."""


def as_vector(x, dim: Optional[int] = None) -> np.ndarray:
    """Return ``x`` as a finite 1-D float array, optionally checking its length."""
    v = np.asarray(x, dtype=float)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"expected a non-empty 1-D vector, got shape {v.shape}")
    if dim is not None and v.size != dim:
        raise DimensionError(f"expected dimension {dim}, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def inner(x, y) -> float:
    """Euclidean inner product; raises :class:`DimensionError` on mismatch."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionError(f"inner product of shapes {x.shape} and {y.shape}")
    return float(np.dot(x, y))


def norm(x) -> float:
    return float(np.linalg.norm(x))


@dataclass(frozen=True)
class LinearOperator:
    """Bounded linear map ``R^domain_dim -> R^codomain_dim`` with its adjoint.

    ``norm_sq_hint`` stores ``||A||^2`` when it is known in closed form; it is
    returned as-is by :func:`estimate_norm_sq`.
    """

    domain_dim: int
    codomain_dim: int
    matvec: Callable[[np.ndarray], np.ndarray]
    rmatvec: Callable[[np.ndarray], np.ndarray]
    norm_sq_hint: Optional[float] = None
    label: str = "A"

    def __post_init__(self):
        if self.domain_dim < 1 or self.codomain_dim < 1:
            raise DimensionError("operator dimensions must be positive")
        if self.norm_sq_hint is not None and self.norm_sq_hint < 0:
            raise ValueError("norm_sq_hint must be nonnegative")

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.domain_dim,):
            raise DimensionError(
                f"{self.label}: expected input of dim {self.domain_dim}, got {x.shape}"
            )
        return self.matvec(x)

    def apply_adjoint(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if y.shape != (self.codomain_dim,):
            raise DimensionError(
                f"{self.label}*: expected input of dim {self.codomain_dim}, got {y.shape}"
            )
        return self.rmatvec(y)

    __call__ = apply

    def to_dense(self) -> np.ndarray:
        """Dense matrix of the forward map, built column by column."""
        cols = [self.apply(e) for e in np.eye(self.domain_dim)]
        return np.column_stack(cols)


def apply_operator(A: LinearOperator, x) -> np.ndarray:
    return A.apply(x)


def apply_adjoint(A: LinearOperator, y) -> np.ndarray:
    return A.apply_adjoint(y)


def matrix_operator(M, norm_sq_hint=None, adjoint=None, label="A") -> LinearOperator:
    """Wrap a dense matrix. ``adjoint`` overrides ``M.T`` (used for negative controls)."""
    M = np.array(M, dtype=float)
    if M.ndim != 2:
        raise DimensionError("matrix operator needs a 2-D array")
    Mt = M.T.copy() if adjoint is None else np.array(adjoint, dtype=float)
    if Mt.shape != (M.shape[1], M.shape[0]):
        raise DimensionError(f"adjoint shape {Mt.shape} does not match {M.shape}")
    return LinearOperator(
        domain_dim=M.shape[1],
        codomain_dim=M.shape[0],
        matvec=lambda x: M @ x,
        rmatvec=lambda y: Mt @ y,
        norm_sq_hint=norm_sq_hint,
        label=label,
    )


def scaled_identity(c: float, dim: int, label=None) -> LinearOperator:
    c = float(c)
    return LinearOperator(
        domain_dim=dim,
        codomain_dim=dim,
        matvec=lambda x: c * x,
        rmatvec=lambda y: c * y,
        norm_sq_hint=c * c,
        label=label or f"{c:g}I",
    )


def zero_operator(domain_dim: int, codomain_dim: int) -> LinearOperator:
    return LinearOperator(
        domain_dim=domain_dim,
        codomain_dim=codomain_dim,
        matvec=lambda x: np.zeros(codomain_dim),
        rmatvec=lambda y: np.zeros(domain_dim),
        label="0",
    )


def duplicating_shift(dim: int, norm_sq_hint: Optional[float] = 2.0) -> LinearOperator:
    """The operator ``x -> (x1, x1, x2/2, x3/3, ...)`` truncated to ``R^dim``.

    Output coordinate ``k + 1`` (1-based, ``k >= 2``) is ``x_k / k``; the last
    input coordinate falls off the end of the truncated codomain. The adjoint
    is ``(A*y)_1 = y1 + y2`` and ``(A*y)_k = y_{k+1} / k``.
    """
    if dim < 2:
        raise DimensionError("duplicating shift needs dim >= 2")
    k = np.arange(1, dim, dtype=float)  # 1..dim-1

    def matvec(x):
        y = np.empty(dim)
        y[0] = x[0]
        y[1] = x[0]
        y[2:] = x[1:-1] / k[1:]
        return y

    def rmatvec(y):
        x = np.zeros(dim)
        x[0] = y[0] + y[1]
        x[1:-1] = y[2:] / k[1:]
        return x

    return LinearOperator(dim, dim, matvec, rmatvec, norm_sq_hint, label="shift")


@dataclass(frozen=True)
class NormEstimate:
    value: float
    iterations: int
    converged: bool


def power_iteration_norm_sq(A: LinearOperator, max_iters=1000, tol=1e-12, seed=None) -> NormEstimate:
    """Estimate ``||A||^2`` as the top eigenvalue of ``A*A`` by power iteration.

    Starts from the all-ones vector when ``seed`` is None, otherwise from a
    seeded Gaussian vector. Stops once successive Rayleigh quotients differ by
    less than ``tol``.
    """
    if max_iters < 1 or tol <= 0:
        raise ValueError("max_iters must be >= 1 and tol > 0")
    if seed is None:
        v = np.ones(A.domain_dim)
    else:
        v = np.random.default_rng(seed).standard_normal(A.domain_dim)
    v /= np.linalg.norm(v)
    prev = None
    for it in range(1, max_iters + 1):
        w = A.apply_adjoint(A.apply(v))
        rq = float(np.dot(v, w))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return NormEstimate(0.0, it, True)
        if prev is not None and abs(rq - prev) < tol:
            return NormEstimate(max(rq, 0.0), it, True)
        prev = rq
        v = w / nw
    return NormEstimate(max(prev, 0.0), max_iters, False)


def estimate_norm_sq(A: LinearOperator, max_iters=1000, tol=1e-12, seed=None) -> NormEstimate:
    """``||A||^2``, from ``A.norm_sq_hint`` when present, else power iteration."""
    if max_iters < 1 or tol <= 0:
        raise ValueError("max_iters must be >= 1 and tol > 0")
    if A.norm_sq_hint is not None:
        return NormEstimate(float(A.norm_sq_hint), 0, True)
    return power_iteration_norm_sq(A, max_iters, tol, seed)


@dataclass(frozen=True)
class AdjointReport:
    max_error: float
    samples: int
    threshold: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.threshold


def check_adjoint_consistency(A: LinearOperator, samples=1000, seed=0, threshold=1e-10) -> AdjointReport:
    """Max of ``|<Ax, y> - <x, A*y>|`` over seeded Gaussian pairs."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = rng.standard_normal(A.domain_dim)
        y = rng.standard_normal(A.codomain_dim)
        err = abs(inner(A.apply(x), y) - inner(x, A.apply_adjoint(y)))
        worst = max(worst, err)
    return AdjointReport(worst, samples, threshold)
