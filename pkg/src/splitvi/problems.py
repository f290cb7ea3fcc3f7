"""
Split variational inclusion problems, their convex-minimization and
variational-inequality special cases, and the two reference experiments.

A problem asks for ``x`` with ``0 in B1(x) + f1(x)`` such that ``y = Ax``
satisfies ``0 in B2(y) + f2(y)``. ``F`` is the strongly monotone map used by
the regularized scheme to select one solution.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .hilbert import (
    DimensionError,
    LinearOperator,
    as_vector,
    duplicating_shift,
    estimate_norm_sq,
    scaled_identity,
)
from .operators import (
    ConvexSet,
    IsmMapping,
    ResolventOperator,
    StronglyMonotoneMapping,
    make_affine_gradient,
    make_diagonal_ism,
    make_l1_resolvent,
    make_normal_cone_resolvent,
    make_scaled_identity_monotone,
    make_scaled_strongly_monotone,
)

DEFAULT_EXAMPLE1_DIM = 200
DEFAULT_RHO = 2.5


@dataclass(frozen=True)
class SviProblem:
    B1: ResolventOperator
    B2: ResolventOperator
    f1: IsmMapping
    f2: IsmMapping
    A: LinearOperator
    F: StronglyMonotoneMapping
    known_solution: Optional[np.ndarray] = None
    label: str = "svi"

    def __post_init__(self):
        n1, n2 = self.A.domain_dim, self.A.codomain_dim
        for name, obj, want in (("B1", self.B1, n1), ("f1", self.f1, n1), ("F", self.F, n1),
                                ("B2", self.B2, n2), ("f2", self.f2, n2)):
            if obj.dim != want:
                raise DimensionError(f"{name} has dim {obj.dim}, expected {want}")
        if self.known_solution is not None:
            x = as_vector(self.known_solution, n1)
            object.__setattr__(self, "known_solution", x)
            res = fixed_point_residual(self, 1.0, x)
            if res > 1e-9:
                raise ValueError(f"known_solution is not a solution (fixed-point residual {res:.3e})")

    @property
    def n1(self) -> int:
        return self.A.domain_dim

    @property
    def n2(self) -> int:
        return self.A.codomain_dim

    @property
    def tau_tilde(self) -> float:
        return min(self.f1.tau, self.f2.tau)

    @cached_property
    def norm_sq(self) -> float:
        return estimate_norm_sq(self.A).value

    @property
    def known_image(self) -> Optional[np.ndarray]:
        if self.known_solution is None:
            return None
        return self.A.apply(self.known_solution)


@dataclass(frozen=True)
class ScmpSpec:
    """Split convex minimization data: ``E = e1 + e2`` on the domain, ``G = g1 + g2`` on the range.

    ``e2``/``g2`` are optional objective evaluators for the smooth parts, used
    only by gradient checks.
    """

    prox_e1: ResolventOperator
    prox_g1: ResolventOperator
    grad_e2: IsmMapping
    grad_g2: IsmMapping
    A: LinearOperator
    F: StronglyMonotoneMapping
    e2: Optional[Callable[[np.ndarray], float]] = None
    g2: Optional[Callable[[np.ndarray], float]] = None


@dataclass(frozen=True)
class SvipSpec:
    C: ConvexSet
    Q: ConvexSet
    f1: IsmMapping
    f2: IsmMapping
    A: LinearOperator
    F: StronglyMonotoneMapping


def scmp_to_svi(spec: ScmpSpec, known_solution=None, label="scmp") -> SviProblem:
    """B1, B2 are the subdifferentials of the nonsmooth parts, f1, f2 the gradients."""
    return SviProblem(
        B1=spec.prox_e1,
        B2=spec.prox_g1,
        f1=spec.grad_e2,
        f2=spec.grad_g2,
        A=spec.A,
        F=spec.F,
        known_solution=known_solution,
        label=label,
    )


def svip_to_svi(spec: SvipSpec, known_solution=None, label="svip") -> SviProblem:
    """B1, B2 are the normal cones of C and Q, whose resolvents are the projections."""
    return SviProblem(
        B1=make_normal_cone_resolvent(spec.C, spec.A.domain_dim),
        B2=make_normal_cone_resolvent(spec.Q, spec.A.codomain_dim),
        f1=spec.f1,
        f2=spec.f2,
        A=spec.A,
        F=spec.F,
        known_solution=known_solution,
        label=label,
    )


def build_example1(dim: int = DEFAULT_EXAMPLE1_DIM) -> SviProblem:
    """The l2 experiment truncated to ``R^dim``.

    B1 = 3 id, B2 = 7 id, f1 = 2 id, f2 = diag(1, 1/2, 1/3, ...), F = 4 id and
    A the duplicating shift. The unique solution is 0.
    """
    if dim < 4:
        raise ValueError("example 1 needs dim >= 4")
    return SviProblem(
        B1=make_scaled_identity_monotone(3.0, dim),
        B2=make_scaled_identity_monotone(7.0, dim),
        f1=make_diagonal_ism(np.full(dim, 2.0)),
        f2=make_diagonal_ism(1.0 / np.arange(1, dim + 1)),
        A=duplicating_shift(dim, norm_sq_hint=2.0),
        F=make_scaled_strongly_monotone(4.0, dim),
        known_solution=np.zeros(dim),
        label=f"example1(dim={dim})",
    )


EXAMPLE2_SHIFT_E = np.array([1.0, 1.0, -3.0])
EXAMPLE2_SHIFT_G = np.array([1.0, 1.0, -5.0])


def example2_e2(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(x @ x + EXAMPLE2_SHIFT_E @ x + 2.0)


def example2_g2(y) -> float:
    y = np.asarray(y, dtype=float)
    return float(y @ y + EXAMPLE2_SHIFT_G @ y - 3.0)


def example2_scmp() -> ScmpSpec:
    """E(x) = ||x||^2 + (1,1,-3).x + 2 + ||x||_1, G(y) = ||y||^2 + (1,1,-5).y - 3 + ||y||_1, A = 2I."""
    return ScmpSpec(
        prox_e1=make_l1_resolvent(3),
        prox_g1=make_l1_resolvent(3),
        grad_e2=make_affine_gradient(2.0, EXAMPLE2_SHIFT_E),
        grad_g2=make_affine_gradient(2.0, EXAMPLE2_SHIFT_G),
        A=scaled_identity(2.0, 3, label="2I"),
        F=make_scaled_strongly_monotone(2.0, 3),
        e2=example2_e2,
        g2=example2_g2,
    )


def build_example2() -> SviProblem:
    return scmp_to_svi(example2_scmp(), known_solution=[0.0, 0.0, 1.0], label="example2")


def example1_initial(case: str, dim: int = DEFAULT_EXAMPLE1_DIM) -> np.ndarray:
    """Geometric starting points Ia-Id, truncated to ``dim`` entries."""
    first, ratio = {
        "Ia": (16.0, 1 / 4),
        "Ib": (9.0, 1 / 3),
        "Ic": (100.0, -1 / 10),
        "Id": (-20.0, -1 / 5),
    }[case]
    return first * ratio ** np.arange(dim)


EXAMPLE2_INITIAL = {
    "IIa": (1.0, -2.0, 16.0),
    "IIb": (15.0, 9.0, 0.0),
    "IIc": (1.0, 0.0, 6.0),
    "IId": (11.0, 1.0, -3.0),
}
EXAMPLE1_CASES = ("Ia", "Ib", "Ic", "Id")
EXAMPLE2_CASES = tuple(EXAMPLE2_INITIAL)


def example2_initial(case: str) -> np.ndarray:
    return np.array(EXAMPLE2_INITIAL[case])


def residual_tol(p: SviProblem, lam: float, z) -> float:
    """``||z - J1(z - f1 z)|| + ||Az - J2(Az - f2 Az)||`` with resolvents at ``lam``.

    The single-valued maps enter the resolvent argument without a ``lam``
    factor, so it is only guaranteed to vanish at solutions where ``f1`` and
    ``f2`` vanish too (as at the origin of the first reference experiment);
    :func:`fixed_point_residual` is the scale-consistent variant.
    """
    if not lam > 0:
        raise ValueError("lam must be positive")
    z = np.asarray(z, dtype=float)
    Az = p.A.apply(z)
    r1 = z - p.B1(lam, z - p.f1(z))
    r2 = Az - p.B2(lam, Az - p.f2(Az))
    return float(np.linalg.norm(r1) + np.linalg.norm(r2))


def fixed_point_residual(p: SviProblem, lam: float, z) -> float:
    """``||z - J1(z - lam f1 z)|| + ||Az - J2(Az - lam f2 Az)||``.

    Vanishes exactly on the solution set, for every ``lam > 0``. Unlike
    :func:`residual_tol` the single-valued maps are scaled by ``lam``.
    """
    if not lam > 0:
        raise ValueError("lam must be positive")
    z = np.asarray(z, dtype=float)
    Az = p.A.apply(z)
    r1 = z - p.B1(lam, z - lam * p.f1(z))
    r2 = Az - p.B2(lam, Az - lam * p.f2(Az))
    return float(np.linalg.norm(r1) + np.linalg.norm(r2))


def distance_tol(z, x_star, A: LinearOperator, y_star) -> float:
    """``||z - x*|| + ||Az - y*||``."""
    z = np.asarray(z, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    y_star = np.asarray(y_star, dtype=float)
    if z.shape != x_star.shape:
        raise DimensionError(f"shapes {z.shape} and {x_star.shape} differ")
    return float(np.linalg.norm(z - x_star) + np.linalg.norm(A.apply(z) - y_star))


def lambda_upper_bound(p: SviProblem, rho: float = DEFAULT_RHO) -> float:
    """Upper end ``min(tau_tilde, 1/||A||^2) / rho`` of the admissible step band."""
    if not rho > 2:
        raise ValueError(f"rho must exceed 2, got {rho}")
    inv_norm = np.inf if p.norm_sq == 0 else 1.0 / p.norm_sq
    return min(p.tau_tilde, inv_norm) / rho
