"""
Resolvents, inverse strongly monotone maps and projections.

A maximal monotone operator ``B`` is only ever touched through its resolvent
``J_lam = (I + lam B)^{-1}``, so :class:`ResolventOperator` stores nothing
else.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .hilbert import DimensionError, inner


@dataclass(frozen=True)
class ResolventOperator:
    dim: int
    resolvent: Callable[[float, np.ndarray], np.ndarray]
    label: str = "B"

    def __call__(self, lam: float, x) -> np.ndarray:
        return resolvent_eval(self, lam, x)


@dataclass(frozen=True)
class IsmMapping:
    """Single-valued map with inverse strong monotonicity modulus ``tau``."""

    dim: int
    func: Callable[[np.ndarray], np.ndarray]
    tau: float
    label: str = "f"

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("ism modulus tau must be positive")

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionError(f"{self.label}: expected dim {self.dim}, got {x.shape}")
        return self.func(x)

    __call__ = apply


@dataclass(frozen=True)
class StronglyMonotoneMapping:
    dim: int
    func: Callable[[np.ndarray], np.ndarray]
    gamma: float
    lipschitz: float
    label: str = "F"

    def __post_init__(self):
        if not (self.gamma > 0 and self.lipschitz > 0):
            raise ValueError("gamma and lipschitz must be positive")

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionError(f"{self.label}: expected dim {self.dim}, got {x.shape}")
        return self.func(x)

    __call__ = apply


@dataclass(frozen=True)
class ConvexSet:
    """Closed convex set with a closed-form projection.

    ``kind`` is one of ``"box"``, ``"ball"`` or ``"whole"``.
    """

    kind: str
    lower: Optional[np.ndarray] = field(default=None)
    upper: Optional[np.ndarray] = field(default=None)
    center: Optional[np.ndarray] = field(default=None)
    radius: Optional[float] = None

    def __post_init__(self):
        if self.kind == "box":
            lo = np.asarray(self.lower, dtype=float)
            hi = np.asarray(self.upper, dtype=float)
            if lo.shape != hi.shape or lo.ndim != 1:
                raise DimensionError("box bounds must be 1-D arrays of equal length")
            if np.any(lo > hi):
                raise ValueError("box requires lower <= upper in every coordinate")
            object.__setattr__(self, "lower", lo)
            object.__setattr__(self, "upper", hi)
        elif self.kind == "ball":
            if self.radius is None or self.radius < 0:
                raise ValueError("ball requires radius >= 0")
            object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        elif self.kind != "whole":
            raise ValueError(f"unknown convex set kind {self.kind!r}")

    @classmethod
    def box(cls, lower, upper):
        return cls("box", lower=lower, upper=upper)

    @classmethod
    def ball(cls, center, radius):
        return cls("ball", center=center, radius=float(radius))

    @classmethod
    def whole_space(cls):
        return cls("whole")

    @property
    def dim(self) -> Optional[int]:
        if self.kind == "box":
            return self.lower.size
        if self.kind == "ball":
            return self.center.size
        return None


def project_convex(C: ConvexSet, x) -> np.ndarray:
    """Metric projection of ``x`` onto ``C``."""
    x = np.asarray(x, dtype=float)
    if C.dim is not None and x.shape != (C.dim,):
        raise DimensionError(f"projection onto set of dim {C.dim}, got {x.shape}")
    if C.kind == "box":
        return np.clip(x, C.lower, C.upper)
    if C.kind == "ball":
        d = x - C.center
        r = np.linalg.norm(d)
        if r <= C.radius:
            return x.copy()
        return C.center + (C.radius / r) * d
    return x.copy()


def resolvent_eval(B: ResolventOperator, lam: float, x) -> np.ndarray:
    if not lam > 0:
        raise ValueError(f"resolvent parameter must be positive, got {lam}")
    x = np.asarray(x, dtype=float)
    if x.shape != (B.dim,):
        raise DimensionError(f"{B.label}: expected dim {B.dim}, got {x.shape}")
    return B.resolvent(lam, x)


def make_scaled_identity_monotone(c: float, dim: int) -> ResolventOperator:
    """``B x = c x`` with ``c >= 0``; its resolvent is ``x / (1 + lam c)``."""
    if c < 0:
        raise ValueError("scaled identity needs c >= 0 to be monotone")
    c = float(c)
    return ResolventOperator(dim, lambda lam, x: x / (1.0 + lam * c), label=f"{c:g}*id")


def prox_l1(lam: float, x) -> np.ndarray:
    """Soft thresholding, the resolvent of the subdifferential of ``||.||_1``."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.maximum(np.abs(x) - lam, 0.0)


def make_l1_resolvent(dim: int) -> ResolventOperator:
    return ResolventOperator(dim, prox_l1, label="d||.||_1")


def make_normal_cone_resolvent(C: ConvexSet, dim: int) -> ResolventOperator:
    """Resolvent of the normal cone of ``C``: the projection, for every ``lam``."""
    if C.dim is not None and C.dim != dim:
        raise DimensionError(f"set of dim {C.dim} used in dimension {dim}")
    return ResolventOperator(dim, lambda lam, x: project_convex(C, x), label=f"N_{C.kind}")


def make_diagonal_ism(weights) -> IsmMapping:
    """``f(x)_i = w_i x_i`` with ``w_i > 0``; exact ism modulus ``1 / max(w)``."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise DimensionError("weights must be a non-empty 1-D array")
    if np.any(w <= 0):
        raise ValueError("diagonal ism mapping needs strictly positive weights")
    return IsmMapping(w.size, lambda x: w * x, tau=1.0 / float(w.max()), label="diag")


def make_affine_gradient(scale: float, shift) -> IsmMapping:
    """Gradient ``x -> scale*x + shift`` of ``(scale/2)||x||^2 + shift.x``.

    It is ``scale``-Lipschitz, hence ``1/scale``-ism.
    """
    b = np.asarray(shift, dtype=float)
    s = float(scale)
    if s <= 0:
        raise ValueError("scale must be positive")
    return IsmMapping(b.size, lambda x: s * x + b, tau=1.0 / s, label="affine")


def make_zero_ism(dim: int) -> IsmMapping:
    # the zero map is tau-ism for every tau > 0
    return IsmMapping(dim, lambda x: np.zeros_like(x), tau=np.inf, label="0")


def make_scaled_strongly_monotone(c: float, dim: int) -> StronglyMonotoneMapping:
    c = float(c)
    return StronglyMonotoneMapping(dim, lambda x: c * x, gamma=c, lipschitz=c, label=f"{c:g}*id")


def forward_backward_map(B: ResolventOperator, f: IsmMapping, lam: float, x) -> np.ndarray:
    """``J_lam^B (x - lam f(x))``; nonexpansive for ``lam`` in ``(0, 2 tau)``."""
    x = np.asarray(x, dtype=float)
    return resolvent_eval(B, lam, x - lam * f.apply(x))


@dataclass(frozen=True)
class SampledCheck:
    """Worst margin of a sampled inequality; ``passed`` iff margin >= -threshold."""

    name: str
    worst_margin: float
    samples: int
    threshold: float

    @property
    def passed(self) -> bool:
        return self.worst_margin >= -self.threshold


def check_firmly_nonexpansive_sampled(B: ResolventOperator, lam: float, samples=1000, seed=0,
                                      scale=10.0, threshold=1e-9) -> SampledCheck:
    """Sample ``<Jx - Jy, x - y> - ||Jx - Jy||^2`` and report its minimum."""
    if not lam > 0 or samples < 1:
        raise ValueError("need lam > 0 and samples >= 1")
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(samples):
        x = scale * rng.standard_normal(B.dim)
        y = scale * rng.standard_normal(B.dim)
        d = B(lam, x) - B(lam, y)
        worst = min(worst, inner(d, x - y) - inner(d, d))
    return SampledCheck(f"firm-nonexpansive[{B.label}, lam={lam:g}]", worst, samples, threshold)


def check_nonexpansive_sampled(T: Callable, dim: int, samples=1000, seed=0, scale=10.0,
                               threshold=1e-9, name="nonexpansive") -> SampledCheck:
    """Sample ``||x - y|| - ||Tx - Ty||`` and report its minimum."""
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(samples):
        x = scale * rng.standard_normal(dim)
        y = scale * rng.standard_normal(dim)
        worst = min(worst, np.linalg.norm(x - y) - np.linalg.norm(T(x) - T(y)))
    return SampledCheck(name, float(worst), samples, threshold)


def check_ism_sampled(f: Callable, dim: int, tau: float, samples=1000, seed=0, scale=10.0,
                      threshold=1e-10, name="ism") -> SampledCheck:
    """Sample ``<fx - fy, x - y> - tau ||fx - fy||^2`` and report its minimum."""
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(samples):
        x = scale * rng.standard_normal(dim)
        y = scale * rng.standard_normal(dim)
        d = f(x) - f(y)
        dd = inner(d, d)
        if dd == 0.0:
            continue
        worst = min(worst, inner(d, x - y) - tau * dd)
    return SampledCheck(name, float(worst), samples, threshold)


def check_strongly_monotone_sampled(F: StronglyMonotoneMapping, samples=1000, seed=0, scale=10.0,
                                    threshold=1e-10) -> list:
    """Strong monotonicity and Lipschitz margins of ``F``, as two checks."""
    rng = np.random.default_rng(seed)
    mono = lip = np.inf
    for _ in range(samples):
        x = scale * rng.standard_normal(F.dim)
        y = scale * rng.standard_normal(F.dim)
        d = F(x) - F(y)
        h = x - y
        mono = min(mono, inner(d, h) - F.gamma * inner(h, h))
        lip = min(lip, F.lipschitz * np.linalg.norm(h) - np.linalg.norm(d))
    return [
        SampledCheck(f"strongly-monotone[{F.label}]", float(mono), samples, threshold),
        SampledCheck(f"lipschitz[{F.label}]", float(lip), samples, threshold),
    ]
