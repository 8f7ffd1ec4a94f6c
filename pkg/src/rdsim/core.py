"""Scaling exponents, similarity coordinates, domains and profiles.

A reaction-diffusion equation

    W_t = (D W_x)_x + f

is invariant under ``x -> eps**a x``, ``t -> eps**b t`` when
``b = 2a - d = c - e`` (``c``, ``d``, ``e`` being the exponents of W, D
and f).  With ``b = 1`` everything is fixed by two numbers, ``alpha = a``
and ``mu = c``; solutions then take the form ``W = t**mu y(x / t**alpha)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import _mathfn as mf

# relative deviations are measured against max(|value|, SCALE_FLOOR)
SCALE_FLOOR = 1e-300


class DomainError(ValueError):
    """Raised when a point lies outside the region where a quantity is defined."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class ScalingExponents:
    """The two independent scaling exponents (similarity and growth)."""

    alpha: float
    mu: float

    @property
    def nu(self) -> float:
        """Exponent of the diffusion coefficient, ``2 alpha - 1``."""
        return 2.0 * self.alpha - 1.0

    @property
    def lam(self) -> float:
        """Exponent of the reaction term, ``mu - 1``."""
        return self.mu - 1.0

    @property
    def conserving(self) -> bool:
        return self.mu == -self.alpha

    @property
    def mass_exponent(self) -> float:
        """Total mass grows as ``t**(alpha + mu)``."""
        return self.alpha + self.mu


class SpatialDomain(enum.Enum):
    FULL_LINE = "full-line"
    HALF_LINE_NONNEGATIVE = "half-line-nonnegative"
    HALF_LINE_NONPOSITIVE = "half-line-nonpositive"

    def contains(self, x) -> bool:
        if self is SpatialDomain.HALF_LINE_NONNEGATIVE:
            return x >= 0
        if self is SpatialDomain.HALF_LINE_NONPOSITIVE:
            return x <= 0
        return bool(np.isfinite(float(x)))

    @property
    def bounds(self) -> tuple[float, float]:
        if self is SpatialDomain.HALF_LINE_NONNEGATIVE:
            return 0.0, np.inf
        if self is SpatialDomain.HALF_LINE_NONPOSITIVE:
            return -np.inf, 0.0
        return -np.inf, np.inf


def _d1_central(fn, z, h):
    return (-fn(z + 2 * h) + 8 * fn(z + h) - 8 * fn(z - h) + fn(z - 2 * h)) / (12 * h)


def _d2_central(fn, z, h):
    return (-fn(z + 2 * h) + 16 * fn(z + h) - 30 * fn(z) + 16 * fn(z - h)
            - fn(z - 2 * h)) / (12 * h * h)


def richardson(stencil, fn, z, h, levels, order=4):
    """Apply ``levels`` halvings of Richardson extrapolation to a stencil.

    ``order`` is the leading truncation order of ``stencil``; each level
    removes one even power of ``h``.
    """
    table = [stencil(fn, z, h / 2 ** k) for k in range(levels + 1)]
    p = order
    while len(table) > 1:
        factor = 2 ** p
        table = [(factor * table[k + 1] - table[k]) / (factor - 1)
                 for k in range(len(table) - 1)]
        p += 2
    return table[0]


def default_step(z, rel=1e-4):
    """Relative finite-difference step ``rel * max(1, |z|)``."""
    az = abs(z)
    return rel * (az if az > 1 else 1)


@dataclass(frozen=True)
class Profile:
    """A function of one variable with optional analytic derivatives.

    Missing derivatives fall back to five-point central differences with
    Richardson extrapolation.
    """

    fn: Callable
    d1: Optional[Callable] = None
    d2: Optional[Callable] = None

    def __call__(self, z):
        return self.fn(z)

    def has_derivative(self, order: int) -> bool:
        return (self.d1 if order == 1 else self.d2) is not None

    def derivative(self, z, order=1, h=None, levels=1, analytic=True):
        if order not in (1, 2):
            raise ValueError("only first and second derivatives are supported")
        exact = self.d1 if order == 1 else self.d2
        if analytic and exact is not None:
            return exact(z)
        if h is None:
            h = default_step(z)
        stencil = _d1_central if order == 1 else _d2_central
        return richardson(stencil, self.fn, z, h, levels)

    @classmethod
    def constant(cls, value: float) -> "Profile":
        return cls(lambda z: value * mf.ones_like(z),
                   lambda z: mf.zeros_like(z),
                   lambda z: mf.zeros_like(z))


ZERO = Profile.constant(0.0)
ONE = Profile.constant(1.0)


def similarity_variable(x, t, alpha):
    """Return ``z = x / t**alpha``."""
    if np.any(np.asarray(t, dtype=float) <= 0):
        raise DomainError("similarity variable undefined at t <= 0")
    return x / t ** alpha


@dataclass(frozen=True)
class SimilarityMap:
    exponents: ScalingExponents

    def z(self, x, t):
        return similarity_variable(x, t, self.exponents.alpha)

    def x(self, z, t):
        if np.any(np.asarray(t, dtype=float) <= 0):
            raise DomainError("similarity variable undefined at t <= 0")
        return z * t ** self.exponents.alpha


def reconstruct_W(y: Callable, exp: ScalingExponents) -> Callable:
    """Build the field ``W(x, t) = t**mu y(x / t**alpha)`` from a profile."""

    def W(x, t):
        z = similarity_variable(x, t, exp.alpha)
        return t ** exp.mu * y(z)

    return W


def _relative(a, b):
    a = float(a)
    b = float(b)
    return abs(a - b) / max(abs(a), abs(b), SCALE_FLOOR)


def check_scale_invariance(system, epsilon: float,
                           sample_points: Iterable[Sequence[float]]) -> float:
    """Maximum relative defect of D, f and W under the scaling map.

    With ``b = 1`` the map is ``x -> eps**alpha x``, ``t -> eps t`` and the
    fields must pick up factors ``eps**(2 alpha - 1)``, ``eps**(mu - 1)`` and
    ``eps**mu``.  Returns 0.0 exactly for ``epsilon == 1``.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    exps = system.exponents
    sx = epsilon ** exps.alpha
    factors = (epsilon ** exps.nu, epsilon ** exps.lam, epsilon ** exps.mu)
    points = [(float(x), float(t)) for x, t in sample_points]
    for i, (x, t) in enumerate(points):
        if t <= 0 or not system.domain.contains(x) or not system.domain.contains(sx * x):
            raise DomainError(f"sample point {i} ({x}, {t}) outside domain", index=i)
    if epsilon == 1:
        return 0.0
    worst = 0.0
    for x, t in points:
        xs, ts = sx * x, epsilon * t
        fields = (system.D_field, system.f_field, system.W_field)
        for field, k in zip(fields, factors):
            worst = max(worst, _relative(field(xs, ts), k * field(x, t)))
    return worst
