"""Exactly solvable reaction-diffusion systems.

Every entry is built from its reduced profiles (``y``, ``rho``, ``sigma`` and,
for mass-conserving systems, the first-integral source ``tau``) together with
closed-form fields ``D(x, t)``, ``f(x, t)`` and ``W(x, t)`` written directly in
physical variables.  The two descriptions are kept independent on purpose:
the consistency checks in the test-suite compare them.

All closed forms are written with :mod:`rdsim._mathfn` so they evaluate on
numpy arrays as well as on mpmath scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from . import _mathfn as mf
from .core import ONE, ZERO, Profile, ScalingExponents, SpatialDomain

PARAM_KEYS = ("alpha", "mu", "beta0", "beta1", "gamma", "eta", "C", "c", "beta", "n", "sign")

NEGATIVE_DIFFUSION_WARNING = "negative diffusion coefficient"


class ParamConstraintViolation(ValueError):
    """A parameter set violates a constraint required for a valid solution."""

    def __init__(self, param: str, constraint: str, value):
        self.param = param
        self.constraint = constraint
        self.value = value
        super().__init__(f"{param}={value!r} violates constraint: {constraint}")


class DegenerateParameterError(ParamConstraintViolation):
    """Parameters sit on a pole or a degenerate limit of the closed form."""


@dataclass(frozen=True)
class AnalyticRDSystem:
    """A reaction-diffusion system together with its exact scaling solution.

    ``D_field``, ``f_field`` and ``W_field`` take ``(x, t)``.  When the
    diffusion coefficient or the reaction depends on the density,
    ``diffusion_w`` / ``reaction_w`` take ``(W, x, t)`` and the ``*_field``
    versions are their compositions with the exact solution.
    ``reaction_rate_w`` is the per-capita rate ``f / W`` for such systems.
    """

    name: str
    domain: SpatialDomain
    exponents: ScalingExponents
    params: Mapping[str, float]
    y: Profile
    rho: Profile
    sigma: Profile
    D_field: Callable
    f_field: Callable
    W_field: Callable
    tau: Optional[Profile] = None
    diffusion_w: Optional[Callable] = None
    reaction_w: Optional[Callable] = None
    reaction_rate_w: Optional[Callable] = None
    z_support: Optional[float] = None
    z_range: tuple = (-8.0, 8.0)
    pde_z_range: Optional[tuple] = None
    t_window: tuple = (1.0, 3.0)
    warnings: tuple = ()

    @property
    def conserving(self) -> bool:
        return self.exponents.conserving

    @property
    def alpha(self) -> float:
        return self.exponents.alpha

    @property
    def mu(self) -> float:
        return self.exponents.mu

    def support(self, t):
        """Half-width in ``x`` of the compact support at time ``t`` (None if unbounded)."""
        if self.z_support is None:
            return None
        return self.z_support * t ** self.alpha

    def in_support(self, x, t) -> bool:
        s = self.support(t)
        return s is None or abs(x) <= s

    @property
    def density_dependent(self) -> bool:
        return self.diffusion_w is not None or self.reaction_w is not None


# -- helpers -------------------------------------------------------------------

def _check(cond: bool, param: str, constraint: str, value):
    if not cond:
        raise ParamConstraintViolation(param, constraint, value)


# -- mass-conserving systems (mu = -alpha) -------------------------------------

def fp_gaussian_drift(alpha: float, beta0: float, beta1: float) -> AnalyticRDSystem:
    """Gaussian solution with linear drift ``beta(z) = beta1 z + beta0`` and ``rho = 1``."""
    _check(alpha > beta1, "beta1", "alpha > beta1", beta1)
    k = alpha - beta1
    z0 = beta0 / k
    norm = math.sqrt(k / (2 * math.pi))

    def y(z):
        return norm * mf.exp(-0.5 * k * (z - z0) ** 2)

    def dy(z):
        return -k * (z - z0) * y(z)

    def d2y(z):
        return (k * k * (z - z0) ** 2 - k) * y(z)

    def tau(z):
        return (beta1 * z + beta0) * y(z)

    def dtau(z):
        return beta1 * y(z) + (beta1 * z + beta0) * dy(z)

    def d2tau(z):
        return 2 * beta1 * dy(z) + (beta1 * z + beta0) * d2y(z)

    def W(x, t):
        s2 = t ** (2 * alpha)
        return mf.sqrt(k / (2 * math.pi * s2)) * mf.exp(
            -0.5 * k * (x - beta0 * t ** alpha / k) ** 2 / s2)

    def D(x, t):
        return t ** (2 * alpha - 1) * mf.ones_like(x)

    def f(x, t):
        return -t ** (-(alpha + 1)) * dtau(x / t ** alpha)

    width = 8.0 / math.sqrt(k)
    return AnalyticRDSystem(
        name="FP-GAUSS",
        domain=SpatialDomain.FULL_LINE,
        exponents=ScalingExponents(alpha, -alpha),
        params={"alpha": alpha, "beta0": beta0, "beta1": beta1},
        y=Profile(y, dy, d2y),
        rho=ONE,
        sigma=Profile(lambda z: -dtau(z), lambda z: -d2tau(z)),
        tau=Profile(tau, dtau, d2tau),
        D_field=D, f_field=f, W_field=W,
        z_range=(z0 - width, z0 + width),
    )


def nonfp_gaussian_pair(alpha: float, gamma: float, eta: float, C: float) -> AnalyticRDSystem:
    """``rho = 1`` with source ``tau = 2 gamma z exp(-eta z^2)``: sum of two Gaussians."""
    _check(eta > 0, "eta", "eta > 0", eta)
    _check(alpha > 0, "alpha", "alpha > 0 (normalizable density)", alpha)
    _check(gamma >= 0, "gamma", "gamma >= 0 (positivity bound assumes it)", gamma)
    if alpha == 2 * eta:
        raise DegenerateParameterError("alpha", "alpha != 2 eta", alpha)
    gap = alpha - 2 * eta
    bound = (-1.0 if gap > 0 else 1.0) * 2 * gamma / abs(gap)
    _check(C >= bound, "C", f"C >= {bound:g} (= {'-' if gap > 0 else '+'}2 gamma/|alpha - 2 eta|)", C)

    def amplitude(z):
        return 2 * gamma / (mf.promote(alpha, z) - 2 * eta)

    def y(z):
        return amplitude(z) * mf.exp(-eta * z * z) + C * mf.exp(-0.5 * alpha * z * z)

    def dy(z):
        return (-2 * eta * z * amplitude(z) * mf.exp(-eta * z * z)
                - alpha * z * C * mf.exp(-0.5 * alpha * z * z))

    def d2y(z):
        return (amplitude(z) * (4 * z * z * eta * eta - 2 * eta) * mf.exp(-eta * z * z)
                + C * (z * z * alpha * alpha - alpha) * mf.exp(-0.5 * alpha * z * z))

    def tau(z):
        return 2 * gamma * z * mf.exp(-eta * z * z)

    def dtau(z):
        return 2 * gamma * (1 - 2 * eta * z * z) * mf.exp(-eta * z * z)

    def d2tau(z):
        return 2 * gamma * (4 * z ** 3 * eta * eta - 6 * eta * z) * mf.exp(-eta * z * z)

    def W(x, t):
        z = x / t ** alpha
        return t ** (-alpha) * (amplitude(z) * mf.exp(-eta * z * z) + C * mf.exp(-0.5 * alpha * z * z))

    def D(x, t):
        return t ** (2 * alpha - 1) * mf.ones_like(x)

    def f(x, t):
        z = x / t ** alpha
        return -2 * gamma * (1 - 2 * eta * z * z) * t ** (-(alpha + 1)) * mf.exp(-eta * z * z)

    return AnalyticRDSystem(
        name="NFP-GAUSS",
        domain=SpatialDomain.FULL_LINE,
        exponents=ScalingExponents(alpha, -alpha),
        params={"alpha": alpha, "gamma": gamma, "eta": eta, "C": C},
        y=Profile(y, dy, d2y),
        rho=ONE,
        sigma=Profile(lambda z: -dtau(z), lambda z: -d2tau(z)),
        tau=Profile(tau, dtau, d2tau),
        D_field=D, f_field=f, W_field=W,
        z_range=(-10.0, 10.0),
    )


def nonfp_exponential_pair(alpha: float, eta: float, C: float) -> AnalyticRDSystem:
    """``rho = z`` on the half line with source ``tau = z exp(-eta z)``."""
    _check(eta > 0, "eta", "eta > 0", eta)
    _check(alpha > 0, "alpha", "alpha > 0", alpha)
    if alpha == eta:
        raise DegenerateParameterError("alpha", "alpha != eta", alpha)
    gap = alpha - eta
    bound = (-1.0 if gap > 0 else 1.0) / abs(gap)
    _check(C >= bound, "C", f"C >= {bound:g} (= {'-' if gap > 0 else '+'}1/|alpha - eta|)", C)

    def amplitude(z):
        return 1 / (mf.promote(alpha, z) - eta)

    def y(z):
        return amplitude(z) * mf.exp(-eta * z) + C * mf.exp(-alpha * z)

    def dy(z):
        return -eta * amplitude(z) * mf.exp(-eta * z) - alpha * C * mf.exp(-alpha * z)

    def d2y(z):
        return eta * eta * amplitude(z) * mf.exp(-eta * z) + alpha * alpha * C * mf.exp(-alpha * z)

    def tau(z):
        return z * mf.exp(-eta * z)

    def dtau(z):
        return (1 - eta * z) * mf.exp(-eta * z)

    def d2tau(z):
        return (eta * eta * z - 2 * eta) * mf.exp(-eta * z)

    def W(x, t):
        z = x / t ** alpha
        return t ** (-alpha) * (amplitude(z) * mf.exp(-eta * z) + C * mf.exp(-alpha * z))

    def D(x, t):
        return t ** (alpha - 1) * x

    def f(x, t):
        z = x / t ** alpha
        return -(1 - eta * z) * t ** (-(alpha + 1)) * mf.exp(-eta * z)

    return AnalyticRDSystem(
        name="NFP-EXP",
        domain=SpatialDomain.HALF_LINE_NONNEGATIVE,
        exponents=ScalingExponents(alpha, -alpha),
        params={"alpha": alpha, "eta": eta, "C": C},
        y=Profile(y, dy, d2y),
        rho=Profile(lambda z: z, lambda z: mf.ones_like(z), lambda z: mf.zeros_like(z)),
        sigma=Profile(lambda z: -dtau(z), lambda z: -d2tau(z)),
        tau=Profile(tau, dtau, d2tau),
        D_field=D, f_field=f, W_field=W,
        z_range=(0.0, 20.0 / min(alpha, eta)),
        t_window=(1.0, 1.5),
    )


def nonfp_quadratic_rho(alpha: float, beta: float) -> AnalyticRDSystem:
    """``rho = alpha z^2`` on the half line with Gaussian profile ``exp(-beta z^2)``.

    The reaction is ``-t**-(alpha+1) tau'(z)`` differentiated from the source
    ``tau = alpha z (1 - 2 beta z^2) exp(-beta z^2)``, and the diffusion
    coefficient is ``alpha x^2 / t`` as required by ``rho``.
    """
    _check(alpha > 0, "alpha", "alpha > 0", alpha)
    _check(beta > 0, "beta", "beta > 0", beta)

    def y(z):
        return mf.exp(-beta * z * z)

    def dy(z):
        return -2 * beta * z * y(z)

    def d2y(z):
        return (4 * beta * beta * z * z - 2 * beta) * y(z)

    def tau(z):
        return alpha * z * (1 - 2 * beta * z * z) * y(z)

    def dtau(z):
        return alpha * (1 - 8 * beta * z * z + 4 * beta * beta * z ** 4) * y(z)

    def d2tau(z):
        return alpha * (-16 * beta * z + 16 * beta * beta * z ** 3) * y(z) \
            + alpha * (1 - 8 * beta * z * z + 4 * beta * beta * z ** 4) * dy(z)

    def W(x, t):
        z = x / t ** alpha
        return t ** (-alpha) * mf.exp(-beta * z * z)

    def D(x, t):
        return alpha * x * x / t

    def f(x, t):
        z = x / t ** alpha
        return alpha * t ** (-(alpha + 1)) * (
            8 * beta * z * z - 4 * beta * beta * z ** 4 - 1) * mf.exp(-beta * z * z)

    return AnalyticRDSystem(
        name="NFP-QUAD",
        domain=SpatialDomain.HALF_LINE_NONNEGATIVE,
        exponents=ScalingExponents(alpha, -alpha),
        params={"alpha": alpha, "beta": beta},
        y=Profile(y, dy, d2y),
        rho=Profile(lambda z: alpha * z * z, lambda z: 2 * alpha * z,
                    lambda z: 2 * alpha * mf.ones_like(z)),
        sigma=Profile(lambda z: -dtau(z), lambda z: -d2tau(z)),
        tau=Profile(tau, dtau, d2tau),
        D_field=D, f_field=f, W_field=W,
        z_range=(0.0, 6.0 / math.sqrt(beta)),
    )


def nonlinear_diffusion(n: int, C: float) -> AnalyticRDSystem:
    """Compact-support solution of ``W_t = (W^n W_x)_x``; zero outside its support."""
    if n == 0:
        raise DegenerateParameterError(
            "n", "n >= 1 (n = 0 is linear diffusion: use FP-GAUSS)", n)
    _check(float(n).is_integer() and n >= 1, "n", "n is a positive integer", n)
    n = int(n)
    _check(C > 0, "C", "C > 0", C)
    alpha = 1.0 / (n + 2)
    inv = 1.0 / n

    def base(z):
        return C - 0.5 * n * alpha * z * z

    def y(z):
        return mf.positive_part(base(z)) ** inv

    def _inside(z, expr):
        b = base(z)
        if mf.is_mp(b):
            return expr(z, b) if b > 0 else b * 0
        with np.errstate(divide="ignore", invalid="ignore"):
            bp = np.where(b > 0, b, 1.0)
            return np.where(b > 0, expr(z, bp), 0.0)

    def dy(z):
        return _inside(z, lambda z, b: -alpha * z * b ** (inv - 1))

    def d2y(z):
        return _inside(z, lambda z, b: -alpha * b ** (inv - 1)
                       + alpha * alpha * (1 - n) * z * z * b ** (inv - 2))

    rho = Profile(lambda z: mf.positive_part(base(z)),
                  lambda z: _inside(z, lambda z, b: -n * alpha * z),
                  lambda z: _inside(z, lambda z, b: -n * alpha + 0 * z))

    def W(x, t):
        return mf.positive_part(C * t ** (-n / (n + 2)) - n * x * x / (2 * (n + 2) * t)) ** inv

    def D_w(Wv, x, t):
        return Wv ** n

    def D(x, t):
        return D_w(W(x, t), x, t)

    def f(x, t):
        return mf.zeros_like(x)

    return AnalyticRDSystem(
        name="NL-DIFF",
        domain=SpatialDomain.FULL_LINE,
        exponents=ScalingExponents(alpha, -alpha),
        params={"n": n, "C": C},
        y=Profile(y, dy, d2y),
        rho=rho,
        sigma=ZERO,
        tau=ZERO,
        D_field=D, f_field=f, W_field=W,
        diffusion_w=D_w,
        z_support=math.sqrt(2 * C / (n * alpha)),
        z_range=(-math.sqrt(2 * C / (n * alpha)), math.sqrt(2 * C / (n * alpha))),
    )


# -- non-conserving systems (mu != -alpha) -------------------------------------

def _require_growth(alpha, mu):
    if mu == -alpha:
        raise ParamConstraintViolation(
            "mu", "mu != -alpha (mass-conserving case belongs to the conserving family)", mu)


def growth_gaussian(alpha: float, mu: float, c: float) -> AnalyticRDSystem:
    """``rho = 1``, Gaussian profile ``exp(-c z^2 / 2)`` with matched reaction."""
    _check(c > 0, "c", "c > 0", c)
    _require_growth(alpha, mu)

    def y(z):
        return mf.exp(-0.5 * c * z * z)

    def dy(z):
        return -c * z * y(z)

    def d2y(z):
        return (c * c * z * z - c) * y(z)

    def sigma(z):
        return (c * (alpha - c) * z * z + (mu + c)) * y(z)

    def dsigma(z):
        return 2 * c * (alpha - c) * z * y(z) + (c * (alpha - c) * z * z + (mu + c)) * dy(z)

    def W(x, t):
        z = x / t ** alpha
        return t ** mu * mf.exp(-0.5 * c * z * z)

    def D(x, t):
        return t ** (2 * alpha - 1) * mf.ones_like(x)

    def f(x, t):
        z = x / t ** alpha
        return t ** (mu - 1) * (c * (alpha - c) * z * z + (mu + c)) * mf.exp(-0.5 * c * z * z)

    w = 8.0 / math.sqrt(c)
    return AnalyticRDSystem(
        name="GR-GAUSS",
        domain=SpatialDomain.FULL_LINE,
        exponents=ScalingExponents(alpha, mu),
        params={"alpha": alpha, "mu": mu, "c": c},
        y=Profile(y, dy, d2y),
        rho=ONE,
        sigma=Profile(sigma, dsigma),
        D_field=D, f_field=f, W_field=W,
        z_range=(-w, w),
    )


def growth_halfline(alpha: float, mu: float, beta: float, c: float) -> AnalyticRDSystem:
    """``rho = beta z`` on the half line with profile ``exp(-c z)``."""
    _check(c > 0, "c", "c > 0", c)
    _check(beta > 0, "beta", "beta > 0", beta)
    _require_growth(alpha, mu)

    def y(z):
        return mf.exp(-c * z)

    def dy(z):
        return -c * y(z)

    def d2y(z):
        return c * c * y(z)

    def sigma(z):
        return (c * (alpha - beta * c) * z + mu + beta * c) * y(z)

    def dsigma(z):
        return c * (alpha - beta * c) * y(z) + (c * (alpha - beta * c) * z + mu + beta * c) * dy(z)

    def W(x, t):
        return t ** mu * mf.exp(-c * x / t ** alpha)

    def D(x, t):
        return beta * t ** (alpha - 1) * x

    def f(x, t):
        z = x / t ** alpha
        return t ** (mu - 1) * (c * (alpha - beta * c) * z + (mu + beta * c)) * mf.exp(-c * z)

    return AnalyticRDSystem(
        name="GR-HALF",
        domain=SpatialDomain.HALF_LINE_NONNEGATIVE,
        exponents=ScalingExponents(alpha, mu),
        params={"alpha": alpha, "mu": mu, "beta": beta, "c": c},
        y=Profile(y, dy, d2y),
        rho=Profile(lambda z: beta * z, lambda z: beta * mf.ones_like(z),
                    lambda z: mf.zeros_like(z)),
        sigma=Profile(sigma, dsigma),
        D_field=D, f_field=f, W_field=W,
        z_range=(0.0, 30.0 / c),
    )


def growth_quadratic(alpha: float, mu: float, variant: str = "g=-1") -> AnalyticRDSystem:
    """``rho = -alpha z^2 / 2``, which removes the first-derivative term.

    ``variant`` picks the log-derivative ``g`` of the profile:
    ``"g=-1"`` gives ``exp(-z)`` on the half line (GR-Q1) and ``"g=-z"``
    gives ``exp(-z^2/2)`` on the full line (GR-Q2).
    """
    if alpha == 0:
        raise DegenerateParameterError("alpha", "alpha != 0 (rho vanishes identically)", alpha)
    _require_growth(alpha, mu)
    if variant in ("g=-1", "Q1", "GR-Q1"):
        name, domain = "GR-Q1", SpatialDomain.HALF_LINE_NONNEGATIVE

        def y(z):
            return mf.exp(-z)

        def dy(z):
            return -mf.exp(-z)

        def d2y(z):
            return mf.exp(-z)

        def g2(z):      # g^2 + g'
            return mf.ones_like(z)

        def dg2(z):
            return mf.zeros_like(z)

        z_range = (0.0, 30.0)
    elif variant in ("g=-z", "Q2", "GR-Q2"):
        name, domain = "GR-Q2", SpatialDomain.FULL_LINE

        def y(z):
            return mf.exp(-0.5 * z * z)

        def dy(z):
            return -z * y(z)

        def d2y(z):
            return (z * z - 1) * y(z)

        def g2(z):
            return z * z - 1

        def dg2(z):
            return 2 * z

        z_range = (-8.0, 8.0)
    else:
        raise ValueError(f"unknown variant {variant!r}; expected 'g=-1' or 'g=-z'")

    def sigma(z):
        return (0.5 * alpha * z * z * g2(z) + mu) * y(z)

    def dsigma(z):
        return ((alpha * z * g2(z) + 0.5 * alpha * z * z * dg2(z)) * y(z)
                + (0.5 * alpha * z * z * g2(z) + mu) * dy(z))

    def D(x, t):
        return -0.5 * alpha * x * x / t

    def f(x, t):
        return t ** (mu - 1) * sigma(x / t ** alpha)

    def W(x, t):
        return t ** mu * y(x / t ** alpha)

    return AnalyticRDSystem(
        name=name,
        domain=domain,
        exponents=ScalingExponents(alpha, mu),
        params={"alpha": alpha, "mu": mu},
        y=Profile(y, dy, d2y),
        rho=Profile(lambda z: -0.5 * alpha * z * z, lambda z: -alpha * z,
                    lambda z: -alpha * mf.ones_like(z)),
        sigma=Profile(sigma, dsigma),
        D_field=D, f_field=f, W_field=W,
        z_range=z_range,
        warnings=(NEGATIVE_DIFFUSION_WARNING,) if alpha > 0 else (),
    )


def fisher_constants(n: float, sign: int = 1) -> tuple[float, float]:
    """Return ``(gamma, b)``: the drift coefficient and profile exponent.

    ``gamma = sign (h + 1/h)`` and ``b = sign (h - 1/h)`` with
    ``h = sqrt(n/2 + 1)``.
    """
    h = math.sqrt(n / 2 + 1)
    return sign * (h + 1 / h), sign * (h - 1 / h)


def _parse_sign(sign) -> int:
    if sign in (1, "+", "+1", 1.0):
        return 1
    if sign in (-1, "-", "-1", -1.0, "−"):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def fisher_scaling(n: float, mu: float, beta: float, C: float, sign="+") -> AnalyticRDSystem:
    """Generalized Fisher scaling wave with ``D = beta exp(gamma x) / t``.

    The similarity exponent is forced to zero, so ``z = x`` and
    ``W = t**mu (1 + C exp(b x))**(-2/n)``.  ``sign`` selects the branch
    ``gamma = +-(h + 1/h)``; the ``-`` branch is the mirror image ``x -> -x``.
    """
    _check(n > 0, "n", "n > 0", n)
    _check(C > 0, "C", "C > 0", C)
    if beta == 0:
        raise DegenerateParameterError("beta", "beta != 0 (rho vanishes identically)", beta)
    _require_growth(0.0, mu)
    s = _parse_sign(sign)
    gamma, b = fisher_constants(n, s)

    # the ODE balance holds only if gamma and b agree to working precision
    def consts(z):
        if not mf.is_mp(z):
            return gamma, b, 2.0 / n
        h = mf.sqrt(mf.promote(n, z) / 2 + 1)
        return s * (h + 1 / h), s * (h - 1 / h), 2 / mf.promote(n, z)

    def y(z):
        _, b, p = consts(z)
        return (1 + C * mf.exp(b * z)) ** (-p)

    def dy(z):
        _, b, p = consts(z)
        e = C * mf.exp(b * z)
        return -p * b * e * (1 + e) ** (-p - 1)

    def d2y(z):
        _, b, p = consts(z)
        e = C * mf.exp(b * z)
        return -p * b * b * e * (1 + e) ** (-p - 1) + p * (p + 1) * b * b * e * e * (1 + e) ** (-p - 2)

    def rho(z):
        return beta * mf.exp(consts(z)[0] * z)

    def drho(z):
        g = consts(z)[0]
        return g * beta * mf.exp(g * z)

    def d2rho(z):
        g = consts(z)[0]
        return g * g * beta * mf.exp(g * z)

    def sigma(z):
        yz = y(z)
        return mu * yz + rho(z) * yz * (1 - yz ** n)

    def rate_w(Wv, x, t):
        g = consts(x)[0]
        return (mu + beta * mf.exp(g * x) * (1 - t ** (-n * mu) * Wv ** n)) / t

    def reaction_w(Wv, x, t):
        return rate_w(Wv, x, t) * Wv

    def W(x, t):
        _, b, p = consts(x)
        return t ** mu * (1 + C * mf.exp(b * x)) ** (-p)

    def D(x, t):
        return beta * mf.exp(consts(x)[0] * x) / t

    def f(x, t):
        return reaction_w(W(x, t), x, t)

    return AnalyticRDSystem(
        name="FISHER-N",
        domain=SpatialDomain.FULL_LINE,
        exponents=ScalingExponents(0.0, mu),
        params={"n": n, "mu": mu, "beta": beta, "C": C, "sign": "+" if s > 0 else "-"},
        y=Profile(y, dy, d2y),
        rho=Profile(rho, drho, d2rho),
        sigma=Profile(sigma),
        D_field=D, f_field=f, W_field=W,
        reaction_w=reaction_w,
        reaction_rate_w=rate_w,
        z_range=(-20.0, 20.0),
        pde_z_range=(-5.0, 5.0),
        t_window=(0.05, 0.2),
        warnings=(NEGATIVE_DIFFUSION_WARNING,) if beta < 0 else (),
    )


# -- registry ------------------------------------------------------------------

@dataclass(frozen=True)
class SystemInfo:
    """Catalog descriptor: what a system is and how to build it."""

    name: str
    kind: str
    family: str                 # "conserving" or "non-conserving"
    builder: Callable
    defaults: Mapping[str, object]
    constraints: tuple
    exponents: str
    derived: Mapping[str, str] = field(default_factory=dict)
    warnings: tuple = ()
    # solver defaults; None marks a system excluded from time integration
    simulation: Optional[Mapping[str, float]] = None

    def build(self, **overrides) -> AnalyticRDSystem:
        params = dict(self.defaults)
        unknown = set(overrides) - set(params)
        if unknown:
            raise ValueError(f"{self.name} does not take parameter(s) {sorted(unknown)}; "
                             f"expected {sorted(params)}")
        params.update(overrides)
        return self.builder(**params)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "family": self.family,
            "exponents": self.exponents,
            "parameters": dict(self.defaults),
            "constraints": list(self.constraints),
            "derived": dict(self.derived),
            "warnings": list(self.warnings),
            "solver_eligible": self.simulation is not None,
        }


def _sim(xmin, xmax, n, dt, t0, t1):
    return {"xmin": xmin, "xmax": xmax, "n": n, "dt": dt, "t0": t0, "t1": t1}


_REGISTRY = (
    SystemInfo(
        "FP-GAUSS", "fokker-planck", "conserving",
        fp_gaussian_drift, {"alpha": 1.0, "beta0": 1.0, "beta1": 0.5},
        ("alpha > beta1",), "mu = -alpha",
        simulation=_sim(-15.0, 25.0, 800, 1e-3, 1.0, 2.0)),
    SystemInfo(
        "NFP-GAUSS", "non-fokker-planck, rho = 1", "conserving",
        nonfp_gaussian_pair, {"alpha": 0.6, "gamma": 2.0, "eta": 0.1, "C": 1.0},
        ("eta > 0", "alpha > 0", "gamma >= 0", "alpha != 2 eta",
         "C >= -2 gamma/|alpha - 2 eta| if alpha > 2 eta else C >= 2 gamma/|alpha - 2 eta|"),
        "mu = -alpha",
        simulation=_sim(-16.0, 16.0, 800, 1e-3, 1.0, 2.0)),
    SystemInfo(
        "NFP-EXP", "non-fokker-planck, rho = z", "conserving",
        nonfp_exponential_pair, {"alpha": 2.0, "eta": 1.0, "C": 1.0},
        ("eta > 0", "alpha > 0", "alpha != eta",
         "C >= -1/|alpha - eta| if alpha > eta else C >= 1/|alpha - eta|"),
        "mu = -alpha",
        simulation=_sim(0.0, 60.0, 800, 1e-3, 1.0, 1.5)),
    SystemInfo(
        "NFP-QUAD", "non-fokker-planck, rho = alpha z^2", "conserving",
        nonfp_quadratic_rho, {"alpha": 1.0, "beta": 1.0},
        ("alpha > 0", "beta > 0", "integration constant fixed to 0"),
        "mu = -alpha",
        simulation=_sim(0.0, 12.0, 400, 1e-3, 1.0, 2.0)),
    SystemInfo(
        "NL-DIFF", "nonlinear diffusion D = W^n", "conserving",
        nonlinear_diffusion, {"n": 1, "C": 1.0},
        ("n positive integer", "C > 0"),
        "alpha = -mu = 1/(n+2)",
        derived={"alpha": "1/(n+2) (derived, not free)", "mu": "-1/(n+2) (derived, not free)"},
        simulation=_sim(-4.0, 4.0, 800, 1e-3, 1.0, 2.0)),
    SystemInfo(
        "GR-GAUSS", "growth, rho = 1", "non-conserving",
        growth_gaussian, {"alpha": 1.0, "mu": 0.5, "c": 1.0},
        ("c > 0", "mu != -alpha"), "free (alpha, mu)",
        simulation=_sim(-20.0, 20.0, 800, 1e-3, 1.0, 2.0)),
    SystemInfo(
        "GR-HALF", "growth, rho = beta z", "non-conserving",
        growth_halfline, {"alpha": 1.0, "mu": 0.5, "beta": 1.0, "c": 1.0},
        ("c > 0", "beta > 0", "mu != -alpha"), "free (alpha, mu)",
        simulation=_sim(0.0, 50.0, 800, 1e-3, 1.0, 2.0)),
    SystemInfo(
        "GR-Q1", "growth, rho = -alpha z^2/2, g = -1", "non-conserving",
        lambda alpha, mu: growth_quadratic(alpha, mu, "g=-1"), {"alpha": 1.0, "mu": 0.5},
        ("alpha != 0", "mu != -alpha"), "free (alpha, mu)",
        warnings=(NEGATIVE_DIFFUSION_WARNING + " for alpha > 0",)),
    SystemInfo(
        "GR-Q2", "growth, rho = -alpha z^2/2, g = -z", "non-conserving",
        lambda alpha, mu: growth_quadratic(alpha, mu, "g=-z"), {"alpha": 1.0, "mu": 0.5},
        ("alpha != 0", "mu != -alpha"), "free (alpha, mu)",
        warnings=(NEGATIVE_DIFFUSION_WARNING + " for alpha > 0",)),
    SystemInfo(
        "FISHER-N", "generalized fisher", "non-conserving",
        fisher_scaling, {"n": 3.0, "mu": -1.0, "beta": 1.0, "C": 1.0, "sign": "+"},
        ("n > 0", "C > 0", "beta != 0", "mu != 0"),
        "alpha = 0 (forced), free mu",
        derived={"alpha": "0 (forced)", "gamma": "sign*(h_n + 1/h_n), h_n = sqrt(n/2 + 1)"},
        simulation=_sim(-10.0, 10.0, 800, 1e-3, 0.05, 0.2)),
)

_BY_NAME = {info.name: info for info in _REGISTRY}


def list_systems() -> list[SystemInfo]:
    return list(_REGISTRY)


def get_info(name: str) -> SystemInfo:
    try:
        return _BY_NAME[name.upper()]
    except KeyError:
        raise KeyError(f"unknown system {name!r}; known: {', '.join(_BY_NAME)}") from None


def build(name: str, params: Optional[Mapping[str, object]] = None) -> AnalyticRDSystem:
    """Build a catalog system by name, filling unspecified parameters with defaults."""
    return get_info(name).build(**dict(params or {}))


def default_system(name: str) -> AnalyticRDSystem:
    return build(name)


def parse_params(items) -> dict:
    """Parse ``key=value`` strings into a parameter mapping.

    Numeric values become floats; ``sign`` keeps its textual value.
    """
    out = {}
    for item in items:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ValueError(f"expected key=value, got {item!r}")
        if key not in PARAM_KEYS:
            raise ValueError(f"unknown parameter key {key!r}; allowed: {', '.join(PARAM_KEYS)}")
        raw = raw.strip()
        out[key] = raw if key == "sign" else float(raw)
    return out


def format_params(params: Mapping[str, object]) -> list[str]:
    """Inverse of :func:`parse_params`."""
    return [f"{k}={v!r}" if not isinstance(v, str) else f"{k}={v}" for k, v in params.items()]
