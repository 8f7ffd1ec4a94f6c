"""Residual oracles: substitute a claimed solution back into its equations.

Three levels are checked:

* the reduced ODE  ``(rho y')' + alpha z y' - mu y + sigma = 0``,
* its first integral ``rho y' + alpha z y - tau = 0`` (mass-conserving case),
* the PDE itself, ``W_t - (D W_x)_x - f = 0``, by finite differences.

Evaluation happens in extended precision (``dps`` significant digits), so the
reported residuals reflect truncation and modelling errors rather than
float64 cancellation between large terms.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .core import DomainError, SpatialDomain, default_step, richardson

ANALYTIC = "analytic-derivative"
FINITE_DIFFERENCE = "central-difference-richardson"

DEFAULT_DPS = 40
DEFAULT_STEP = 1e-4
DEFAULT_LEVELS = 1
MARGIN_STEPS = 10
# extra Richardson level where coefficients grow like exp(|gamma z|)
_FD_LEVELS = {"FISHER-N": 2}


class ContractError(ValueError):
    """An oracle was called on a system it does not apply to."""


@dataclass
class ResidualReport:
    max_abs: float
    l2: float
    n_samples: int
    step_sizes: dict
    method: str
    skipped: int = 0
    worst_at: tuple | None = None
    failures: list = field(default_factory=list)

    def passed(self, tol: float) -> bool:
        return not self.failures and self.n_samples > 0 and self.max_abs < tol

    def to_dict(self) -> dict:
        return {
            "max_abs": self.max_abs,
            "l2": self.l2,
            "n_samples": self.n_samples,
            "method": self.method,
            "skipped": self.skipped,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _summarize(values, locations, skipped, steps, method, failures):
    if values:
        mags = [abs(v) for v in values]
        k = max(range(len(mags)), key=mags.__getitem__)
        max_abs = float(mags[k])
        l2 = float(mpmath.sqrt(mpmath.fsum(m * m for m in mags) / len(mags)))
        worst = locations[k]
    else:
        max_abs, l2, worst = 0.0, 0.0, None
    if failures:
        max_abs = math.inf
    return ResidualReport(max_abs=max_abs, l2=min(l2, max_abs), n_samples=len(values),
                          step_sizes=steps, method=method, skipped=skipped,
                          worst_at=worst, failures=failures)


def _with_limit(fn, z):
    """Evaluate ``fn`` at ``z``; at a removable singularity use one-sided limits."""
    try:
        v = fn(z)
        if mpmath.isfinite(v):
            return v
    except ZeroDivisionError:
        pass
    d = mpmath.mpf(10) ** (-mpmath.mp.dps // 2) * max(1, abs(z))
    try:
        return (fn(z - d) + fn(z + d)) / 2
    except ZeroDivisionError:
        return mpmath.nan


def _check_z(system, zs):
    for i, z in enumerate(zs):
        if not system.domain.contains(z):
            raise DomainError(f"sample {i} (z={z}) outside the domain", index=i)
        if system.z_support is not None and abs(z) > system.z_support:
            raise DomainError(f"sample {i} (z={z}) outside the support", index=i)


def _near_z_edge(system, z, h):
    edge = MARGIN_STEPS * h
    lo, hi = system.domain.bounds
    if z - lo < edge or hi - z < edge:
        return True
    return system.z_support is not None and system.z_support - abs(z) < edge


def _uses_analytic(system, analytic):
    if not analytic:
        return False
    return (system.y.has_derivative(1) and system.y.has_derivative(2)
            and system.rho.has_derivative(1))


def ode_residual_at(system, z, analytic=True, step=DEFAULT_STEP, levels=DEFAULT_LEVELS):
    """Pointwise residual of the reduced ODE."""
    y, rho = system.y, system.rho
    h = default_step(z, step)
    y1 = y.derivative(z, 1, h, levels, analytic)
    y2 = y.derivative(z, 2, h, levels, analytic)
    r1 = rho.derivative(z, 1, h, levels, analytic)
    a, mu = system.alpha, system.mu
    return r1 * y1 + rho(z) * y2 + a * z * y1 - mu * y(z) + system.sigma(z)


def first_integral_at(system, z, analytic=True, step=DEFAULT_STEP, levels=DEFAULT_LEVELS):
    """Pointwise residual of ``rho y' + alpha z y - tau``."""
    h = default_step(z, step)
    y1 = system.y.derivative(z, 1, h, levels, analytic)
    return system.rho(z) * y1 + system.alpha * z * system.y(z) - system.tau(z)


def _run_z_oracle(system, z_samples, pointwise, analytic, step, levels, dps):
    zs = [float(z) for z in z_samples]
    _check_z(system, zs)
    use_analytic = _uses_analytic(system, analytic)
    method = ANALYTIC if use_analytic else FINITE_DIFFERENCE
    steps = {} if use_analytic else {"z": step, "richardson_levels": levels}
    values, locs, failures, skipped = [], [], [], 0
    with mpmath.workdps(dps):
        for z in zs:
            zm = mpmath.mpf(z)
            if not use_analytic and _near_z_edge(system, z, float(default_step(z, step))):
                skipped += 1
                continue
            v = _with_limit(lambda s: pointwise(system, s, use_analytic, step, levels), zm)
            if not mpmath.isfinite(v):
                failures.append(z)
                continue
            values.append(v)
            locs.append((z,))
    return _summarize(values, locs, skipped, steps, method, failures)


def ode_residual(system, z_samples: Iterable[float], *, analytic: bool = True,
                 step: float = DEFAULT_STEP, levels: int = DEFAULT_LEVELS,
                 dps: int = DEFAULT_DPS) -> ResidualReport:
    """Residual of the reduced ODE over ``z_samples``.

    Derivatives come from the profiles when available (and ``analytic`` is
    true); otherwise from five-point central differences with ``levels``
    Richardson halvings and step ``step * max(1, |z|)``.
    """
    return _run_z_oracle(system, z_samples, ode_residual_at, analytic, step, levels, dps)


def first_integral_residual(system, z_samples: Iterable[float], *, analytic: bool = True,
                            step: float = DEFAULT_STEP, levels: int = DEFAULT_LEVELS,
                            dps: int = DEFAULT_DPS) -> ResidualReport:
    """Residual of the once-integrated ODE for a mass-conserving system."""
    if not system.conserving or system.tau is None:
        raise ContractError("first integral requires mu = -alpha")
    return _run_z_oracle(system, z_samples, first_integral_at, analytic, step, levels, dps)


def fd_levels(system) -> int:
    """Richardson levels used for the finite-difference fallback on ``system``."""
    return _FD_LEVELS.get(system.name, DEFAULT_LEVELS)


def _central(fn, s, h):
    return (fn(s + h) - fn(s - h)) / (2 * h)


def pde_residual_at(system, x, t, step=DEFAULT_STEP, levels=DEFAULT_LEVELS):
    """Finite-difference residual of ``W_t - (D W_x)_x - f`` at one point."""
    W = system.W_field
    if system.diffusion_w is not None:
        def D(s):
            return system.diffusion_w(W(s, t), s, t)
    else:
        def D(s):
            return system.D_field(s, t)

    def flux_stencil(_, s, h):
        w0 = W(s, t)
        return (D(s + h / 2) * (W(s + h, t) - w0)
                - D(s - h / 2) * (w0 - W(s - h, t))) / (h * h)

    hx = default_step(x, step)
    ht = step * t
    w_t = richardson(_central, lambda s: W(x, s), t, ht, levels, order=2)
    flux = richardson(flux_stencil, None, x, hx, levels, order=2)
    if system.reaction_w is not None:
        f = system.reaction_w(W(x, t), x, t)
    else:
        f = system.f_field(x, t)
    return w_t - flux - f


def _near_x_edge(system, x, t, h):
    edge = MARGIN_STEPS * h
    dom = system.domain
    if dom is SpatialDomain.HALF_LINE_NONNEGATIVE and x < edge:
        return True
    if dom is SpatialDomain.HALF_LINE_NONPOSITIVE and x > -edge:
        return True
    s = system.support(t)
    return s is not None and s - abs(x) < edge


def pde_residual(system, xt_samples: Iterable[Sequence[float]], *,
                 step: float = DEFAULT_STEP, levels: int = DEFAULT_LEVELS,
                 dps: int = DEFAULT_DPS) -> ResidualReport:
    """Residual of the full PDE at ``(x, t)`` samples.

    Steps are ``step * max(1, |x|)`` in space and ``step * t`` in time.
    Samples within ten steps of a domain endpoint or of a support edge are
    skipped and counted in ``ResidualReport.skipped``.
    """
    pts = [(float(x), float(t)) for x, t in xt_samples]
    for i, (x, t) in enumerate(pts):
        if t <= 0:
            raise DomainError(f"sample {i} has t={t} <= 0", index=i)
        if not system.domain.contains(x):
            raise DomainError(f"sample {i} (x={x}) outside the domain", index=i)
    values, locs, failures, skipped = [], [], [], 0
    with mpmath.workdps(dps):
        for x, t in pts:
            if _near_x_edge(system, x, t, float(default_step(x, step))):
                skipped += 1
                continue
            v = pde_residual_at(system, mpmath.mpf(x), mpmath.mpf(t), step, levels)
            if not mpmath.isfinite(v):
                failures.append((x, t))
                continue
            values.append(v)
            locs.append((x, t))
    steps = {"x": step, "t": step, "richardson_levels": levels}
    return _summarize(values, locs, skipped, steps, FINITE_DIFFERENCE, failures)


# -- default sampling ------------------------------------------------------------

def default_z_samples(system, n: int = 300) -> list[float]:
    """Uniform samples over the system's nominal z-range (endpoints excluded)."""
    lo, hi = system.z_range
    return [lo + (hi - lo) * (k + 0.5) / n for k in range(n)]


def default_xt_samples(system, n: int = 300, seed: int = 0) -> list[tuple[float, float]]:
    """Random ``(x, t)`` samples: ``t`` uniform in the time window, ``x = z t**alpha``."""
    rng = np.random.default_rng(seed)
    lo, hi = system.pde_z_range or system.z_range
    t0, t1 = system.t_window
    ts = rng.uniform(t0, t1, n)
    zs = rng.uniform(lo, hi, n)
    if system.z_support is not None:
        zs = zs * 0.98
    return [(float(z * t ** system.alpha), float(t)) for z, t in zip(zs, ts)]
