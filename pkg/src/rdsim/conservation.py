"""Particle-number law and the integrated continuity identity.

For a scaling solution ``N(t) = int W dx = t**(alpha + mu) int y dz`` and

    (alpha + mu) int y dz = int sigma dz + [rho y']_boundary

so the mass is conserved exactly when ``mu = -alpha``.  On a finite z-window
the bracket also carries ``alpha z y``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np
from scipy.integrate import quad

from .core import SCALE_FLOOR

EPSABS = 1e-10
EPSREL = 1e-8
TAIL_RATIO = 1e-12
START_CUT = 8.0
MAX_DOUBLINGS = 12
DEFAULT_WINDOW = (-30.0, 30.0)
PIECE_WIDTH = 4.0
WINDOW_DPS = 40


class DivergentTotalNumber(ValueError):
    """The density does not decay, so the total number is infinite."""


@dataclass
class ConservationReport:
    times: list = field(default_factory=list)
    N_values: list = field(default_factory=list)
    fitted_exponent: Optional[float] = None
    expected_exponent: Optional[float] = None
    identity_lhs: Optional[float] = None
    identity_rhs: Optional[float] = None
    defect: Optional[float] = None
    # diagnostics, not part of the serialized report
    integral_sigma: Optional[float] = None
    boundary_term: Optional[float] = None
    window: Optional[tuple] = None
    windowed: bool = False

    FIELDS = ("times", "N_values", "fitted_exponent", "expected_exponent",
              "identity_lhs", "identity_rhs", "defect")

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.FIELDS}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _integrate(fn, lo, hi, epsabs=EPSABS, epsrel=EPSREL):
    """Adaptive quadrature over [lo, hi], split into pieces of bounded width."""
    n = max(1, int(math.ceil((hi - lo) / PIECE_WIDTH)))
    edges = np.linspace(lo, hi, n + 1)
    total, err = 0.0, 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = quad(lambda s: float(fn(s)), float(a), float(b),
                    epsabs=epsabs / n, epsrel=epsrel, limit=200)
        total += v
        err += e
    return total, err


def _integrate_mp(fn, lo, hi):
    """Extended-precision quadrature, for windows where the integrand spans many decades."""
    n = max(1, int(math.ceil(hi - lo)))
    edges = [mpmath.mpf(lo) + (mpmath.mpf(hi) - lo) * k / n for k in range(n + 1)]
    return mpmath.quad(fn, edges)


def _peak(y, lo, hi):
    zs = np.linspace(lo, hi, 2001)
    with np.errstate(over="ignore"):
        return float(np.max(np.abs(y(zs))))


def _tail(y, z):
    with np.errstate(over="ignore"):
        return abs(float(y(z)))


def z_cut(system) -> tuple[float, float]:
    """Truncated z-interval covering all but a negligible tail of ``y``.

    Compact support is used as is.  Otherwise each infinite end is pushed
    out, doubling from ``|z| = 8``, until ``|y|`` there is below 1e-12 of its
    peak; a profile that never decays raises :class:`DivergentTotalNumber`.
    """
    if system.z_support is not None:
        return -system.z_support, system.z_support
    lo_dom, hi_dom = system.domain.bounds
    y = system.y
    cut = START_CUT
    for _ in range(MAX_DOUBLINGS + 1):
        lo = max(lo_dom, -cut)
        hi = min(hi_dom, cut)
        peak = _peak(y, lo, hi)
        ends = [z for z, bounded in ((lo, math.isinf(lo_dom)), (hi, math.isinf(hi_dom))) if bounded]
        if peak > 0 and all(_tail(y, z) <= TAIL_RATIO * peak for z in ends):
            return lo, hi
        cut *= 2
    raise DivergentTotalNumber(
        f"divergent total number for {system.name}: the density does not decay at the "
        "domain ends; use check_continuity_identity on a finite window instead")


def total_number(system, t: float, truncation: Optional[float] = None, *,
                 epsabs: float = EPSABS, epsrel: float = EPSREL, full_output: bool = False):
    """``N(t) = int W(x, t) dx`` by adaptive quadrature in ``x``.

    ``truncation`` optionally fixes the z cut-off (``|z| <= truncation``); it is
    rejected if the density there is not below 1e-12 of its peak.  With
    ``full_output`` the quadrature error estimate is returned as well.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    if truncation is None:
        lo, hi = z_cut(system)
    else:
        lo_dom, hi_dom = system.domain.bounds
        lo, hi = max(lo_dom, -truncation), min(hi_dom, truncation)
        peak = _peak(system.y, lo, hi)
        for z, open_end in ((lo, math.isinf(lo_dom)), (hi, math.isinf(hi_dom))):
            if open_end and _tail(system.y, z) > TAIL_RATIO * peak:
                raise ValueError(f"truncation {truncation} too small: density at z={z} is "
                                 f"not below {TAIL_RATIO:g} of its peak")
    scale = t ** system.alpha
    value, err = _integrate(lambda x: system.W_field(x, t), lo * scale, hi * scale,
                            epsabs, epsrel)
    return (value, err) if full_output else value


def fit_exponent(times: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of ``log N`` against ``log t``."""
    return float(np.polyfit(np.log(times), np.log(values), 1)[0])


def check_N_scaling(system, times: Sequence[float]) -> ConservationReport:
    times = [float(t) for t in times]
    if len(set(times)) < 3:
        raise ValueError("need at least three distinct times")
    N = [total_number(system, t) for t in times]
    if min(N) <= 0:
        raise ValueError("total number must be positive to fit a power law")
    return ConservationReport(times=times, N_values=N, fitted_exponent=fit_exponent(times, N),
                              expected_exponent=system.exponents.mass_exponent)


def _flux(system, z):
    # rho y' + alpha z y; the second part is the Leibniz term of a z-window
    # that moves in x, and vanishes when alpha = 0 or y decays
    v = system.rho(z) * system.y.derivative(z, 1) + system.alpha * z * system.y(z)
    return v if mpmath.isinf(v) or isinstance(v, mpmath.mpf) else float(v)


def check_continuity_identity(system, window: Optional[tuple] = None, *,
                              include_boundary: bool = True) -> ConservationReport:
    """Compare ``(alpha + mu) int y dz`` with ``int sigma dz + [rho y' + alpha z y]``.

    Over the truncated domain the defect is absolute.  When ``y`` does not
    decay (or a ``window`` is given) the identity is evaluated on the window
    with the boundary flux included, and the defect is relative to the
    largest of the three terms.
    """
    windowed = window is not None
    if not windowed:
        try:
            lo, hi = z_cut(system)
        except DivergentTotalNumber:
            windowed = True
            window = DEFAULT_WINDOW
    if windowed:
        lo_dom, hi_dom = system.domain.bounds
        lo, hi = max(lo_dom, window[0]), min(hi_dom, window[1])
        with mpmath.workdps(WINDOW_DPS):
            int_y = _integrate_mp(system.y, lo, hi)
            int_sigma = _integrate_mp(system.sigma, lo, hi)
            boundary = _flux(system, mpmath.mpf(hi)) - _flux(system, mpmath.mpf(lo)) \
                if include_boundary else 0
            lhs = system.exponents.mass_exponent * int_y
            rhs = int_sigma + boundary
            scale = max(abs(lhs), abs(int_sigma), abs(boundary), SCALE_FLOOR)
            defect = float(abs(lhs - rhs) / scale)
            lhs, rhs, int_sigma, boundary = map(float, (lhs, rhs, int_sigma, boundary))
    else:
        int_y, _ = _integrate(system.y, lo, hi)
        int_sigma, _ = _integrate(system.sigma, lo, hi)
        boundary = _flux(system, hi) - _flux(system, lo) if include_boundary else 0.0
        lhs = system.exponents.mass_exponent * int_y
        rhs = int_sigma + boundary
        defect = abs(lhs - rhs)
    return ConservationReport(identity_lhs=lhs, identity_rhs=rhs, defect=defect,
                              expected_exponent=system.exponents.mass_exponent,
                              integral_sigma=int_sigma, boundary_term=boundary,
                              window=(lo, hi), windowed=windowed)
