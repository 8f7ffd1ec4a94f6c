"""Finite-difference time integration of ``W_t = (D W_x)_x + f``.

Flux-form theta scheme on a uniform node-centred grid:

    (W^{n+1} - W^n) / dt = theta L W^{n+1} + (1 - theta) L W^n + reaction

with ``(L W)_i = [D_{i+1/2} (W_{i+1} - W_i) - D_{i-1/2} (W_i - W_{i-1})] / dx^2``.
Coefficients are frozen at ``t_n + theta dt``.  A density-independent
reaction is an explicit source at that same time level; a density-dependent
reaction ``f = r(W) W`` is linearised with the rate ``r`` lagged and the
factor ``W`` weighted by theta like the diffusion term.  One tridiagonal
solve per step.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from scipy.integrate import trapezoid

from .tridiag import solve_tridiagonal

ANALYTIC_DIRICHLET = "analytic-dirichlet"
HOMOGENEOUS_DIRICHLET = "homogeneous-dirichlet"


class SolverError(RuntimeError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError("grid requires x_min < x_max")
        if int(self.n_cells) != self.n_cells or self.n_cells < 16:
            raise ValueError("grid requires an integer n_cells >= 16")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def nodes(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_cells + 1)

    @property
    def faces(self) -> np.ndarray:
        return self.x_min + self.dx * (np.arange(self.n_cells) + 0.5)

    def refined(self, factor: int = 2) -> "Grid1D":
        return Grid1D(self.x_min, self.x_max, self.n_cells * factor)


@dataclass(frozen=True)
class SolverConfig:
    dt: float
    t_start: float
    t_end: float
    theta: float = 0.5
    boundary: str = ANALYTIC_DIRICHLET
    nonlinear_lag: bool = True

    def __post_init__(self):
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError("theta must lie in [0, 1]")
        if not self.t_start > 0:
            raise ValueError("t_start must be positive (scaling solutions are singular at t = 0)")
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if not 0 < self.dt <= self.t_end - self.t_start:
            raise ValueError("dt must be positive and no larger than t_end - t_start")
        if self.boundary not in (ANALYTIC_DIRICHLET, HOMOGENEOUS_DIRICHLET):
            raise ValueError(f"unknown boundary condition {self.boundary!r}")

    @property
    def n_steps(self) -> int:
        span = (self.t_end - self.t_start) / self.dt
        return max(1, int(math.ceil(span - 1e-9)))


@dataclass
class NumericField:
    grid: Grid1D
    t: float
    values: np.ndarray

    def mass(self) -> float:
        return float(trapezoid(self.values, self.grid.nodes))

    def write_csv(self, path) -> Path:
        path = Path(path)
        lines = ["x,W"]
        lines += [f"{x:.17g},{w:.17g}" for x, w in zip(self.grid.nodes, self.values)]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    def write_sidecar(self, path, **metadata) -> Path:
        path = Path(path)
        payload = {"t": self.t, "grid": asdict(self.grid), **metadata}
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path

    @classmethod
    def read_csv(cls, path, grid: Grid1D, t: float) -> "NumericField":
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        return cls(grid, t, data[:, 1])


def _face_diffusion(system, grid, W, t):
    xf = grid.faces
    if system.diffusion_w is not None:
        Wf = 0.5 * (W[:-1] + W[1:])
        return np.asarray(system.diffusion_w(Wf, xf, t), dtype=float)
    return np.broadcast_to(np.asarray(system.D_field(xf, t), dtype=float), xf.shape).copy()


def _apply_L(Df, W, dx):
    """Interior values of the flux-form operator (boundary entries are zero)."""
    flux = Df * np.diff(W) / dx
    out = np.zeros_like(W)
    out[1:-1] = (flux[1:] - flux[:-1]) / dx
    return out


def _step(system, grid, W, t, dt, theta, W_coef, boundary_values):
    x, dx = grid.nodes, grid.dx
    ts = t + theta * dt
    Df = _face_diffusion(system, grid, W_coef, ts)
    if not np.all(np.isfinite(Df)):
        raise SolverError("non-finite diffusion coefficient")
    if np.any(Df < 0):
        raise SolverError("non-parabolic coefficient sign: diffusion coefficient is negative "
                          f"(min D = {Df.min():.3g}); forward integration is ill-posed")
    k = dt / dx ** 2
    n = W.size
    lower = np.zeros(n)
    upper = np.zeros(n)
    diag = np.ones(n)
    lower[1:-1] = -theta * k * Df[:-1]
    upper[1:-1] = -theta * k * Df[1:]
    diag[1:-1] = 1 + theta * k * (Df[:-1] + Df[1:])
    rhs = W + (1 - theta) * dt * _apply_L(Df, W, dx)
    if system.reaction_rate_w is not None:
        r = np.asarray(system.reaction_rate_w(W_coef, x, ts), dtype=float)
        diag[1:-1] -= theta * dt * r[1:-1]
        rhs[1:-1] += (1 - theta) * dt * r[1:-1] * W[1:-1]
    else:
        rhs[1:-1] += dt * np.asarray(system.f_field(x[1:-1], ts), dtype=float)
    rhs[0], rhs[-1] = boundary_values
    return solve_tridiagonal(lower, diag, upper, rhs)


def solve(system, grid: Grid1D, config: SolverConfig,
          on_step: Optional[Callable[[int, float, np.ndarray], None]] = None) -> NumericField:
    """Evolve the exact profile at ``t_start`` to ``t_end``.

    ``on_step(k, t, W)`` is called after every accepted step.
    """
    x = grid.nodes
    W = np.asarray(system.W_field(x, config.t_start), dtype=float).copy()
    if config.boundary == HOMOGENEOUS_DIRICHLET:
        W[0] = W[-1] = 0.0
    n_steps = config.n_steps
    dt = (config.t_end - config.t_start) / n_steps
    t = config.t_start
    for k in range(n_steps):
        t_new = config.t_start + (k + 1) * dt
        if config.boundary == ANALYTIC_DIRICHLET:
            bv = (float(system.W_field(x[0], t_new)), float(system.W_field(x[-1], t_new)))
        else:
            bv = (0.0, 0.0)
        W_new = _step(system, grid, W, t, dt, config.theta, W, bv)
        if system.density_dependent and not config.nonlinear_lag:
            # Picard iteration on the theta-weighted state
            for _ in range(50):
                W_mid = (1 - config.theta) * W + config.theta * W_new
                W_next = _step(system, grid, W, t, dt, config.theta, W_mid, bv)
                done = np.max(np.abs(W_next - W_new)) <= 1e-12 * max(1.0, np.max(np.abs(W_next)))
                W_new = W_next
                if done:
                    break
        if not np.all(np.isfinite(W_new)):
            raise SolverError(f"non-finite values after step {k}", step=k)
        W, t = W_new, t_new
        if on_step is not None:
            on_step(k, t, W)
    return NumericField(grid, config.t_end, W)


@dataclass
class ComparisonReport:
    l2_relative: float
    max_abs_error: float
    t: float
    mass_numeric: float
    mass_analytic: float

    def to_dict(self) -> dict:
        return asdict(self)


def compare_to_analytic(numeric: NumericField, system) -> ComparisonReport:
    if not numeric.t > 0:
        raise ValueError("comparison time must be positive")
    x = numeric.grid.nodes
    exact = np.asarray(system.W_field(x, numeric.t), dtype=float)
    err = numeric.values - exact
    norm = np.linalg.norm(exact)
    l2 = float(np.linalg.norm(err) / norm) if norm > 0 else float(np.linalg.norm(err))
    return ComparisonReport(
        l2_relative=l2,
        max_abs_error=float(np.max(np.abs(err))),
        t=numeric.t,
        mass_numeric=float(trapezoid(numeric.values, x)),
        mass_analytic=float(trapezoid(exact, x)),
    )


@dataclass
class ConvergenceResult:
    dx: list
    dt: list
    errors: list
    space_order: float
    time_order: float
    time_dt: list = field(default_factory=list)
    time_differences: list = field(default_factory=list)
    reliable: bool = True
    notes: list = field(default_factory=list)


def _slope(h, e):
    return float(np.polyfit(np.log(h), np.log(e), 1)[0])


def convergence_study(system, base_grid: Grid1D, base_config: SolverConfig,
                      levels: int = 4) -> ConvergenceResult:
    """Observed orders of accuracy under grid refinement.

    Space: dx is halved at each level with dt halved for Crank-Nicolson
    (``theta == 0.5``) and quartered otherwise; the order is the
    least-squares slope of log(l2 error vs exact) against log(dx).
    Time: on the base grid dt is halved repeatedly and the order is the
    slope of successive solution differences against dt.
    """
    if levels < 3:
        raise ValueError("convergence study needs at least 3 levels")
    shrink = 2 if base_config.theta == 0.5 else 4
    dxs, dts, errors = [], [], []
    for k in range(levels):
        grid = Grid1D(base_grid.x_min, base_grid.x_max, base_grid.n_cells * 2 ** k)
        cfg = _with_dt(base_config, base_config.dt / shrink ** k)
        num = solve(system, grid, cfg)
        err = num.values - np.asarray(system.W_field(grid.nodes, cfg.t_end), dtype=float)
        errors.append(float(np.sqrt(grid.dx * np.sum(err ** 2))))
        dxs.append(grid.dx)
        dts.append(cfg.dt)
    notes = []
    reliable = all(b < a for a, b in zip(errors, errors[1:]))
    if not reliable:
        notes.append("error sequence is not monotone; order unreliable")
    if system.z_support is not None:
        notes.append("support-edge kink (solution only continuous there) degrades the formal order")

    time_dt, sols = [], []
    for k in range(levels):
        cfg = _with_dt(base_config, base_config.dt / 2 ** k)
        sols.append(solve(system, base_grid, cfg).values)
        time_dt.append(cfg.dt)
    diffs = [float(np.sqrt(base_grid.dx * np.sum((a - b) ** 2))) for a, b in zip(sols, sols[1:])]
    if min(diffs) > 0:
        time_order = _slope(time_dt[:-1], diffs)
    else:
        time_order = math.nan
        notes.append("time refinement changed nothing; time order undefined")
    return ConvergenceResult(dx=dxs, dt=dts, errors=errors, space_order=_slope(dxs, errors),
                             time_order=time_order, time_dt=time_dt, time_differences=diffs,
                             reliable=reliable, notes=notes)


def _with_dt(config: SolverConfig, dt: float) -> SolverConfig:
    return SolverConfig(dt=dt, t_start=config.t_start, t_end=config.t_end, theta=config.theta,
                        boundary=config.boundary, nonlinear_lag=config.nonlinear_lag)
