"""``rdsim`` command line: list, verify, simulate, figure.

Exit codes: 0 all checks pass, 1 a numerical check failed, 2 usage or
parameter error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import catalog, conservation, reduction, solver
from .catalog import ParamConstraintViolation
from .core import check_scale_invariance

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# every verify/simulate tolerance lives here; --tol-* flags override
TOLERANCES = {
    "ode": 1e-8,
    "ode_fd": 1e-5,
    "first_integral": 1e-8,
    "pde": 1e-5,
    "exponent": 1e-6,
    "identity": 1e-8,
    "identity_window": 1e-6,
    "scale": 1e-10,
    "simulate": 1e-2,
}

CHECKS = ("ode", "first-integral", "pde", "conservation", "identity", "scale")
SCALE_EPSILONS = (0.5, 2.0, 10.0)
SCALE_SAMPLES = 100
N_TIMES = (1.0, 2.0, 3.0)

FIGURES = {
    1: {"system": "NFP-GAUSS", "params": {"alpha": 0.6, "gamma": 2.0, "eta": 0.1, "C": 1.0},
        "times": (1.0, 2.0, 3.0), "x": (-6.0, 6.0)},
    2: {"system": "NFP-EXP", "params": {"alpha": 2.0, "eta": 1.0, "C": 1.0},
        "times": (1.0, 1.25, 1.5), "x": (0.0, 10.0)},
    # the free constant here is the matching constant c
    3: {"system": "GR-GAUSS", "params": {"alpha": 1.0, "mu": 0.5, "c": 1.0},
        "times": (1.0, 2.0, 3.0), "x": (-6.0, 6.0)},
    4: {"system": "FISHER-N", "params": {"n": 3.0, "mu": -1.0, "beta": 1.0, "C": 1.0},
        "times": (0.05, 0.1, 0.2), "x": (-8.0, 8.0)},
}
FIGURE_INTERVALS = 400


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    command: str
    system: str | None = None
    parameters: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    duration_s: float = 0.0
    verdicts: dict = field(default_factory=dict)

    def write(self, out_dir: Path) -> Path:
        tag = self.command if self.command.startswith("figure") else \
            f"{self.command}_{(self.system or '').lower()}"
        path = out_dir / f"manifest_{tag}.json"
        self.outputs.append(str(path))
        _write_json(path, asdict(self))
        return path


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _out_dir(arg) -> Path:
    path = Path(arg or os.environ.get("RD_OUT_DIR") or "rd_out")
    path.mkdir(parents=True, exist_ok=True)
    return path


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _load(name, raw_params):
    try:
        info = catalog.get_info(name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    try:
        params = catalog.parse_params(raw_params)
        system = info.build(**params)
    except ParamConstraintViolation:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for w in system.warnings:
        _warn(w)
    return info, system


# -- list ------------------------------------------------------------------------

def cmd_list(args) -> int:
    infos = catalog.list_systems()
    if args.family:
        infos = [i for i in infos if i.family == args.family]
    if args.json:
        print(json.dumps([i.to_dict() for i in infos], indent=2, sort_keys=True))
        return EXIT_OK
    print(f"{'name':<10} {'family':<15} {'exponents':<28} constraints")
    for i in infos:
        print(f"{i.name:<10} {i.family:<15} {i.exponents:<28} {'; '.join(i.constraints)}")
    return EXIT_OK


# -- verify ----------------------------------------------------------------------

def _tolerances(args) -> dict:
    tol = dict(TOLERANCES)
    for key in tol:
        override = getattr(args, f"tol_{key}", None)
        if override is not None:
            tol[key] = override
    return tol


def _residual_verdict(label, report, tol):
    ok = report.passed(tol)
    payload = report.to_dict() | {"tolerance": tol, "passed": ok}
    return label, ok, payload


def _run_check(check, system, tol, args):
    """Run one check; returns a list of ``(label, passed, payload)``, empty if not applicable."""
    if check == "ode":
        zs = reduction.default_z_samples(system)
        if args.fd:
            rep = reduction.ode_residual(system, zs, analytic=False,
                                         levels=reduction.fd_levels(system))
            return [_residual_verdict("ode", rep, tol["ode_fd"])]
        rep = reduction.ode_residual(system, zs)
        limit = tol["ode"] if rep.method == reduction.ANALYTIC else tol["ode_fd"]
        return [_residual_verdict("ode", rep, limit)]
    if check == "first-integral":
        if not system.conserving:
            if args.explicit_first_integral:
                raise UsageError(f"{system.name}: first integral requires mu = -alpha")
            return []
        rep = reduction.first_integral_residual(system, reduction.default_z_samples(system),
                                                analytic=not args.fd,
                                                levels=reduction.fd_levels(system))
        limit = tol["first_integral"] if rep.method == reduction.ANALYTIC else tol["ode_fd"]
        return [_residual_verdict("first-integral", rep, limit)]
    if check == "pde":
        rep = reduction.pde_residual(system, reduction.default_xt_samples(system))
        return [_residual_verdict("pde", rep, tol["pde"])]
    if check == "conservation":
        try:
            rep = conservation.check_N_scaling(system, N_TIMES)
        except conservation.DivergentTotalNumber as exc:
            print(f"conservation: {exc}")
            return []
        ok = abs(rep.fitted_exponent - rep.expected_exponent) <= tol["exponent"]
        return [("conservation", ok, rep.to_dict() | {"tolerance": tol["exponent"], "passed": ok})]
    if check == "identity":
        rep = conservation.check_continuity_identity(system)
        limit = tol["identity_window"] if rep.windowed else tol["identity"]
        ok = rep.defect < limit
        payload = rep.to_dict() | {"windowed": rep.windowed, "window": list(rep.window),
                                   "tolerance": limit, "passed": ok}
        return [("identity", ok, payload)]
    if check == "scale":
        pts = reduction.default_xt_samples(system, n=SCALE_SAMPLES, seed=1)
        out = []
        for eps in SCALE_EPSILONS:
            d = check_scale_invariance(system, eps, pts)
            ok = d < tol["scale"]
            out.append((f"scale[eps={eps:g}]", ok,
                        {"epsilon": eps, "defect": d, "tolerance": tol["scale"], "passed": ok}))
        return out
    raise UsageError(f"unknown check {check!r}")


def cmd_verify(args) -> int:
    start = time.perf_counter()
    _, system = _load(args.system, args.params)
    tol = _tolerances(args)
    requested = args.checks or ["all"]
    checks = list(CHECKS) if "all" in requested else requested
    args.explicit_first_integral = "all" not in requested and "first-integral" in requested
    verdicts, failed = {}, []
    for check in checks:
        for label, ok, payload in _run_check(check, system, tol, args):
            verdicts[label] = payload
            if args.json:
                print(json.dumps({label: payload}, indent=2, sort_keys=True))
            else:
                value = payload.get("max_abs", payload.get("defect"))
                if value is None:
                    value = abs(payload["fitted_exponent"] - payload["expected_exponent"])
                print(f"{label:<16} {'PASS' if ok else 'FAIL'}  value={value:.3e}  "
                      f"tol={payload['tolerance']:.1e}")
            if not ok:
                failed.append(label)
    if args.out_dir or os.environ.get("RD_OUT_DIR"):
        RunManifest("verify", system.name, dict(system.params), {"checks": checks}, [],
                    time.perf_counter() - start,
                    {k: v["passed"] for k, v in verdicts.items()}).write(_out_dir(args.out_dir))
    if failed:
        print(f"failed check(s): {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# -- simulate --------------------------------------------------------------------

def cmd_simulate(args) -> int:
    start = time.perf_counter()
    info, system = _load(args.system, args.params)
    if info.simulation is None:
        raise UsageError(f"{info.name}: anti-parabolic system not integrable "
                         "(negative diffusion coefficient)")
    sim = dict(info.simulation)
    for key in ("t0", "t1", "xmin", "xmax", "n", "dt"):
        value = getattr(args, key)
        if value is not None:
            sim[key] = value
    try:
        grid = solver.Grid1D(sim["xmin"], sim["xmax"], int(sim["n"]))
        config = solver.SolverConfig(dt=sim["dt"], t_start=sim["t0"], t_end=sim["t1"],
                                     theta=args.theta, boundary=args.boundary)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not (system.domain.contains(grid.x_min) and system.domain.contains(grid.x_max)):
        raise UsageError(f"grid [{grid.x_min}, {grid.x_max}] leaves the domain of {info.name}")

    out = _out_dir(args.out_dir)
    stem = info.name.lower()
    x = grid.nodes
    initial = solver.NumericField(grid, config.t_start,
                                  np.asarray(system.W_field(x, config.t_start), dtype=float))
    meta = {"system": info.name, "parameters": dict(system.params), "config": asdict(config)}
    paths = [initial.write_csv(out / f"{stem}_initial.csv"),
             initial.write_sidecar(out / f"{stem}_initial.json", **meta)]
    try:
        final = solver.solve(system, grid, config)
    except solver.SolverError as exc:
        print(f"solver aborted: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report = solver.compare_to_analytic(final, system)
    ok = report.l2_relative < args.tol
    paths += [final.write_csv(out / f"{stem}_final.csv"),
              final.write_sidecar(out / f"{stem}_final.json", **meta)]
    cmp_path = out / f"{stem}_comparison.json"
    _write_json(cmp_path, report.to_dict() | {"tolerance": args.tol, "passed": ok})
    paths.append(cmp_path)
    RunManifest("simulate", info.name, dict(system.params),
                {"grid": asdict(grid), "solver": asdict(config)},
                [str(p) for p in paths], time.perf_counter() - start,
                {"l2_relative": ok}).write(out)
    print(f"{info.name}: l2_relative={report.l2_relative:.3e} "
          f"max_abs_error={report.max_abs_error:.3e} tol={args.tol:.1e} "
          f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


# -- figure ----------------------------------------------------------------------

def figure_table(which: int, quantity: str):
    """Columns ``x`` and one per figure time for ``quantity`` in {"D", "f", "W"}."""
    fig = FIGURES[which]
    system = catalog.build(fig["system"], fig["params"])
    field_fn = {"D": system.D_field, "f": system.f_field, "W": system.W_field}[quantity]
    x = np.linspace(*fig["x"], FIGURE_INTERVALS + 1)
    cols = [np.broadcast_to(np.asarray(field_fn(x, t), dtype=float), x.shape)
            for t in fig["times"]]
    return x, cols


def _write_table(path: Path, x, cols, times) -> None:
    header = ",".join(["x"] + [f"t={t:g}" for t in times])
    lines = [header]
    for i, xi in enumerate(x):
        lines.append(",".join(f"{v:.17g}" for v in [xi] + [c[i] for c in cols]))
    path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def cmd_figure(args) -> int:
    start = time.perf_counter()
    fig = FIGURES[args.which]
    out = _out_dir(args.out_dir)
    paths = []
    for q in ("D", "f", "W"):
        x, cols = figure_table(args.which, q)
        path = out / f"figure{args.which}_{q}.csv"
        _write_table(path, x, cols, fig["times"])
        paths.append(str(path))
    RunManifest(f"figure{args.which}", fig["system"], dict(fig["params"]),
                {"times": list(fig["times"]), "x_range": list(fig["x"]),
                 "points": FIGURE_INTERVALS + 1},
                paths, time.perf_counter() - start, {"written": True}).write(out)
    for p in paths:
        print(p)
    return EXIT_OK


# -- entry point -----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rdsim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ls = sub.add_parser("list", help="list catalog systems")
    ls.add_argument("--json", action="store_true")
    ls.add_argument("--family", choices=("conserving", "non-conserving"))
    ls.set_defaults(func=cmd_list)

    vf = sub.add_parser("verify", help="run residual and conservation oracles")
    vf.add_argument("system")
    vf.add_argument("params", nargs="*", metavar="key=value")
    vf.add_argument("--checks", nargs="+", choices=CHECKS + ("all",))
    vf.add_argument("--fd", action="store_true",
                    help="use finite differences instead of analytic derivatives")
    vf.add_argument("--json", action="store_true")
    vf.add_argument("--out-dir")
    for key, value in TOLERANCES.items():
        if key != "simulate":
            vf.add_argument(f"--tol-{key.replace('_', '-')}", dest=f"tol_{key}", type=float,
                            help=f"default {value:g}")
    vf.set_defaults(func=cmd_verify)

    sm = sub.add_parser("simulate", help="integrate the PDE and compare with the exact solution")
    sm.add_argument("system")
    sm.add_argument("params", nargs="*", metavar="key=value")
    for flag in ("t0", "t1", "xmin", "xmax", "dt"):
        sm.add_argument(f"--{flag}", type=float)
    sm.add_argument("--n", type=int, help="number of cells")
    sm.add_argument("--theta", type=float, default=0.5)
    sm.add_argument("--boundary", default=solver.ANALYTIC_DIRICHLET,
                    choices=(solver.ANALYTIC_DIRICHLET, solver.HOMOGENEOUS_DIRICHLET))
    sm.add_argument("--tol", type=float, default=TOLERANCES["simulate"])
    sm.add_argument("--out-dir")
    sm.set_defaults(func=cmd_simulate)

    fg = sub.add_parser("figure", help="write D, f, W tables for a figure")
    fg.add_argument("which", type=int, choices=sorted(FIGURES))
    fg.add_argument("--out-dir")
    fg.set_defaults(func=cmd_figure)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParamConstraintViolation as exc:
        print(f"parameter constraint violated: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, reduction.ContractError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
