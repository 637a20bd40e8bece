"""Command-line front door: `rough-reflect solve | verify | fbm | skorokhod | integrate`.

Configuration for `solve` is a TOML file; all artifacts are CSV/JSON with
17-significant-digit floats so that repeated runs with the same seed are
byte-identical.  Exit codes: 0 success, 1 invariant violation, 2
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .grid import (Grid, GridPath, read_path_csv, write_path_csv,
                   write_field_csv)
from . import fbm as fb
from . import tensor as tn
from . import solver as sv
from . import verify as vf
from .skorokhod import solve_skorokhod, verify_decomposition
from .fraccalc import FracParams, default_alpha, rough_integral

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_CONFIG = 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Parsed and validated `solve` configuration."""

    seed: int
    out: str
    delay: float
    horizon: float
    n_per_window: int
    driver_kind: str                 # fbm | csv
    hurst: float | None
    dims_m: int
    refinement: int
    driver_path: str | None
    sigma_name: str
    sigma_scale: float
    drift_name: str
    drift_params: tuple
    eta: object                      # float or csv path
    dims_d: int
    beta: float
    gamma: float
    alpha: float | None
    picard_tol: float
    max_iter: int
    reflect: bool
    replications: int
    diagnostics: str | None

    @classmethod
    def from_toml(cls, path) -> "RunConfig":
        try:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}")
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"config is not valid TOML: {e}")

        def get(section, key, default=_MISSING):
            sec = raw.get(section, {})
            if key in sec:
                return sec[key]
            if default is _MISSING:
                raise ConfigError(f"missing config key [{section}] {key}")
            return default

        cfg = cls(
            seed=int(get("run", "seed", 0)),
            out=str(get("run", "out", "solution.csv")),
            replications=int(get("run", "replications", 1)),
            diagnostics=get("run", "diagnostics", None),
            delay=float(get("grid", "delay")),
            horizon=float(get("grid", "horizon")),
            n_per_window=int(get("grid", "n_per_window")),
            driver_kind=str(get("driver", "kind", "fbm")),
            hurst=get("driver", "hurst", None),
            dims_m=int(get("driver", "dims", 1)),
            refinement=int(get("driver", "refinement", 8)),
            driver_path=get("driver", "path", None),
            sigma_name=str(get("coefficients", "sigma", "inv_sqrt")),
            sigma_scale=float(get("coefficients", "sigma_scale", 1.0)),
            drift_name=str(get("coefficients", "drift", "zero")),
            drift_params=tuple(get("coefficients", "drift_params", [])),
            eta=get("coefficients", "eta", 1.0),
            dims_d=int(get("coefficients", "dim_state", 1)),
            beta=float(get("frac", "beta", 0.4)),
            gamma=float(get("frac", "gamma", 1.0)),
            alpha=get("frac", "alpha", None),
            picard_tol=float(get("tolerances", "picard_tol", 1e-10)),
            max_iter=int(get("tolerances", "max_iter", 60)),
            reflect=bool(get("flags", "reflect", True)),
        )
        cfg.validate()
        return cfg

    def validate(self):
        if not (1.0 / 3.0 < self.beta < 0.5):
            raise ConfigError(f"beta must lie in (1/3, 1/2), got {self.beta}")
        if self.gamma <= 1.0 / self.beta - 2.0:
            raise ConfigError(f"gamma must exceed 1/beta - 2 = {1/self.beta-2:.4f}")
        if self.driver_kind == "fbm":
            if self.hurst is None:
                raise ConfigError("fbm driver requires [driver] hurst")
            if not (1.0 / 3.0 < self.hurst < 0.5):
                raise ConfigError(f"hurst must lie in (1/3, 1/2), got {self.hurst}")
            if not self.beta < self.hurst:
                raise ConfigError(f"need beta < hurst, got beta={self.beta}, H={self.hurst}")
        elif self.driver_kind == "csv":
            if not self.driver_path or not Path(self.driver_path).exists():
                raise ConfigError(f"driver CSV not found: {self.driver_path}")
        else:
            raise ConfigError(f"unknown driver kind {self.driver_kind!r}")
        if isinstance(self.eta, str) and not Path(self.eta).exists():
            raise ConfigError(f"eta CSV not found: {self.eta}")
        if self.alpha is not None:
            FracParams(float(self.alpha), self.beta, self.gamma)
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")


_MISSING = object()


def _build_inputs(cfg: RunConfig, replication: int = 0):
    grid = Grid(cfg.delay, cfg.horizon, cfg.n_per_window)
    i0 = grid.index_of(0.0)
    if isinstance(cfg.eta, str):
        eta = read_path_csv(cfg.eta, grid)
        if eta.lo != 0 or eta.hi != i0:
            raise ConfigError("eta CSV must cover exactly [-delay, 0]")
    else:
        eta = GridPath(grid, np.full((i0 + 1, cfg.dims_d), float(cfg.eta)), 0)
    if cfg.driver_kind == "fbm":
        spec = fb.FbmSpec(cfg.hurst, cfg.dims_m, grid, cfg.seed, cfg.refinement)
        sample = fb.sample_fbm(spec, replication=replication)
        y = sample.coarse
        yy = fb.stratonovich_tensor(sample) if grid.n_windows > 1 else None
    else:
        y = read_path_csv(cfg.driver_path, grid)
        if y.lo != 0 or y.hi != grid.n_points - 1:
            raise ConfigError("driver CSV must cover [-delay, horizon] on the grid")
        if grid.n_windows > 1:
            y_shift = GridPath(grid, y.values[: grid.n_points - grid.n_per_window].copy(),
                               grid.n_per_window)
            yy = tn.smooth_tensor(y_shift, y)
        else:
            yy = None
    eta_shift = GridPath(grid, eta.values[: grid.n_points - i0].copy(), i0)
    eta_tensor = tn.smooth_tensor(eta_shift, y)
    sigma = sv.sigma_from_name(cfg.sigma_name, cfg.dims_d, cfg.dims_m, cfg.sigma_scale)
    drift = sv.drift_from_name(cfg.drift_name, cfg.dims_d, cfg.drift_params)
    coefs = sv.Coefficients(sigma, drift, eta, cfg.beta, cfg.gamma)
    solve_cfg = sv.SolveConfig(alpha=cfg.alpha, picard_tol=cfg.picard_tol,
                               max_picard_iter=cfg.max_iter, reflect=cfg.reflect,
                               seed=cfg.seed)
    return grid, coefs, y, eta_tensor, yy, solve_cfg


def _write_solution_csv(sol: sv.Solution, fname):
    grid = sol.x.grid
    i0 = grid.index_of(0.0)
    d = sol.x.dim
    times = sol.xi.times()
    with open(fname, "w", newline="") as fh:
        w = csv.writer(fh)
        hdr = (["t"] + [f"x{i+1}" for i in range(d)] + [f"z{i+1}" for i in range(d)]
               + [f"xi{i+1}" for i in range(d)])
        w.writerow(hdr)
        for k in range(len(times)):
            row = [f"{times[k]:.17g}"]
            row += [f"{v:.17g}" for v in sol.x.values[i0 + k]]
            row += [f"{v:.17g}" for v in sol.z.values[k]]
            row += [f"{v:.17g}" for v in sol.xi.values[k]]
            w.writerow(row)


def _solution_invariants_ok(sol: sv.Solution, cfg: RunConfig) -> tuple[bool, dict]:
    report = {}
    if sol.reflected:
        dec = solve_skorokhod(sol.xi)
        rep = verify_decomposition(dec)
        sup_xi = max(float(np.max(np.abs(sol.xi.values))), 1e-300)
        report["skorokhod"] = {
            "additivity": rep.additivity, "nonnegativity": rep.nonnegativity,
            "monotonicity": rep.monotonicity,
            "complementarity_rel": rep.complementarity / sup_xi,
        }
        ok = (rep.additivity <= 1e-12 and rep.nonnegativity <= 1e-12
              and rep.monotonicity <= 1e-12 and rep.complementarity <= 1e-10 * sup_xi
              and sol.diagnostics.get("skorokhod_consistent", False))
    else:
        ok = True
    resid = float(sol.diagnostics["self_consistency_residual"])
    report["self_consistency_residual"] = resid
    ok = ok and resid <= max(1e-6, 1e4 * cfg.picard_tol)
    return ok, report


def run_simulate(cfg: RunConfig) -> int:
    """Solve per the config, write artifacts, return an exit code."""
    sup_norms = []
    report = {}
    for rep in range(cfg.replications):
        grid, coefs, y, et, yy, solve_cfg = _build_inputs(cfg, replication=rep)
        sol = sv.solve(coefs, y, et, yy, solve_cfg)
        i0 = grid.index_of(0.0)
        sup_norms.append(float(np.max(np.sqrt(np.sum(sol.x.values[i0:] ** 2, axis=1)))))
        if rep == 0:
            _write_solution_csv(sol, cfg.out)
            ok, inv_report = _solution_invariants_ok(sol, cfg)
            report["invariants"] = inv_report
            report["windows"] = sol.diagnostics["windows"]
            report["alpha"] = sol.diagnostics["alpha"]
    sups = np.array(sup_norms)
    report["sup_norm_summary"] = {
        "replications": cfg.replications,
        "mean": float(sups.mean()),
        "max": float(sups.max()),
        "second_moment": float((sups ** 2).mean()),
    }
    if cfg.diagnostics:
        with open(cfg.diagnostics, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
    return EXIT_OK if ok else EXIT_INVARIANT


def run_verify(suite: str, fast: bool = False) -> dict:
    """Run one or all property suites and return the structured report."""
    if suite == "all":
        reports = [vf.run_suite(name, fast=fast) for name in
                   ("skorokhod", "fraccalc", "tensor", "fbm", "solver", "bound")]
        return {"suite": "all", "passed": all(r["passed"] for r in reports),
                "reports": reports}
    return vf.run_suite(suite, fast=fast)


# ---------------------------------------------------------------------------
# argparse wiring


def _cmd_solve(args) -> int:
    try:
        cfg = RunConfig.from_toml(args.config)
        if args.out:
            cfg.out = args.out
        if args.diagnostics:
            cfg.diagnostics = args.diagnostics
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    return run_simulate(cfg)


def _cmd_verify(args) -> int:
    report = run_verify(args.suite, fast=args.fast)
    text = json.dumps(report, indent=2, sort_keys=True, default=str)
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text)
    return EXIT_OK if report["passed"] else EXIT_INVARIANT


def _cmd_fbm(args) -> int:
    try:
        grid = Grid(args.delay, args.horizon, args.n)
        if not (0.0 < args.hurst <= 0.5):
            raise ConfigError("hurst must lie in (0, 1/2]")
        spec = fb.FbmSpec(args.hurst, args.dims, grid, args.seed, args.refinement)
    except (ConfigError, ValueError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    sample = fb.sample_fbm(spec)
    write_path_csv(sample.coarse, args.out)
    if args.tensor_out:
        fld = fb.stratonovich_tensor(sample)
        write_field_csv(fld, args.tensor_out)
    return EXIT_OK


def _cmd_skorokhod(args) -> int:
    rows = list(csv.reader(open(args.input, newline="")))
    data = np.array([[float(v) for v in r] for r in rows[1:]])
    times = data[:, 0]
    h = times[1] - times[0]
    span = times[-1] - times[0]
    grid = Grid(span, span, int(round(span / h)))
    xi = GridPath(grid, data[:, 1:], grid.n_per_window)  # domain starts at t = 0
    try:
        dec = solve_skorokhod(xi)
    except ValueError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    d = xi.dim
    with open(args.output, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t"] + [f"xi{i+1}" for i in range(d)] + [f"x{i+1}" for i in range(d)]
                   + [f"z{i+1}" for i in range(d)])
        for k in range(len(times)):
            row = [f"{times[k]:.17g}"]
            row += [f"{v:.17g}" for v in dec.input.values[k]]
            row += [f"{v:.17g}" for v in dec.reflector_x.values[k]]
            row += [f"{v:.17g}" for v in dec.regulator_z.values[k]]
            w.writerow(row)
    rep = verify_decomposition(dec)
    return EXIT_OK if rep.passed(1e-10 * max(1.0, float(np.max(np.abs(xi.values))))) else EXIT_INVARIANT


def _cmd_integrate(args) -> int:
    """Smoke test: rough-integrate sigma(x) dy for CSV paths with the smooth
    trapezoid lift standing in for the tensor."""
    rows_x = list(csv.reader(open(args.x, newline="")))
    rows_y = list(csv.reader(open(args.y, newline="")))
    dx = np.array([[float(v) for v in r] for r in rows_x[1:]])
    dy = np.array([[float(v) for v in r] for r in rows_y[1:]])
    times = dx[:, 0]
    h = times[1] - times[0]
    span = times[-1] - times[0]
    grid = Grid(span, span, int(round(span / h)))
    lo = grid.n_per_window
    x = GridPath(grid, dx[:, 1:], lo)
    y = GridPath(grid, dy[:, 1:], lo)
    lift = tn.smooth_tensor(x, y)
    alpha = args.alpha if args.alpha else default_alpha(args.beta, args.gamma)
    params = FracParams(alpha, args.beta, args.gamma)
    sigma = sv.sigma_from_name(args.sigma, x.dim, y.dim, args.sigma_scale)
    val = rough_integral(sigma.fn, sigma.grad, x, y, lift, params, x.t_lo, x.t_hi)
    print(json.dumps({"integral": [float(v) for v in val], "alpha": alpha}))
    return EXIT_OK


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="rough-reflect",
                                 description="Reflected rough delay equations: "
                                             "solve, verify, sample drivers.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("solve", help="solve an equation described by a TOML config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="override [run] out")
    p.add_argument("--diagnostics", default=None, help="write a JSON diagnostics report")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("verify", help="run a property suite and emit a JSON report")
    p.add_argument("--suite", required=True,
                   choices=["skorokhod", "fraccalc", "tensor", "fbm", "solver", "bound", "all"])
    p.add_argument("--fast", action="store_true", help="reduced corpus sizes")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("fbm", help="sample a fractional Brownian driver")
    p.add_argument("--hurst", type=float, required=True)
    p.add_argument("--dims", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delay", type=float, default=1.0)
    p.add_argument("--horizon", type=float, default=1.0)
    p.add_argument("--n", type=int, default=256, help="grid points per delay window")
    p.add_argument("--refinement", type=int, default=8)
    p.add_argument("--out", required=True)
    p.add_argument("--tensor-out", default=None)
    p.set_defaults(fn=_cmd_fbm)

    p = sub.add_parser("skorokhod", help="reflect a CSV path at the origin")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(fn=_cmd_skorokhod)

    p = sub.add_parser("integrate", help="rough integral smoke test on CSV paths")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--beta", type=float, default=0.4)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--sigma", default="identity")
    p.add_argument("--sigma-scale", type=float, default=1.0, dest="sigma_scale")
    p.set_defaults(fn=_cmd_integrate)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
