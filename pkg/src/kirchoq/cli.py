"""Command-line interface.

Subcommands: validate, solve, sweep, constants, verify, fiber-scan,
oracle-test.  All numeric JSON output is serialized with full 17
significant digits so reruns diff cleanly; exit codes: 0 success /
converged, 2 solver did not converge, 3 validation error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import __version__
from .core import ModelParams, validate_params
from .errors import CouplingError, KirchoqError, RangeError
from .fiber import fiber_polynomial
from .functionals import breakdown
from .minimizer import (
    GroundStateResult,
    SolverConfig,
    minimize_ground_state,
    sweep_mu,
    sweep_nu,
    verify_solution,
)
from .oracle import certify, fiber_scan
from .spectral import Grid, build_riesz, dump_field, load_field

EXIT_OK = 0
EXIT_NOT_CONVERGED = 2
EXIT_VALIDATION = 3


def _fmt(x):
    if isinstance(x, float):
        return float(f"{x:.17g}")
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    if isinstance(x, (np.floating,)):
        return float(f"{float(x):.17g}")
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def _write_json(path: str, payload) -> None:
    with open(path, "w") as fh:
        json.dump(_fmt(payload), fh, indent=1, sort_keys=True)
        fh.write("\n")


def _load_config(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _params_from_cfg(cfg: dict, args) -> ModelParams:
    model = dict(cfg.get("model", cfg))
    if args.mu is not None:
        model["mu"] = args.mu
    if args.nu is not None:
        model["nu"] = args.nu
    return ModelParams.from_dict(model)


def _grid_from_cfg(cfg: dict, args) -> Grid:
    gcfg = cfg.get("grid", {})
    n = args.n if args.n is not None else int(gcfg.get("n", 32))
    L = args.L if args.L is not None else float(gcfg.get("L", 8.0))
    return Grid(n, L)


def _solver_from_cfg(cfg: dict, args) -> SolverConfig:
    scfg = dict(cfg.get("solver", {}))
    if args.max_iters is not None:
        scfg["max_iters"] = args.max_iters
    if args.tol is not None:
        scfg["grad_tol"] = args.tol
    if args.seed is not None:
        scfg["seed"] = args.seed
    known = {f for f in SolverConfig.__dataclass_fields__}
    return SolverConfig(**{k: v for k, v in scfg.items() if k in known})


def _result_summary(res: GroundStateResult, params: ModelParams, grid: Grid) -> dict:
    return {
        "version": __version__,
        "model": params.to_dict(),
        "grid": {"n": grid.n, "L": grid.L},
        "m": res.m,
        "t_star": res.t_star,
        "converged": res.converged,
        "iterations": res.iterations,
        "residuals": res.residuals,
        "breakdown": {
            k: getattr(res.breakdown, k)
            for k in ("A1", "A2", "B1", "B2", "K1", "K2", "D", "E", "F")
        },
        "message": res.message,
    }


def _write_iterations(path: str, history) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["iter", "M", "J_res", "strong_res", "t_star", "step"])
        for row in history:
            wr.writerow([row[0]] + [f"{x:.17g}" for x in row[1:]])


def _write_fields(outdir: str, res: GroundStateResult, alpha: float) -> None:
    fdir = os.path.join(outdir, "fields")
    os.makedirs(fdir, exist_ok=True)
    dump_field(res.pair.u, os.path.join(fdir, "u.bin"), alpha=alpha)
    dump_field(res.pair.v, os.path.join(fdir, "v.bin"), alpha=alpha)


def cmd_validate(args) -> int:
    cfg = _load_config(args.config)
    try:
        params = _params_from_cfg(cfg, args)
        regime = validate_params(params)
    except CouplingError as exc:
        print(f"validation error (coupling bound): {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (RangeError, KirchoqError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(json.dumps({"regime": regime.value, "delta": _fmt(params.delta)}))
    return EXIT_OK


def cmd_solve(args) -> int:
    cfg = _load_config(args.config)
    try:
        params = _params_from_cfg(cfg, args)
        validate_params(params)
    except KirchoqError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    grid = _grid_from_cfg(cfg, args)
    config = _solver_from_cfg(cfg, args)
    res = minimize_ground_state(params, grid, config)
    os.makedirs(args.out_dir, exist_ok=True)
    _write_json(os.path.join(args.out_dir, "summary.json"), _result_summary(res, params, grid))
    _write_iterations(os.path.join(args.out_dir, "iterations.csv"), res.history)
    _write_fields(args.out_dir, res, params.alpha)
    print(
        f"m={res.m:.12g} t*={res.t_star:.6g} converged={res.converged} "
        f"iters={res.iterations}"
    )
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    try:
        params = _params_from_cfg(cfg, args)
        validate_params(params)
    except KirchoqError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    grid = _grid_from_cfg(cfg, args)
    config = _solver_from_cfg(cfg, args)
    os.makedirs(args.out_dir, exist_ok=True)
    rows = []
    all_ok = True
    if args.mu_list:
        values = [float(x) for x in args.mu_list.split(",")]
        results = sweep_mu(params, grid, config, values)
        for mu, res in results:
            rows.append((mu, params.nu, res.m, res.converged, res.iterations))
            all_ok &= res.converged
    if args.nu_list:
        values = [float(x) for x in args.nu_list.split(",")]
        results = sweep_nu(params, grid, config, values)
        for nu, res in results:
            rows.append((params.mu, nu, res.m, res.converged, res.iterations))
            all_ok &= res.converged
    with open(os.path.join(args.out_dir, "sweep.csv"), "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["mu", "nu", "m", "converged", "iters"])
        for mu, nu, m, ok, iters in rows:
            wr.writerow([f"{mu:.17g}", f"{nu:.17g}", f"{m:.17g}", ok, iters])
    print(f"sweep rows: {len(rows)}; all converged: {all_ok}")
    return EXIT_OK if all_ok else EXIT_NOT_CONVERGED


def cmd_constants(args) -> int:
    from .constants import (
        estimate_S_lower,
        estimate_S_star,
        estimate_sobolev,
        threshold_lower,
        threshold_upper,
    )

    cfg = _load_config(args.config) if args.config else {}
    params = _params_from_cfg(cfg, args) if cfg else None
    grid = _grid_from_cfg(cfg, args)
    alpha = params.alpha if params else float(cfg.get("alpha", args.alpha or 1.0))
    s3 = estimate_sobolev(grid)
    s_star = estimate_S_star(grid, alpha)
    s_lower = estimate_S_lower(grid, alpha)
    payload = {
        "S3": s3.value,
        "S3_trend": s3.refinement_trend,
        "S_star": s_star.value,
        "S_star_trend": s_star.refinement_trend,
        "S_lower": s_lower.value,
        "S_lower_trend": s_lower.refinement_trend,
    }
    if params is not None:
        try:
            payload["threshold_upper"] = threshold_upper(params, s_star.value)
        except KirchoqError:
            pass
        try:
            payload["threshold_lower"] = threshold_lower(params, s_lower.value)
        except KirchoqError:
            pass
    os.makedirs(args.out_dir, exist_ok=True)
    _write_json(os.path.join(args.out_dir, "constants.json"), payload)
    print(json.dumps(_fmt(payload)))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    try:
        params = _params_from_cfg(cfg, args)
        validate_params(params)
    except KirchoqError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    with open(os.path.join(args.run_dir, "summary.json")) as fh:
        summary = json.load(fh)
    u, _ = load_field(os.path.join(args.run_dir, "fields", "u.bin"))
    v, _ = load_field(os.path.join(args.run_dir, "fields", "v.bin"))
    from .functionals import FieldPair

    grid = u.grid
    op = build_riesz(grid, params.alpha)
    res = GroundStateResult(
        pair=FieldPair(u, v),
        t_star=float(summary["t_star"]),
        m=float(summary["m"]),
        breakdown=None,
        residuals=summary.get("residuals", {}),
        iterations=int(summary.get("iterations", 0)),
        converged=bool(summary.get("converged", False)),
    )
    report = verify_solution(params, op, res)
    _write_json(os.path.join(args.run_dir, "verify.json"), report)
    print(json.dumps(_fmt(report)))
    return EXIT_OK if report.get("all_ok") else EXIT_NOT_CONVERGED


def cmd_fiber_scan(args) -> int:
    cfg = _load_config(args.config)
    try:
        params = _params_from_cfg(cfg, args)
        validate_params(params)
    except KirchoqError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    grid = _grid_from_cfg(cfg, args)
    op = build_riesz(grid, params.alpha)
    from .functionals import FieldPair
    from .spectral import Field

    X, Y, Z = grid.coords()
    w = grid.L / 6.0
    u = Field(np.exp(-((X ** 2 + Y ** 2 + Z ** 2)) / (2 * w * w)), grid)
    pair = FieldPair(u, u.copy())
    poly = fiber_polynomial(breakdown(params, op, pair), params)
    argmax, table = fiber_scan(poly, args.t_min, args.t_max, args.count)
    os.makedirs(args.out_dir, exist_ok=True)
    path = os.path.join(args.out_dir, "fiber_scan.csv")
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["t", "zeta", "dzeta"])
        for t, z, dz in table:
            wr.writerow([f"{t:.17g}", f"{z:.17g}", f"{dz:.17g}"])
    print(f"argmax t* = {argmax:.12g}; table -> {path}")
    return EXIT_OK


def cmd_oracle_test(args) -> int:
    report = certify(seed=args.seed or 0)
    print(json.dumps(_fmt(report), indent=1, sort_keys=True))
    return EXIT_OK if report["all_ok"] else EXIT_NOT_CONVERGED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kirchoq",
        description="Spectral ground-state solver for coupled Kirchhoff-Choquard systems",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        p.add_argument("--config", required=needs_config, help="JSON configuration file")
        p.add_argument("--mu", type=float, default=None)
        p.add_argument("--nu", type=float, default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--L", type=float, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--max-iters", dest="max_iters", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--out-dir", dest="out_dir", default="out")

    p = sub.add_parser("validate", help="validate a configuration and print its regime")
    common(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("solve", help="run a single ground-state solve")
    common(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("sweep", help="sweep mu and/or nu with warm starts")
    common(p)
    p.add_argument("--mu-list", dest="mu_list", default=None, help="comma-separated ascending")
    p.add_argument("--nu-list", dest="nu_list", default=None, help="comma-separated ascending")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("constants", help="estimate best constants and thresholds")
    common(p, needs_config=False)
    p.add_argument("--alpha", type=float, default=None)
    p.set_defaults(fn=cmd_constants)

    p = sub.add_parser("verify", help="re-verify a finished run directory")
    common(p)
    p.add_argument("--run-dir", dest="run_dir", required=True)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("fiber-scan", help="dense scan of the fiber polynomial (CSV)")
    common(p)
    p.add_argument("--t-min", dest="t_min", type=float, default=1e-2)
    p.add_argument("--t-max", dest="t_max", type=float, default=1e2)
    p.add_argument("--count", type=int, default=10001)
    p.set_defaults(fn=cmd_fiber_scan)

    p = sub.add_parser("oracle-test", help="run oracle certification checks")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_oracle_test)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except KirchoqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
