"""Command-line entry point: run, compare, check.

Exit codes: 0 success, 2 configuration problems (parse or validation),
3 numerical failures, 4 I/O failures. Errors print one line to stderr
as `error: <Class>: <message>`.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .config import RunConfig, load_config, packaged_config_text
from .coriolis import (build_C, build_C_P, coriolis_force, gradient_check,
                       kirchhoff_force)
from .engine import SimState, project_to_rail, solve_accelerations
from .errors import ConfigError, GridMismatch, OutputError, SimulationError
from .mass import build_M_total
from .output import read_trajectory, write_metadata, write_trajectory
from .scenario import NEWTON_EULER, WOOLSEY, run_scenario
from .woolsey import compare_trajectories


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmauv",
        description="Moving-mass AUV simulator: depth-cycling runs, "
                    "formulation comparison, and self checks.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="integrate one scenario, write CSV")
    run.add_argument("--config", required=True)
    run.add_argument("--formulation", choices=(NEWTON_EULER, WOOLSEY))
    run.add_argument("--out")
    run.add_argument("--dt", type=float)
    run.add_argument("--duration", type=float)
    run.add_argument("--decimate", type=int)
    run.set_defaults(func=_cmd_run)

    cmp_ = sub.add_parser(
        "compare", help="run both formulations, write CSVs and a summary")
    cmp_.add_argument("--config", required=True)
    cmp_.add_argument("--out", required=True)
    cmp_.set_defaults(func=_cmd_compare)

    chk = sub.add_parser("check", help="run the built-in invariant suite")
    chk.add_argument("--config", help="defaults to the packaged remus100")
    chk.add_argument("--csv", help="also validate a trajectory CSV")
    chk.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse has already printed usage or version text
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except (ConfigError, GridMismatch) as exc:
        return _fail(exc, 2)
    except OutputError as exc:
        return _fail(exc, 4)
    except SimulationError as exc:
        return _fail(exc, 3)


def _fail(exc: Exception, code: int) -> int:
    message = " ".join(str(exc).split())
    print(f"error: {type(exc).__name__}: {message}", file=sys.stderr)
    return code


def _load(path) -> RunConfig:
    if path is None:
        from .config import parse_config
        return parse_config(packaged_config_text())
    return load_config(path)


def _run_one(cfg: RunConfig, formulation: str, spec, out, decimation,
             overrides: dict) -> tuple:
    traj = run_scenario(cfg.params, cfg.env, spec, formulation,
                        damping=cfg.damping)
    summary = write_trajectory(traj, out, decimation)
    meta = {
        "code_version": __version__,
        "config_sha256": cfg.sha256,
        "formulation": formulation,
        "dt": spec.dt,
        "duration": spec.duration,
        "decimation": decimation,
        "displaced_volume_derived": cfg.volume_derived,
        "cli_overrides": overrides,
        "rows": summary["rows"],
        "aborted": traj.aborted,
        "diagnostic": traj.diagnostic,
    }
    write_metadata(out, meta)
    return traj, summary


def _cmd_run(args) -> int:
    cfg = _load(args.config)
    overrides = {}
    spec = cfg.scenario
    if args.dt is not None:
        spec = replace(spec, dt=args.dt)
        overrides["dt"] = args.dt
    if args.duration is not None:
        spec = replace(spec, duration=args.duration)
        overrides["duration"] = args.duration
    formulation = args.formulation or cfg.formulation
    if args.formulation:
        overrides["formulation"] = args.formulation
    out = args.out or cfg.output_path
    decimation = args.decimate if args.decimate is not None \
        else cfg.decimation
    if args.decimate is not None:
        overrides["decimation"] = args.decimate
    traj, summary = _run_one(cfg, formulation, spec, out, decimation,
                             overrides)
    print(f"wrote {summary['rows']} rows to {out}")
    if traj.aborted:
        print(f"error: run aborted: {traj.diagnostic}", file=sys.stderr)
        return 3
    return 0


def _stem(path: str) -> str:
    return path[:-4] if path.endswith(".csv") else path


def _cmd_compare(args) -> int:
    cfg = _load(args.config)
    stem = _stem(args.out)
    results = {}
    for formulation, suffix in ((NEWTON_EULER, "ne"), (WOOLSEY, "woolsey")):
        out = f"{stem}_{suffix}.csv"
        traj, _ = _run_one(cfg, formulation, cfg.scenario, out,
                           cfg.decimation, {})
        print(f"wrote {formulation} run to {out}")
        if traj.aborted:
            print(f"error: {formulation} run aborted: {traj.diagnostic}",
                  file=sys.stderr)
            return 3
        results[formulation] = traj
    report = compare_trajectories(results[NEWTON_EULER], results[WOOLSEY])

    t = results[NEWTON_EULER].column("t")
    early = t <= 12.0
    dq = np.abs(results[NEWTON_EULER].column("q")
                - results[WOOLSEY].column("q"))
    max_dq_12s = float(dq[early].max()) if np.any(early) else float("nan")

    print(f"{'channel':>8}  {'max|diff|':>13}  {'mean|diff|':>13}  "
          f"{'sign agree':>10}")
    for name, ch in report.channels.items():
        print(f"{name:>8}  {ch.max_abs:13.6e}  {ch.mean_abs:13.6e}  "
              f"{ch.sign_agreement:10.4f}")
    print(f"max state difference: {report.max_state_diff:.6e}")
    print(f"max |dq| over first 12 s: {max_dq_12s:.6e} rad/s")

    diff_path = f"{stem}_diff.json"
    payload = {
        "n_samples": report.n_samples,
        "max_state_diff": report.max_state_diff,
        "max_dq_first_12s": max_dq_12s,
        "channels": {name: {"max_abs": ch.max_abs, "mean_abs": ch.mean_abs,
                            "sign_agreement": ch.sign_agreement}
                     for name, ch in report.channels.items()},
    }
    try:
        with open(diff_path, "w", encoding="utf-8", newline="") as handle:
            json.dump(payload, handle, indent=2, sort_keys=True)
            handle.write("\n")
    except OSError as exc:
        raise OutputError(f"cannot write {diff_path}: {exc}") from exc
    print(f"wrote difference summary to {diff_path}")
    return 0


def _random_nu9(rng, n):
    return rng.uniform(-2.0, 2.0, (n, 9))


def _check_coriolis_oracle(cfg, rng):
    worst = 0.0
    for nu9, r_p in zip(_random_nu9(rng, 200),
                        rng.uniform(-2.0, 2.0, (200, 3))):
        matrix = coriolis_force(cfg.params, r_p, nu9)
        kirch = kirchhoff_force(cfg.params, r_p, nu9)
        scale = max(1.0, float(np.max(np.abs(kirch))))
        worst = max(worst, float(np.max(np.abs(matrix - kirch))) / scale)
    return worst <= 1e-10, f"max relative deviation {worst:.3e}"


def _check_nullity(cfg, rng):
    worst = 0.0
    for nu9, r_p in zip(_random_nu9(rng, 200),
                        rng.uniform(-2.0, 2.0, (200, 3))):
        M = build_M_total(cfg.params, r_p)
        C = build_C(cfg.params, nu9) + build_C_P(cfg.params.m_p, r_p, nu9)
        rate = float(nu9 @ (C @ nu9))
        denom = float(nu9 @ nu9) * float(np.linalg.norm(M))
        if denom > 0.0:
            worst = max(worst, abs(rate) / denom)
    return worst <= 1e-12, f"max normalized energy rate {worst:.3e}"


def _check_gradients(cfg, rng):
    worst = 0.0
    for nu9, r_p in zip(_random_nu9(rng, 50),
                        rng.uniform(-2.0, 2.0, (50, 3))):
        worst = max(worst, gradient_check(cfg.params, r_p, nu9))
    return worst <= 1e-6, f"max relative FD deviation {worst:.3e}"


def _check_solver(cfg, rng):
    worst = 0.0
    for r_p in rng.uniform(-2.0, 2.0, (50, 3)):
        M = build_M_total(cfg.params, r_p)
        rhs = rng.uniform(-10.0, 10.0, 9)
        x = solve_accelerations(M, rhs)
        resid = float(np.max(np.abs(M @ x - rhs)))
        bound = 1e-10 * (1.0 + float(np.max(np.abs(rhs))))
        worst = max(worst, resid / bound)
    return worst <= 1.0, f"worst residual at {worst:.3f} of the bound"


def _check_rail_projection(cfg, rng):
    rail = cfg.scenario.rail
    for _ in range(50):
        state = SimState(rng.normal(size=6) * 0.1, rng.uniform(-1, 1, 3),
                         rng.normal(size=6), rng.normal(size=3))
        once = project_to_rail(state, rail)
        twice = project_to_rail(once, rail)
        if not (np.array_equal(once.r_p, twice.r_p)
                and np.array_equal(once.v_p, twice.v_p)):
            return False, "projection is not idempotent"
        s = rail.coordinate(once.r_p)
        if not (rail.stroke_min <= s <= rail.stroke_max):
            return False, f"stroke {s} escaped the limits"
        if not np.array_equal(once.r_p, rail.position(s)):
            return False, "projected point is off the rail line"
    return True, "idempotent, on-line, within stroke (50 random states)"


def _check_short_run(cfg, rng):
    spec = replace(cfg.scenario, duration=2.0)
    for formulation in (NEWTON_EULER, WOOLSEY):
        traj = run_scenario(cfg.params, cfg.env, spec, formulation,
                            damping=cfg.damping)
        if traj.aborted:
            return False, f"{formulation}: {traj.diagnostic}"
        ok, detail = _validate_rows(traj, cfg)
        if not ok:
            return False, f"{formulation}: {detail}"
    return True, "2 s runs clean under both formulations"


def _validate_rows(traj, cfg) -> tuple[bool, str]:
    data = traj.data
    if not np.all(np.isfinite(data)):
        return False, "non-finite values in the trajectory"
    t = data[:, 0]
    if np.any(np.diff(t) <= 0.0):
        return False, "time column is not strictly increasing"
    rail = cfg.scenario.rail
    x_p = data[:, 13]
    lo = rail.position(rail.stroke_min)[0]
    hi = rail.position(rail.stroke_max)[0]
    if np.any(x_p < min(lo, hi)) or np.any(x_p > max(lo, hi)):
        return False, "x_p escaped the stroke limits"
    if np.any(data[:, 17] != cfg.scenario.surge_force):
        return False, "surge force column is not the configured constant"
    mag = cfg.scenario.mass_force_magnitude
    if np.any(np.abs(np.abs(data[:, 18]) - mag) > 1e-12 * mag):
        return False, "mass force magnitude drifted"
    return True, f"{data.shape[0]} rows satisfy the row invariants"


def _cmd_check(args) -> int:
    cfg = _load(args.config)
    rng = np.random.default_rng(cfg.seed)
    checks = [
        ("coriolis-oracle", _check_coriolis_oracle),
        ("energy-rate-nullity", _check_nullity),
        ("energy-gradients-fd", _check_gradients),
        ("solver-residual", _check_solver),
        ("rail-projection", _check_rail_projection),
        ("short-run", _check_short_run),
    ]
    failures = 0
    for name, fn in checks:
        try:
            ok, detail = fn(cfg, rng)
        except SimulationError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failures += 0 if ok else 1
    if args.csv is not None:
        traj = read_trajectory(args.csv)
        ok, detail = _validate_rows(traj, cfg)
        print(f"{'PASS' if ok else 'FAIL'} csv-invariants: {detail}")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 3


if __name__ == "__main__":
    sys.exit(main())
