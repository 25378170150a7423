"""Command-line interface.

Exit codes: 0 success, 1 usage/configuration/data error, 2 numerical error
(CFL violation, step-size underflow, degenerate equilibrium).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import oscillation_report
from .equilibria import find_autonomous_equilibria, forced_quasi_equilibrium, trivial_equilibrium
from .errors import ConfigError, LVError, NumericalError
from .integrators import integrate
from .io import (
    RunConfig,
    default_config_path,
    load_config,
    read_trajectory_csv,
    write_field_csv,
    write_pgm,
    write_trajectory_csv,
)
from .model import Disturbance, NoiseSpec, NondimParams
from .plot import plot_svg
from .spatial import run_pde
from .stability import classify_equilibrium, eigen2, jacobian, printed_lambdas

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2

SWEEP_MODEL = tuple(f.name for f in dataclasses.fields(NondimParams))
SWEEP_DIST = ("amp_prey_A", "amp_pred_Abar", "omega", "phi")
SWEEP_NOISE = ("intensity", "tau")
SWEEP_PARAMS = SWEEP_MODEL + SWEEP_DIST + SWEEP_NOISE
METRICS = ("mean_r", "mean_c", "var_r", "var_c", "period", "lag")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    if x is None:
        return "none"
    if isinstance(x, complex):
        if x.imag == 0:
            return f"{x.real:.10g}"
        return f"{x.real:.10g}{x.imag:+.10g}j"
    return f"{x:.10g}"


# -- simulate -------------------------------------------------------------------

def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    traj = integrate(cfg.model, cfg.disturbance, cfg.integration, cfg.initial)
    out = args.out or cfg.output.get("csv")
    if out:
        write_trajectory_csv(traj, out)
    if args.plot:
        plot_svg(
            [("prey r", traj.times, traj.r), ("predator c", traj.times, traj.c)],
            "time", "population", args.plot, title="Population against time",
        )
    r_end, c_end = traj.final
    print(f"final_time  {_fmt(float(traj.times[-1]))}")
    print(f"final_state r={_fmt(r_end)} c={_fmt(c_end)}")
    print(f"samples     {len(traj)}")
    print(f"clamp_events {len(traj.clamp_events)}")
    period = None
    if len(traj) >= 64:
        period = oscillation_report(traj).dominant_period
    print(f"dominant_period {_fmt(period)}")
    if out:
        print(f"wrote {out}")
    return EXIT_OK


# -- equilibria / stability -----------------------------------------------------

def _print_report(rep, indent="  "):
    j = rep.jacobian
    print(f"{indent}jacobian [[{_fmt(j.j11)}, {_fmt(j.j12)}], [{_fmt(j.j21)}, {_fmt(j.j22)}]]")
    print(f"{indent}eigenvalues {_fmt(rep.eigenvalues[0])}, {_fmt(rep.eigenvalues[1])}")
    print(f"{indent}trace {_fmt(rep.trace)} determinant {_fmt(rep.determinant)} discriminant {_fmt(rep.discriminant)}")
    print(f"{indent}class {rep.cls}")
    if rep.printed_lambda is not None:
        print(f"{indent}printed-lambda-1 {_fmt(rep.printed_lambda[0])}")
        print(f"{indent}printed-lambda-2 {_fmt(rep.printed_lambda[1])}")


def cmd_equilibria(args) -> int:
    cfg = load_config(args.config)
    p, d = cfg.model, cfg.disturbance
    triv = trivial_equilibrium()
    print(f"trivial r={_fmt(triv.r_e)} c={_fmt(triv.c_e)}")
    _print_report(classify_equilibrium(p, triv))
    q = forced_quasi_equilibrium(p, d, args.at_time)
    print(f"forced-quasi t={_fmt(args.at_time)} r={_fmt(q.r_e)} c={_fmt(q.c_e)}")
    _print_report(classify_equilibrium(p, q))
    roots = find_autonomous_equilibria(p, (args.r_max, args.c_max), args.grid_n)
    print(f"numeric equilibria (unforced, box [0,{_fmt(args.r_max)}]x[0,{_fmt(args.c_max)}]): {len(roots)}")
    for pt in roots:
        print(f"numeric r={_fmt(pt.r_e)} c={_fmt(pt.c_e)}")
        _print_report(classify_equilibrium(p, pt))
    return EXIT_OK


def _parse_point(text: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"expected 'R,C', got {text!r}", "--at") from None
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ConfigError(f"point must be finite, got {text!r}", "--at")
    return a, b


def cmd_stability(args) -> int:
    r, c = _parse_point(args.at)
    cfg = load_config(args.config)
    j = jacobian(cfg.model, r, c)
    rep = dataclasses.replace(eigen2(j), printed_lambda=printed_lambdas(cfg.model, r, c))
    print(f"point r={_fmt(r)} c={_fmt(c)}")
    _print_report(rep, indent="")
    return EXIT_OK


# -- sweep ----------------------------------------------------------------------

def apply_param(cfg: RunConfig, name: str, value: float) -> RunConfig:
    """Return ``cfg`` with one scalar parameter replaced (validated)."""
    try:
        if name in SWEEP_MODEL:
            return dataclasses.replace(cfg, model=dataclasses.replace(cfg.model, **{name: value}))
        if name in SWEEP_DIST:
            return dataclasses.replace(cfg, disturbance=dataclasses.replace(cfg.disturbance, **{name: value}))
        if name in SWEEP_NOISE:
            noise = dataclasses.replace(cfg.disturbance.noise, **{name: value})
            return dataclasses.replace(cfg, disturbance=dataclasses.replace(cfg.disturbance, noise=noise))
    except ConfigError:
        raise
    except LVError as exc:
        raise ConfigError(str(exc), f"--param {name}={value}") from None
    raise ConfigError(f"unknown parameter (allowed: {', '.join(SWEEP_PARAMS)})", "--param")


def run_metric(cfg: RunConfig, metric: str) -> float:
    traj = integrate(cfg.model, cfg.disturbance, cfg.integration, cfg.initial)
    rep = oscillation_report(traj)
    value = {
        "mean_r": rep.mean_r,
        "mean_c": rep.mean_c,
        "var_r": rep.var_r,
        "var_c": rep.var_c,
        "period": rep.dominant_period,
        "lag": rep.lag_rc,
    }[metric]
    return math.nan if value is None else float(value)


def _sweep_job(job):
    cfg, metric = job
    return run_metric(cfg, metric)


def sweep_configs(cfg: RunConfig, name: str, lo: float, hi: float, steps: int) -> list[tuple[float, RunConfig]]:
    values = np.linspace(lo, hi, steps)
    base_seed = cfg.disturbance.noise.seed
    out = []
    for i, v in enumerate(values):
        c = apply_param(cfg, name, float(v))
        out.append((float(v), c.with_seed((base_seed + i) % 2**64)))
    return out


def cmd_sweep(args) -> int:
    if args.param not in SWEEP_PARAMS:
        raise ConfigError(f"unknown parameter {args.param!r} (allowed: {', '.join(SWEEP_PARAMS)})", "--param")
    if args.steps < 2:
        raise ConfigError(f"must be >= 2, got {args.steps}", "--steps")
    cfg = load_config(args.config)
    runs = sweep_configs(cfg, args.param, args.lo, args.hi, args.steps)
    jobs = [(c, args.metric) for _, c in runs]
    n_workers = args.jobs or os.cpu_count() or 1
    if n_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(n_workers, len(jobs))) as ex:
            results = list(ex.map(_sweep_job, jobs))
    else:
        results = [_sweep_job(j) for j in jobs]
    rows = sorted(zip((v for v, _ in runs), results), key=lambda vr: vr[0])
    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["value", args.metric])
        for v, m in rows:
            w.writerow([format(v, ".17g"), format(m, ".17g")])
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


# -- pde ------------------------------------------------------------------------

def cmd_pde(args) -> int:
    cfg = load_config(args.config)
    if cfg.pde is None:
        raise ConfigError("missing required section for the pde command", "grid")
    pc = cfg.pde
    snaps = run_pde(
        cfg.model, cfg.disturbance, pc.grid, pc.initial_field(), pc.t1, pc.dt, pc.snapshot_every,
        reacting=pc.reacting, clamp=cfg.integration.clamp_negative,
    )
    out = Path(args.out_dir or cfg.output.get("out_dir", "pde_out"))
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "manifest.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "time", "r_csv", "c_csv", "r_pgm", "c_pgm"])
        for i, f in enumerate(snaps):
            names = [f"snap_{i:04d}_r.csv", f"snap_{i:04d}_c.csv", f"snap_{i:04d}_r.pgm", f"snap_{i:04d}_c.pgm"]
            write_field_csv(f.r, out / names[0])
            write_field_csv(f.c, out / names[1])
            write_pgm(f.r, out / names[2])
            write_pgm(f.c, out / names[3])
            w.writerow([i, format(f.time, ".17g"), *names])
    last = snaps[-1]
    print(f"snapshots {len(snaps)} written to {out}")
    print(f"final_time {_fmt(last.time)}")
    print(f"final mean r={_fmt(float(last.r.mean()))} c={_fmt(float(last.c.mean()))}")
    print(f"final range r=[{_fmt(float(last.r.min()))}, {_fmt(float(last.r.max()))}] "
          f"c=[{_fmt(float(last.c.min()))}, {_fmt(float(last.c.max()))}]")
    return EXIT_OK


# -- analyze --------------------------------------------------------------------

def cmd_analyze(args) -> int:
    traj = read_trajectory_csv(args.csv)
    rep = oscillation_report(traj)
    if rep.dominant_period is None:
        print("no oscillation detected")
    for f in dataclasses.fields(rep):
        print(f"{f.name} {_fmt(getattr(rep, f.name))}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lvdisturb", description="Forced predator-prey model with harvesting, noise and diffusion.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    default_cfg = str(default_config_path())

    s = sub.add_parser("simulate", help="integrate the ODE model and write a CSV trajectory")
    s.add_argument("--config", default=default_cfg)
    s.add_argument("--out", help="trajectory CSV (default: [output].csv)")
    s.add_argument("--plot", help="write an SVG time-series plot")
    s.add_argument("--seed", type=int, help="override the noise seed")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("equilibria", help="trivial, forced quasi- and numeric equilibria")
    s.add_argument("--config", default=default_cfg)
    s.add_argument("--at-time", type=float, default=0.0)
    s.add_argument("--r-max", type=float, default=10.0)
    s.add_argument("--c-max", type=float, default=10.0)
    s.add_argument("--grid-n", type=int, default=32)
    s.set_defaults(func=cmd_equilibria)

    s = sub.add_parser("stability", help="Jacobian, eigenvalues and class at a point")
    s.add_argument("--config", default=default_cfg)
    s.add_argument("--at", required=True, metavar="R,C")
    s.set_defaults(func=cmd_stability)

    s = sub.add_parser("sweep", help="one simulation per parameter value, one metric per row")
    s.add_argument("--config", default=default_cfg)
    s.add_argument("--param", required=True)
    s.add_argument("--from", dest="lo", type=float, required=True)
    s.add_argument("--to", dest="hi", type=float, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--metric", choices=METRICS, required=True)
    s.add_argument("--out")
    s.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPU count)")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("pde", help="2D reaction-diffusion run with CSV/PGM snapshots")
    s.add_argument("--config", default=default_cfg)
    s.add_argument("--out-dir")
    s.set_defaults(func=cmd_pde)

    s = sub.add_parser("analyze", help="oscillation report for a trajectory CSV")
    s.add_argument("--csv", required=True)
    s.set_defaults(func=cmd_analyze)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (LVError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
