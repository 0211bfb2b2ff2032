"""Command line front end.

Every command reads a key = value configuration file, runs one experiment,
and writes deterministic artifacts (CSV snapshots, report.json, manifest.json)
into the output directory.  Exit codes: 0 on success (a detected blow-up is a
successful outcome), 1 on configuration errors, 2 on runtime failures.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, verify
from .config import RunConfig, parse_config
from .equations import BFAMILY, EquationSpec, MKind
from .errors import ConfigError, WdlabError
from .grid import PeriodicGrid
from .hs_exact import HSExactData
from .timestepping import IntegratorConfig, integrate

FLOAT_FMT = "%.17g"


def build_profile(grid, preset, constant, mean, cos_coeffs, sin_coeffs):
    """Initial field from its configuration designator."""
    if preset == "zero":
        return np.zeros(grid.n)
    if preset == "constant":
        return np.full(grid.n, float(constant))
    if preset == "smooth":
        th = 2.0 * np.pi * grid.x / grid.L
        return np.sin(th) + 0.5 * np.cos(2.0 * th)
    # preset == "series"
    th = 2.0 * np.pi * grid.x / grid.L
    f = np.full(grid.n, float(mean))
    for j, c in enumerate(cos_coeffs, start=1):
        f += c * np.cos(j * th)
    for j, c in enumerate(sin_coeffs, start=1):
        f += c * np.sin(j * th)
    return f


def _v0(cfg, grid):
    return build_profile(grid, cfg.v0_preset, cfg.v0_constant, cfg.v0_mean,
                         cfg.v0_cos, cfg.v0_sin)


def _sigma0(cfg, grid):
    return build_profile(grid, cfg.sigma0_preset, cfg.sigma0_constant,
                         cfg.sigma0_mean, cfg.sigma0_cos, cfg.sigma0_sin)


def _spec(cfg):
    return EquationSpec(cfg.equation, MKind(cfg.mkind), cfg.b, cfg.kappa, cfg.lam)


def _write_json(path, payload):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_csv(path, grid, v, sigma=None):
    cols = [grid.x, v] if sigma is None else [grid.x, v, sigma]
    header = "x,v" if sigma is None else "x,v,sigma"
    lines = [header]
    for row in zip(*cols):
        lines.append(",".join(FLOAT_FMT % val for val in row))
    path.write_text("\n".join(lines) + "\n")


def _manifest(outdir, cfg, command, extra):
    payload = {
        "command": command,
        "version": __version__,
        "config": cfg.to_dict(),
    }
    payload.update(extra)
    _write_json(outdir / "manifest.json", payload)


def cmd_simulate(cfg, outdir):
    grid = PeriodicGrid(cfg.n, cfg.L)
    spec = _spec(cfg)
    init = verify.initial_state(grid, _v0(cfg, grid), _sigma0(cfg, grid), spec)
    icfg = IntegratorConfig(cfg.dt, cfg.t_end, tuple(cfg.snapshot_times),
                            cfg.blowup_threshold)
    traj = integrate(grid, init, spec, icfg)
    files = {}
    with_sigma = spec.family == BFAMILY
    for i, t in enumerate(sorted(cfg.snapshot_times)):
        if traj.blew_up and t > traj.times[-1] + 1e-12:
            break
        name = f"snapshot_{i:03d}.csv"
        sig = traj.state_at(t).sigma if with_sigma else None
        _write_csv(outdir / name, grid, traj.velocity_at(t), sig)
        files[FLOAT_FMT % t] = name
    _manifest(outdir, cfg, "simulate", {
        "termination": traj.termination,
        "t_detect": traj.t_detect,
        "snapshots": files,
    })
    if traj.blew_up:
        print(f"blow-up detected at t={traj.t_detect:g}")
    else:
        print(f"completed to t={cfg.t_end:g}")
    return 0


def cmd_equiv(cfg, outdir):
    grid = PeriodicGrid(cfg.n, cfg.L)
    spec = _spec(cfg)
    times = cfg.check_times or [cfg.t_check]
    rep = verify.equivalence_experiment(
        grid, _v0(cfg, grid), _sigma0(cfg, grid), spec, times, cfg.dt,
        tolerance=cfg.tolerance, direction=cfg.direction,
        blowup_threshold=cfg.blowup_threshold)
    _write_json(outdir / "report.json", rep.to_dict())
    _manifest(outdir, cfg, "equiv", {"verdict": rep.verdict})
    print(f"equivalence verdict: {rep.verdict}")
    return 0


def cmd_hs_exact(cfg, outdir):
    grid = PeriodicGrid(cfg.n, cfg.L)
    v0x = grid.deriv(_v0(cfg, grid), 1)
    data = HSExactData.normalized(grid, v0x, _sigma0(cfg, grid), cfg.kappa,
                                  cfg.lam)
    times = cfg.check_times or [cfg.t_check]
    rep = verify.hs_oracle_experiment(data, times, cfg.dt,
                                      tolerance=cfg.tolerance)
    _write_json(outdir / "report.json", rep.to_dict())
    _manifest(outdir, cfg, "hs-exact", {"verdict": rep.verdict})
    print(f"oracle verdict: {rep.verdict}")
    return 0


def cmd_blowup(cfg, outdir):
    grid = PeriodicGrid(cfg.n, cfg.L)
    spec = _spec(cfg).with_lam(0.0)
    init = verify.initial_state(grid, _v0(cfg, grid), _sigma0(cfg, grid), spec)
    rep = verify.blowup_correspondence_experiment(
        grid, init, spec, cfg.lam, cfg.dt, slope_level=cfg.slope_level,
        t_max=cfg.t_end)
    _write_json(outdir / "report.json", rep.to_dict())
    _manifest(outdir, cfg, "blowup", {"verdict": rep.verdict})
    print(f"blow-up correspondence verdict: {rep.verdict}")
    return 0


def cmd_converge(cfg, outdir):
    spec = _spec(cfg)

    def v0_fn(x):
        g = PeriodicGrid(len(x), cfg.L)
        return _v0(cfg, g)

    def sigma0_fn(x):
        g = PeriodicGrid(len(x), cfg.L)
        return _sigma0(cfg, g)

    rep = verify.convergence_study(v0_fn, sigma0_fn, spec, cfg.t_check,
                                   cfg.resolutions, cfg.dt, L=cfg.L,
                                   tolerance=cfg.tolerance)
    _write_json(outdir / "report.json", rep.to_dict())
    _manifest(outdir, cfg, "converge", {"classification": rep.classification})
    print(f"convergence classification: {rep.classification}")
    return 0


def cmd_dual(cfg, outdir):
    grid = PeriodicGrid(cfg.n, cfg.L)
    rep = verify.dual_formulation_check(grid, _v0(cfg, grid), cfg.lam, cfg.dt,
                                        cfg.t_check, tolerance=cfg.tolerance)
    _write_json(outdir / "report.json", rep.to_dict())
    _manifest(outdir, cfg, "dual", {"verdict": rep.verdict})
    print(f"dual formulation verdict: {rep.verdict}")
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "equiv": cmd_equiv,
    "hs-exact": cmd_hs_exact,
    "blowup": cmd_blowup,
    "converge": cmd_converge,
    "dual": cmd_dual,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wdlab",
        description="pseudospectral experiments for weakly dissipative "
                    "shallow-water equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--config", required=True, help="configuration file")
        p.add_argument("--output-dir", default=None,
                       help="artifact directory (overrides the config)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    try:
        cfg = parse_config(text)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    outdir = Path(args.output_dir if args.output_dir is not None else cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        return COMMANDS[args.command](cfg, outdir)
    except WdlabError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
