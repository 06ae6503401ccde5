"""Command-line scenario runner.

Every subcommand reads a YAML scenario file (``--config``), applies flag
overrides and writes a CSV table whose first line is a ``# relbell v1``
comment carrying the configuration digest.
"""
from __future__ import annotations

import argparse
import io
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .averaging import AcceptanceCone, cone_statistics
from .config import MODES, ConfigError, ScenarioConfig
from .correlations import FrameConfig, MomentumShell, chsh_s, direction, quantization_axis
from .solvers import DegenerateConfigurationError, optimize_directions, solve_compensating_field

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

COMMANDS = {
    "sphere-sweep": "sphere_sweep",
    "cone-sweep": "cone_sweep",
    "boosted-cone-sweep": "boosted_cone_sweep",
    "optimize": "optimize",
    "compensate": "compensate",
}


def fmt(x) -> str:
    return f"{float(x) + 0.0:.12g}"  # + 0.0 folds -0.0 into 0.0


def _map(fn, items, workers):
    # results come back in input order whatever the completion order
    if workers <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def run_sphere_sweep(cfg: ScenarioConfig, workers: int = 1):
    shell = MomentumShell(cfg.speed_b)
    frame = FrameConfig.along_z(cfg.beta)
    settings = cfg.settings
    phi = np.radians(cfg.grid_phi)
    rows_s = _map(lambda t: chsh_s(settings, np.radians(t), phi, shell, frame), cfg.grid_theta, workers)
    header = ["theta_deg", "phi_deg", "S"]
    rows = [(t, p, s) for t, srow in zip(cfg.grid_theta, rows_s) for p, s in zip(cfg.grid_phi, srow)]
    return header, rows


def _cone_row(settings, shell, frame, theta_prime_deg, quad):
    if theta_prime_deg == 0.0:
        # a cone of zero width is the pole direction itself
        s = chsh_s(settings, 0.0, 0.0, shell, frame)
        return s, s
    cone = AcceptanceCone(np.radians(theta_prime_deg))
    return cone_statistics(settings, shell, frame, cone, quad)


def run_cone_sweep(cfg: ScenarioConfig, workers: int = 1):
    frame = FrameConfig.along_z(cfg.beta)
    jobs = [(sp, tp) for sp in cfg.speeds for tp in cfg.theta_primes]
    out = _map(lambda j: _cone_row(cfg.settings, MomentumShell(j[0]), frame, j[1], cfg.quad),
               jobs, workers)
    header = ["speed_b", "theta_prime_deg", "S_literal", "S_correlator_avg"]
    return header, [(sp, tp, a, b) for (sp, tp), (a, b) in zip(jobs, out)]


def run_boosted_cone_sweep(cfg: ScenarioConfig, workers: int = 1):
    shell = MomentumShell(cfg.speed_b)
    jobs = [(bt, tp) for bt in cfg.betas for tp in cfg.theta_primes]
    out = _map(lambda j: _cone_row(cfg.settings, shell, FrameConfig.along_z(j[0]), j[1], cfg.quad),
               jobs, workers)
    header = ["beta", "theta_prime_deg", "S_literal", "S_correlator_avg"]
    return header, [(bt, tp, a, b) for (bt, tp), (a, b) in zip(jobs, out)]


def run_optimize(cfg: ScenarioConfig, workers: int = 1):
    frame = FrameConfig.along_z(cfg.beta)
    settings = cfg.settings
    cone = None if cfg.cone_theta_prime is None else AcceptanceCone(np.radians(cfg.cone_theta_prime))

    def solve(d):
        v = cfg.speed_b * direction(np.radians(d[0]), np.radians(d[1]))
        return optimize_directions(settings.a1, settings.a2, v, frame, cone, cfg.quad,
                                   tol=cfg.tol, max_iter=cfg.max_iter, seed=cfg.seed,
                                   mode=cfg.mode)

    results = _map(solve, cfg.directions, workers)
    header = ["theta_deg", "phi_deg", "theta_prime_deg", "best_S",
              "b1_x", "b1_y", "b1_z", "b2_x", "b2_y", "b2_z", "iterations", "converged"]
    tp = "" if cfg.cone_theta_prime is None else cfg.cone_theta_prime
    rows = [(d[0], d[1], tp, r.best_s, *r.best_b1, *r.best_b2, r.iterations, int(r.converged))
            for d, r in zip(cfg.directions, results)]
    return header, rows


def run_compensate(cfg: ScenarioConfig, workers: int = 1):
    frame = FrameConfig.along_z(cfg.beta)
    v = np.asarray(cfg.v_com)
    rows = []
    for t in cfg.targets:
        t = np.asarray(t) / np.linalg.norm(t)
        b = solve_compensating_field(t, v, frame)
        axis = quantization_axis(b, v, frame, general=True)
        rows.append((*t, *b, float(np.linalg.norm(axis - t))))
    header = ["target_x", "target_y", "target_z", "field_x", "field_y", "field_z", "residual"]
    return header, rows


RUNNERS = {
    "sphere_sweep": run_sphere_sweep,
    "cone_sweep": run_cone_sweep,
    "boosted_cone_sweep": run_boosted_cone_sweep,
    "optimize": run_optimize,
    "compensate": run_compensate,
}


def render(cfg: ScenarioConfig, header, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# relbell v1 scenario={cfg.scenario} config_sha256={cfg.digest()}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else
                           str(v) if isinstance(v, (int, np.integer)) else fmt(v)
                           for v in row) + "\n")
    return buf.getvalue()


def run(cfg: ScenarioConfig, workers: int = 1) -> str:
    header, rows = RUNNERS[cfg.scenario](cfg, workers)
    return render(cfg, header, rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relbell", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="YAML scenario file")
        p.add_argument("--speed-b", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--theta-prime-max", type=float, help="degrees")
        p.add_argument("--grid-theta", type=int, help="number of polar grid points over [0, 180]")
        p.add_argument("--grid-phi", type=int, help="number of azimuth grid points over [0, 360]")
        p.add_argument("--quad-theta", type=int)
        p.add_argument("--quad-phi", type=int)
        p.add_argument("--mode", choices=MODES)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", type=Path, help="output CSV (default: stdout)")
    return parser


def _overrides(cfg: ScenarioConfig, args) -> ScenarioConfig:
    kw = {"speed_b": args.speed_b, "beta": args.beta, "mode": args.mode}
    if args.speed_b is not None and cfg.scenario == "cone_sweep":
        kw["speeds"] = (args.speed_b,)
    if args.beta is not None and cfg.scenario == "boosted_cone_sweep":
        kw["betas"] = (args.beta,)
    if args.theta_prime_max is not None:
        kw["theta_primes"] = tuple(float(x) for x in
                                   np.linspace(0.0, args.theta_prime_max, len(cfg.theta_primes)))
    if args.grid_theta is not None:
        kw["grid_theta"] = tuple(float(x) for x in np.linspace(0.0, 180.0, args.grid_theta))
    if args.grid_phi is not None:
        kw["grid_phi"] = tuple(float(x) for x in np.linspace(0.0, 360.0, args.grid_phi))
    if args.quad_theta is not None or args.quad_phi is not None:
        base = cfg.quad
        n_theta = args.quad_theta or (base.n_theta if base else 128)
        n_phi = args.quad_phi or (base.n_phi if base else 2 * n_theta)
        kw["quadrature"] = (n_theta, n_phi)
    if args.out is not None:
        kw["output_path"] = str(args.out)
    return cfg.with_overrides(**kw)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    scenario = COMMANDS[args.command]
    try:
        if args.config is not None:
            cfg = ScenarioConfig.load(args.config)
            if cfg.scenario != scenario:
                raise ConfigError(f"config describes {cfg.scenario!r}, not {scenario!r}")
        else:
            cfg = ScenarioConfig(scenario)
        cfg = _overrides(cfg, args)
        text = run(cfg, args.workers)
    except OSError as exc:
        print(f"relbell: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DegenerateConfigurationError as exc:
        print(f"relbell: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"relbell: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if cfg.output_path is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"relbell: cannot write {cfg.output_path}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
