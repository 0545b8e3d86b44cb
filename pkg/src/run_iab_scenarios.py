#!/usr/bin/env python3
"""
IAB Head-Stabilization Simulator - Scenario Runner
Command-line front end for single-bladder solves, the eight-bladder
mechanism and the published-scenario reproduction.

    python run_iab_scenarios.py inverse  --config expansion.ini --out ../outputs/expansion
    python run_iab_scenarios.py forward  --config forward.ini   --out ../outputs/forward
    python run_iab_scenarios.py profile  --config expansion.ini --samples 256
    python run_iab_scenarios.py mechanism --config head.ini
    python run_iab_scenarios.py reproduce-paper --out ../outputs/reproduction
    python run_iab_scenarios.py init-config --out ../config

Exit codes: 0 success, 2 config error, 3 solver non-convergence,
4 domain error, 1 unexpected failure.

Author: IAB Simulation Team
Purpose: unified runner for every IAB simulation workflow
"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

import numpy as np
from dotenv import load_dotenv

from iab_bvp_solver import DEFAULT_SETTINGS, forward_solve, internal_pressure, pressure_curve
from iab_errors import ConfigError, DomainError, IabSolveError, NoBracketError, QuadratureError
from iab_mechanism import command_to_displacements, pressure_table, solve_pressure_set
from published_scenarios import reproduce_paper
from scenario_config import apply_settings_overrides, load_scenario_config, write_config_template
from scenario_outputs import (plot_profile, write_meshes, write_profile, write_report, write_run_metadata,
                              write_table)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_DOMAIN = 4

DEFAULT_OUTPUT_DIR = "outputs"
CURVE_STRETCHES = np.linspace(0.85, 1.25, 41)


@dataclass
class RunResult:
    """Solve report(s) of one run and the files written for it."""

    report: object = None
    paths: dict = field(default_factory=dict)


def print_banner(command):
    """Print runner banner."""
    print("=" * 80)
    print(f"IAB Head-Stabilization Simulator - {command}")
    print("=" * 80)
    print(f"Execution Time: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    print()


def setup_logging(out_dir, level="INFO"):
    """Log to stdout and to iab_run.log in the output directory."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(out_dir / "iab_run.log", encoding="utf-8"),
            logging.StreamHandler(sys.stdout),
        ],
        force=True,
    )


def _scenario_metadata(cfg):
    return {
        "name": cfg.name,
        "mode": cfg.mode,
        "target": cfg.target,
        "target_unit": cfg.target_unit,
        "samples": cfg.samples,
        "C1": cfg.material.C1,
        "C2": cfg.material.C2,
        "density": cfg.material.density,
        "poisson": cfg.material.poisson,
        "quad_rel_tol": cfg.settings.quad_rel_tol,
    }


def run_scenario(cfg, out_dir, force_plot=False):
    """
    Solve one configured scenario and write its outputs.

    Args:
        cfg (ScenarioConfig): validated scenario
        out_dir (str | Path): directory owned by this scenario
        force_plot (bool): write the profile chart even if the config does not ask for it

    Returns:
        RunResult: the SolveReport and the written paths
    """
    out_dir = Path(out_dir)

    # Solve
    if cfg.mode == "inverse":
        report = internal_pressure(cfg.reference, cfg.target, cfg.material, cfg.settings, cfg.samples)
    else:
        report = forward_solve(cfg.reference, cfg.target, cfg.material, cfg.settings, cfg.samples)

    # Write outputs
    result = RunResult(report=report)
    result.paths["report"] = write_report(report, out_dir / cfg.outputs.report, _scenario_metadata(cfg))
    result.paths["profile"] = write_profile(report, out_dir / cfg.outputs.profile)
    if cfg.outputs.mesh:
        result.paths.update(write_meshes(report, out_dir, cfg.outputs.mesh_resolution))
    if cfg.outputs.plot or force_plot:
        result.paths["plot"] = plot_profile(report, out_dir / "profile.png", title=f"{cfg.name}: P = {report.pressure:.4g} Pa")

    # Summary
    print(f"✅ {cfg.name} ({cfg.mode}) solved")
    print(f"   • Internal pressure P: {report.pressure:.6g} Pa")
    print(f"   • Deformed radii: r_i = {report.deformed.r_i:.9g} m, r_o = {report.deformed.r_o:.9g} m")
    print(f"   • Wall volume change: {report.delta_wall_volume:.3e} m^3")
    return result


def run_profile(cfg, out_dir):
    """Scenario solve plus profile chart and the P(r_i) curve over the inner-stretch range."""
    result = run_scenario(cfg, out_dir, force_plot=True)
    curve = pressure_curve(cfg.reference, cfg.material, CURVE_STRETCHES * cfg.reference.R_i, cfg.settings)
    result.paths["pressure_curve"] = write_table(curve, Path(out_dir) / "pressure_curve.csv")
    print(f"📊 Profile and pressure curve written to {out_dir}")
    return result


def run_mechanism(cfg, out_dir):
    """Pressure set for the configured correction command."""
    if cfg.mechanism is None or cfg.command is None:
        raise ConfigError("mechanism run needs [mechanism] axis and displacement", "mechanism.axis")
    out_dir = Path(out_dir)
    targets = command_to_displacements(cfg.command, cfg.mechanism)
    reports = solve_pressure_set(targets, cfg.mechanism, cfg.settings)

    result = RunResult(report=reports)
    table = pressure_table(reports, cfg.mechanism)
    result.paths["table"] = write_table(table, out_dir / "mechanism_pressures.csv")
    for iab_id, report in reports.items():
        result.paths[iab_id] = write_report(report, out_dir / "reports" / f"{iab_id}.json", {"iab_id": iab_id})

    print(f"✅ Pressure set for {cfg.command.axis} {cfg.command.displacement * 1e3:+.3g} mm")
    for row in table.itertuples():
        print(f"   • {row.id:<18} r_i = {row.r_i:.6g} m   P = {row.pressure:+.6g} Pa")
    return result


def run_reproduction(out_dir, settings=DEFAULT_SETTINGS):
    """Published scenarios vs computed values, with the discrepancy flags."""
    out_dir = Path(out_dir)
    reproduction = reproduce_paper(settings)
    result = RunResult(report=reproduction.reports)
    result.paths["table"] = write_table(reproduction.table, out_dir / "reproduction.csv")
    for name, report in reproduction.reports.items():
        result.paths[name] = write_report(report, out_dir / f"{name}_report.json", {"name": name})

    print("📋 Published vs computed:")
    print(reproduction.table.to_string(index=False))
    print()
    for flag in reproduction.flags:
        print(f"⚠️ {flag}")
    return result


def build_parser():
    parser = argparse.ArgumentParser(
        description="Finite-deformation simulator for spherical inflatable air bladders (IAB)"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_common(sub, config_required):
        sub.add_argument("--config", required=config_required, help="Scenario INI file")
        sub.add_argument("--out", default=None, help="Output directory (default: $IAB_OUTPUT_DIR or ./outputs)")
        sub.add_argument("--samples", type=int, default=None, help="Override profile sample count")
        sub.add_argument("--quad-tol", type=float, default=None, help="Override relative quadrature tolerance")
        sub.add_argument("--log-level", default=None, help="Logging level (default: $IAB_LOG_LEVEL or INFO)")

    add_common(subparsers.add_parser("inverse", help="Pressure for a prescribed inner radius"), True)
    add_common(subparsers.add_parser("forward", help="Inner radius for a prescribed pressure"), True)
    add_common(subparsers.add_parser("profile", help="Stress profile, chart and P(r_i) curve"), True)
    add_common(subparsers.add_parser("mechanism", help="Pressure set of the eight-bladder mechanism"), True)
    add_common(subparsers.add_parser("reproduce-paper", help="Published scenarios vs computed values"), False)
    add_common(subparsers.add_parser("init-config", help="Write a template scenario file"), False)
    return parser


def _dispatch(args, out_dir):
    if args.command == "init-config":
        path = write_config_template(out_dir / "scenario.ini")
        print(f"✅ Template written to {path}")
        return RunResult(paths={"config": path})

    if args.command == "reproduce-paper":
        # Scenario file settings when given, built-in defaults otherwise; env and flags on top
        if args.config:
            settings = load_scenario_config(args.config, args.samples, args.quad_tol).settings
        else:
            settings = apply_settings_overrides(DEFAULT_SETTINGS, args.samples, args.quad_tol)
        return run_reproduction(out_dir, settings)

    cfg = load_scenario_config(args.config, args.samples, args.quad_tol)
    if args.command in ("inverse", "forward") and cfg.mode != args.command:
        raise ConfigError(f"config is a '{cfg.mode}' scenario but '{args.command}' was requested", "scenario.mode")
    if args.command == "profile":
        return run_profile(cfg, out_dir)
    if args.command == "mechanism":
        return run_mechanism(cfg, out_dir)
    return run_scenario(cfg, out_dir)


def _exit_code(exc):
    cause = exc.cause if isinstance(exc, IabSolveError) else exc
    if isinstance(cause, ConfigError):
        return EXIT_CONFIG
    if isinstance(cause, (QuadratureError, NoBracketError)):
        return EXIT_SOLVER
    if isinstance(cause, DomainError):
        return EXIT_DOMAIN
    return EXIT_UNEXPECTED


def main(argv=None):
    """Parse arguments, run the requested workflow and return the exit code."""
    load_dotenv()
    args = build_parser().parse_args(argv)
    out_dir = Path(args.out or os.getenv("IAB_OUTPUT_DIR", DEFAULT_OUTPUT_DIR))
    setup_logging(out_dir, args.log_level or os.getenv("IAB_LOG_LEVEL", "INFO"))
    print_banner(args.command)

    try:
        _dispatch(args, out_dir)
        write_run_metadata(out_dir, args.command, args.config)
    except (ConfigError, QuadratureError, NoBracketError, DomainError, IabSolveError) as exc:
        code = _exit_code(exc)
        logger.error(f"{type(exc).__name__}: {exc}")
        print(f"❌ {args.command} failed: {exc}")
        return code
    except Exception as exc:
        logger.exception(f"Unexpected error: {exc}")
        print(f"❌ Unexpected error: {exc}")
        return EXIT_UNEXPECTED

    print(f"\n🎉 {args.command} completed. Outputs in {out_dir}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
