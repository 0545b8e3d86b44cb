#!/usr/bin/env python3
"""
IAB Head-Stabilization Simulator - Scenario Configuration
Reads scenario INI files with explicit unit suffixes and converts every
quantity to SI at ingest.

    [material]
    C1 = 1.1e4 Pa
    C2 = 22 kPa
    [reference]
    R_i = 2.7 cm
    R_o = 0.03 m
    [scenario]
    mode = inverse
    target = 0.03 m

Environment overrides (a .env file is honoured): IAB_OUTPUT_DIR,
IAB_LOG_LEVEL, IAB_QUAD_REL_TOL.

Author: IAB Simulation Team
Purpose: configuration layer for the scenario runner
"""

from __future__ import annotations

import configparser
import logging
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from dotenv import load_dotenv

from iab_bvp_solver import DEFAULT_SETTINGS, SolverSettings
from iab_errors import ConfigError, IabError
from iab_geometry import MaterialParams, ReferenceShell
from iab_mechanism import (GROUP_AXES, CorrectionCommand, IabPlacement, Mechanism,
                           build_default_mechanism)

logger = logging.getLogger(__name__)

LENGTH_UNITS = {"m": 1.0, "cm": 1e-2, "mm": 1e-3}
PRESSURE_UNITS = {"Pa": 1.0, "kPa": 1e3, "MPa": 1e6}
DENSITY_UNITS = {"kg/m3": 1.0, "kg/m^3": 1.0, "g/cm3": 1e3, "g/cm^3": 1e3}
MODES = ("inverse", "forward")

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)\s*$")

CONFIG_TEMPLATE = """\
# IAB scenario configuration. Every dimensional value needs a unit suffix.

[material]
C1 = 1.1e4 Pa
C2 = 2.2e4 Pa
density = 0.1 kg/m3
poisson = 0.45

[reference]
R_i = 0.027 m
R_o = 0.03 m

[scenario]
name = expansion
# inverse: target is the deformed inner radius; forward: target is the gauge pressure
mode = inverse
target = 0.03 m
samples = 64

[solver]
quad_abs_tol = 1e-12
quad_rel_tol = 1e-10
P_atm = 0 Pa

[output]
report = report.json
profile = profile.csv
mesh = true
mesh_resolution = 32x64
plot = false

[mechanism]
axis = left-right
displacement = 2 mm
"""


def parse_quantity(text, units, field_name):
    """
    Parse '<number> <unit>' into SI.

    Args:
        text (str): raw value, e.g. '2.7 cm'
        units (dict | None): accepted unit -> SI factor; None for dimensionless values
        field_name (str): 'section.key' used in error messages

    Returns:
        float: value in SI units
    """
    match = _QUANTITY.match(str(text))
    if not match:
        raise ConfigError(f"cannot parse quantity '{text}'", field_name)
    number, unit = float(match.group(1)), match.group(2)
    if units is None:
        if unit:
            raise ConfigError(f"dimensionless value must not carry a unit, got '{unit}'", field_name)
        return number
    if not unit:
        raise ConfigError(f"missing unit, expected one of {sorted(units)}", field_name)
    if unit not in units:
        raise ConfigError(f"unknown unit '{unit}', expected one of {sorted(units)}", field_name)
    return number * units[unit]


@dataclass(frozen=True)
class OutputSpec:
    report: str = "report.json"
    profile: str = "profile.csv"
    mesh: bool = True
    mesh_resolution: tuple = (32, 64)
    plot: bool = False


@dataclass(frozen=True)
class ScenarioConfig:
    """One scenario: material, reference shell, mode/target, sampling and output choices."""

    material: MaterialParams
    reference: ReferenceShell
    mode: str
    target: float
    samples: int = 64
    name: str = "scenario"
    settings: SolverSettings = DEFAULT_SETTINGS
    outputs: OutputSpec = field(default_factory=OutputSpec)
    mechanism: Mechanism | None = None
    command: CorrectionCommand | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got '{self.mode}'", "scenario.mode")
        if self.samples < 2:
            raise ConfigError(f"samples must be >= 2, got {self.samples}", "scenario.samples")

    @property
    def target_unit(self):
        return "m" if self.mode == "inverse" else "Pa"


def _get(parser, section, key, units=None, default=None, required=True):
    name = f"{section}.{key}"
    if not parser.has_option(section, key):
        if required and default is None:
            raise ConfigError("missing required field", name)
        return default
    return parse_quantity(parser.get(section, key), units, name)


def _get_bool(parser, section, key, default):
    try:
        return parser.getboolean(section, key, fallback=default)
    except ValueError as exc:
        raise ConfigError(str(exc), f"{section}.{key}") from exc


def _get_int(parser, section, key, default):
    value = _get(parser, section, key, default=default)
    if value != int(value):
        raise ConfigError(f"expected an integer, got {value}", f"{section}.{key}")
    return int(value)


def _read_material(parser):
    return MaterialParams(
        C1=_get(parser, "material", "C1", PRESSURE_UNITS),
        C2=_get(parser, "material", "C2", PRESSURE_UNITS),
        density=_get(parser, "material", "density", DENSITY_UNITS, default=0.1, required=False),
        poisson=_get(parser, "material", "poisson", default=0.45, required=False),
    )


def _read_shell(parser, section):
    return ReferenceShell(
        R_i=_get(parser, section, "R_i", LENGTH_UNITS),
        R_o=_get(parser, section, "R_o", LENGTH_UNITS),
    )


def _read_settings(parser):
    settings = DEFAULT_SETTINGS
    if parser.has_section("solver"):
        settings = settings.with_overrides(
            quad_abs_tol=_get(parser, "solver", "quad_abs_tol", required=False),
            quad_rel_tol=_get(parser, "solver", "quad_rel_tol", required=False),
            dual_form_rel_tol=_get(parser, "solver", "dual_form_rel_tol", required=False),
            P_atm=_get(parser, "solver", "P_atm", PRESSURE_UNITS, required=False),
            bracket_samples=_get_int(parser, "solver", "bracket_samples", None)
            if parser.has_option("solver", "bracket_samples") else None,
            max_stretch_factor=_get(parser, "solver", "max_stretch_factor", required=False),
            n_jobs=_get_int(parser, "solver", "n_jobs", None) if parser.has_option("solver", "n_jobs") else None,
        )
    return settings


def _read_outputs(parser):
    if not parser.has_section("output"):
        return OutputSpec()
    resolution_text = parser.get("output", "mesh_resolution", fallback="32x64")
    try:
        n_lat, n_lon = (int(part) for part in resolution_text.lower().split("x"))
    except ValueError as exc:
        raise ConfigError(f"expected '<lat>x<lon>', got '{resolution_text}'", "output.mesh_resolution") from exc
    if n_lat < 2 or n_lon < 3:
        raise ConfigError("mesh needs at least 2x3 divisions", "output.mesh_resolution")
    return OutputSpec(
        report=parser.get("output", "report", fallback="report.json"),
        profile=parser.get("output", "profile", fallback="profile.csv"),
        mesh=_get_bool(parser, "output", "mesh", True),
        mesh_resolution=(n_lat, n_lon),
        plot=_get_bool(parser, "output", "plot", False),
    )


def _read_mechanism(parser, material):
    placement_sections = [s for s in parser.sections() if s.startswith("placement.")]
    if not placement_sections:
        shell = _read_shell(parser, "mechanism") if parser.has_option("mechanism", "R_i") else None
        return build_default_mechanism(material=material) if shell is None else build_default_mechanism(shell, material)

    placements = []
    for section in placement_sections:
        group = parser.get(section, "group", fallback="")
        if group not in GROUP_AXES:
            raise ConfigError(f"group must be one of {sorted(GROUP_AXES)}, got '{group}'", f"{section}.group")
        placements.append(IabPlacement(
            id=section.split(".", 1)[1],
            group=group,
            axis=parser.get(section, "axis", fallback=GROUP_AXES[group]),
            sign=_get_int(parser, section, "sign", None),
            shell=_read_shell(parser, section),
            material=material,
        ))
    return Mechanism(tuple(placements))


def _read_command(parser):
    if not parser.has_option("mechanism", "axis"):
        return None
    return CorrectionCommand(
        axis=parser.get("mechanism", "axis"),
        displacement=_get(parser, "mechanism", "displacement", LENGTH_UNITS),
    )


def apply_settings_overrides(settings: SolverSettings = DEFAULT_SETTINGS, samples_override=None,
                             quad_tol_override=None) -> SolverSettings:
    """
    Layer environment and command-line overrides on file (or default) solver settings.

    Precedence: command line > IAB_QUAD_REL_TOL > scenario file > built-in default.
    """
    load_dotenv()
    if samples_override is not None and samples_override < 2:
        raise ConfigError(f"samples must be >= 2, got {samples_override}", "scenario.samples")

    # Environment override
    env_tol = os.getenv("IAB_QUAD_REL_TOL")
    if env_tol:
        settings = settings.with_overrides(quad_rel_tol=parse_quantity(env_tol, None, "env.IAB_QUAD_REL_TOL"))

    # Command-line overrides
    try:
        return settings.with_overrides(profile_samples=samples_override, quad_rel_tol=quad_tol_override)
    except IabError as exc:
        raise ConfigError(str(exc), "solver") from exc


def load_scenario_config(path, samples_override=None, quad_tol_override=None) -> ScenarioConfig:
    """
    Load and validate a scenario file.

    Args:
        path (str | Path): INI file
        samples_override (int): --samples from the command line
        quad_tol_override (float): --quad-tol from the command line

    Returns:
        ScenarioConfig: validated configuration in SI units
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")

    # Read the INI file, keys are case sensitive (R_i vs r_i)
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read(path, encoding="utf-8")
    except (configparser.Error, UnicodeDecodeError, OSError) as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    try:
        # Material and reference shell
        material = _read_material(parser)
        reference = _read_shell(parser, "reference")

        # Scenario target, unit depends on the mode
        mode = parser.get("scenario", "mode", fallback="inverse").strip()
        target_units = LENGTH_UNITS if mode == "inverse" else PRESSURE_UNITS
        target = _get(parser, "scenario", "target", target_units) if mode in MODES else 0.0

        # Solver settings: file, then environment, then command line
        samples = samples_override if samples_override is not None else _get_int(parser, "scenario", "samples", 64)
        settings = apply_settings_overrides(_read_settings(parser), samples, quad_tol_override)

        # Optional mechanism layout and correction command
        has_mechanism = parser.has_section("mechanism") or any(s.startswith("placement.") for s in parser.sections())
        config = ScenarioConfig(
            material=material,
            reference=reference,
            mode=mode,
            target=target,
            samples=samples,
            name=parser.get("scenario", "name", fallback=path.stem),
            settings=settings,
            outputs=_read_outputs(parser),
            mechanism=_read_mechanism(parser, material) if has_mechanism else None,
            command=_read_command(parser) if has_mechanism else None,
        )
    except ConfigError:
        raise
    except IabError as exc:
        # invalid values (e.g. R_i >= R_o) are configuration problems at this layer
        raise ConfigError(str(exc)) from exc

    logger.info(f"Loaded scenario '{config.name}' from {path} (mode={config.mode}, target={config.target} {config.target_unit})")
    return config


def write_config_template(path) -> Path:
    """Write a commented template scenario file (expansion scenario values)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(CONFIG_TEMPLATE, encoding="utf-8")
    logger.info(f"Config template written to {path}")
    return path
