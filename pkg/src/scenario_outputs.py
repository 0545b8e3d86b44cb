#!/usr/bin/env python3
"""
IAB Head-Stabilization Simulator - Scenario Outputs
Serialization of solve reports, stress profiles, surface meshes and charts.

  * report.json        - SolveReport, sorted keys, lossless float repr
  * profile.csv        - R,r,sigma_rr,p at 17 significant digits
  * *_outer.obj        - latitude-longitude triangulated outer surfaces
  * mesh_scalars.csv   - per-vertex stress scalars for the meshes
  * run_metadata.json  - timestamps and versions, kept out of report.json

Author: IAB Simulation Team
Purpose: file outputs of the scenario runner (identical config -> identical report files)
"""

from __future__ import annotations

import json
import logging
import platform
from datetime import datetime
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import meshio  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from iab_bvp_solver import BoundaryConditions, SolveReport  # noqa: E402
from iab_geometry import DeformedShell, ReferenceShell  # noqa: E402

logger = logging.getLogger(__name__)

PROFILE_COLUMNS = ["R", "r", "sigma_rr", "p"]
FLOAT_FORMAT = "%.17g"


def report_to_dict(report: SolveReport, scenario=None) -> dict:
    """Plain-JSON view of a report; scenario metadata (if any) goes under 'scenario'."""
    data = {
        "mode": report.mode,
        "pressure": report.pressure,
        "pressure_R_form": report.pressure_R_form,
        "target_pressure": report.target_pressure,
        "reference": {"R_i": report.reference.R_i, "R_o": report.reference.R_o},
        "deformed": {"r_i": report.deformed.r_i, "r_o": report.deformed.r_o},
        "boundary": {"P_atm": report.boundary.P_atm, "P_internal": report.boundary.P_internal},
        "delta_wall_volume": report.delta_wall_volume,
        "quadrature_error_estimate": report.quadrature_error_estimate,
        "iterations": report.iterations,
        "outer_hoop_stress": report.outer_hoop_stress,
        "inner_displacement": report.inner_displacement,
        "outer_displacement": report.outer_displacement,
        "body_force": report.body_force,
        "velocity": report.velocity,
        "candidate_roots": list(report.candidate_roots),
        "sigma_rr_profile": [list(row) for row in report.sigma_rr_profile],
        "hydrostatic_profile": [list(row) for row in report.hydrostatic_profile],
    }
    if scenario:
        data["scenario"] = dict(scenario)
    return data


def report_from_dict(data: dict) -> SolveReport:
    return SolveReport(
        pressure=data["pressure"],
        reference=ReferenceShell(**data["reference"]),
        deformed=DeformedShell(**data["deformed"]),
        boundary=BoundaryConditions(**data["boundary"]),
        sigma_rr_profile=tuple(tuple(row) for row in data["sigma_rr_profile"]),
        hydrostatic_profile=tuple(tuple(row) for row in data["hydrostatic_profile"]),
        delta_wall_volume=data["delta_wall_volume"],
        quadrature_error_estimate=data["quadrature_error_estimate"],
        iterations=data["iterations"],
        pressure_R_form=data["pressure_R_form"],
        outer_hoop_stress=data["outer_hoop_stress"],
        mode=data.get("mode", "inverse"),
        target_pressure=data.get("target_pressure"),
        candidate_roots=tuple(data.get("candidate_roots", ())),
    )


def write_report(report: SolveReport, path, scenario=None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # json renders floats with repr(), the shortest string that round-trips the double
    text = json.dumps(report_to_dict(report, scenario), indent=2, sort_keys=True)
    path.write_text(text + "\n", encoding="utf-8")
    logger.info(f"Report saved to: {path}")
    return path


def read_report(path) -> SolveReport:
    return report_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def write_profile(report: SolveReport, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    report.profile_frame()[PROFILE_COLUMNS].to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Profile saved to: {path}")
    return path


def read_profile(path) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip")


def write_table(frame: pd.DataFrame, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Table saved to: {path}")
    return path


def sphere_mesh(radius: float, n_lat: int = 32, n_lon: int = 64):
    """
    Latitude-longitude triangulation of a sphere.

    Args:
        radius (float): sphere radius, m
        n_lat (int): divisions pole to pole
        n_lon (int): divisions around the axis

    Returns:
        tuple: (points (N, 3) array, triangles (M, 3) int array)
    """
    polar = np.linspace(0.0, np.pi, n_lat + 1)[1:-1]
    azimuth = np.linspace(0.0, 2.0 * np.pi, n_lon, endpoint=False)
    Phi, Theta = np.meshgrid(polar, azimuth, indexing="ij")
    ring_points = np.column_stack([
        (np.sin(Phi) * np.cos(Theta)).ravel(),
        (np.sin(Phi) * np.sin(Theta)).ravel(),
        np.cos(Phi).ravel(),
    ])
    points = radius * np.vstack([[0.0, 0.0, 1.0], ring_points, [0.0, 0.0, -1.0]])

    n_rings = n_lat - 1
    south = 1 + n_rings * n_lon
    triangles = []
    for j in range(n_lon):
        nxt = (j + 1) % n_lon
        triangles.append((0, 1 + j, 1 + nxt))
        last = 1 + (n_rings - 1) * n_lon
        triangles.append((south, last + nxt, last + j))
    for i in range(n_rings - 1):
        top, bottom = 1 + i * n_lon, 1 + (i + 1) * n_lon
        for j in range(n_lon):
            nxt = (j + 1) % n_lon
            triangles.append((top + j, bottom + j, bottom + nxt))
            triangles.append((top + j, bottom + nxt, top + nxt))
    return points, np.asarray(triangles, dtype=np.int64)


def write_meshes(report: SolveReport, out_dir, resolution=(32, 64)) -> dict:
    """
    Reference and deformed outer surfaces as OBJ files plus a scalar sidecar table.

    The deformed surface carries sigma_rr (the outer traction) and the hoop
    stress on the outer skin; the reference surface is unloaded.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n_lat, n_lon = resolution
    outer_sigma_rr = report.sigma_rr_profile[-1][2]

    surfaces = {
        "reference": (report.reference.R_o, 0.0, 0.0),
        "deformed": (report.deformed.r_o, outer_sigma_rr, report.outer_hoop_stress),
    }
    paths, scalar_frames = {}, []
    for surface, (radius, sigma_rr, sigma_hoop) in surfaces.items():
        points, triangles = sphere_mesh(radius, n_lat, n_lon)
        mesh_path = out_dir / f"{surface}_outer.obj"
        meshio.write(mesh_path, meshio.Mesh(points, [("triangle", triangles)]), file_format="obj")
        paths[surface] = mesh_path
        scalar_frames.append(pd.DataFrame({
            "surface": surface,
            "vertex": np.arange(len(points)),
            "sigma_rr": np.full(len(points), sigma_rr),
            "sigma_thetatheta": np.full(len(points), sigma_hoop),
        }))

    paths["scalars"] = write_table(pd.concat(scalar_frames, ignore_index=True), out_dir / "mesh_scalars.csv")
    logger.info(f"Meshes saved to: {out_dir} ({n_lat}x{n_lon})")
    return paths


def plot_profile(report: SolveReport, path, title=None) -> Path:
    """Radial stress and hydrostatic pressure across the deformed wall, saved as PNG."""
    frame = report.profile_frame()
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot(frame["r"] * 1e3, frame["sigma_rr"], linewidth=2, label="sigma_rr")
    ax.plot(frame["r"] * 1e3, frame["p"], linewidth=2, linestyle="--", label="p (hydrostatic)")
    ax.set_xlabel("Deformed radius r (mm)")
    ax.set_ylabel("Stress (Pa)")
    ax.set_title(title or f"Wall stress profile, P = {report.pressure:.4g} Pa")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=300, bbox_inches="tight")
    plt.close(fig)
    logger.info(f"Profile chart saved to: {path}")
    return path


def write_run_metadata(out_dir, command, config_path=None) -> Path:
    """Timestamps and environment for a run; separate from report.json so reports stay byte-identical."""
    path = Path(out_dir) / "run_metadata.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    metadata = {
        "command": command,
        "config": str(config_path) if config_path else None,
        "run_date": datetime.now().strftime("%Y-%m-%d %H:%M:%S"),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "pandas": pd.__version__,
        "meshio": meshio.__version__,
    }
    path.write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
