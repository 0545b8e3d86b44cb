#!/usr/bin/env python3
"""
IAB Head-Stabilization Simulator - Eight-Bladder Mechanism
Placement metadata for the eight bladders around the head, the mapping from
an anatomical-axis correction to per-bladder inner radii, and the batch of
inverse solves that turns those radii into a pressure set.

Side bladders act along the left-right axis, base bladders along the
anterior-posterior axis. Each axis carries antagonistic pairs (sign +1 and -1).

Author: IAB Simulation Team
Purpose: mechanism layer on top of the single-bladder BVP solver
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import pandas as pd
from joblib import Parallel, delayed

from iab_bvp_solver import DEFAULT_SETTINGS, SolverSettings, internal_pressure
from iab_errors import DomainError, IabError, IabSolveError
from iab_geometry import MaterialParams, ReferenceShell

logger = logging.getLogger(__name__)

GROUP_AXES = {"side": "left-right", "base": "anterior-posterior"}
AXES = tuple(GROUP_AXES.values())
PLACEMENT_COUNT = 8
COMMAND_ENVELOPE = 0.005  # m

# nominal shell from the size synthesis: 2.75 cm / 3.0 cm, 0.25 cm wall
NOMINAL_SHELL = ReferenceShell(R_i=0.0275, R_o=0.03)
NOMINAL_MATERIAL = MaterialParams(C1=1.1e4, C2=2.2e4)


@dataclass(frozen=True)
class IabPlacement:
    """One bladder: id, group (side|base), axis, push sign along the axis, shell and material."""

    id: str
    group: str
    axis: str
    sign: int
    shell: ReferenceShell
    material: MaterialParams

    def __post_init__(self):
        if self.group not in GROUP_AXES:
            raise DomainError(f"Placement {self.id}: unknown group '{self.group}'")
        if self.axis != GROUP_AXES[self.group]:
            raise DomainError(f"Placement {self.id}: group '{self.group}' acts along '{GROUP_AXES[self.group]}', not '{self.axis}'")
        if self.sign not in (1, -1):
            raise DomainError(f"Placement {self.id}: sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class CorrectionCommand:
    """Signed head displacement along one anatomical axis, m."""

    axis: str
    displacement: float

    def __post_init__(self):
        if self.axis not in AXES:
            raise DomainError(f"Unknown axis '{self.axis}', expected one of {AXES}")
        if abs(self.displacement) > COMMAND_ENVELOPE:
            raise DomainError(
                f"Displacement {self.displacement} m outside the +/-{COMMAND_ENVELOPE} m command envelope"
            )


@dataclass(frozen=True)
class Mechanism:
    """Immutable set of eight placements, ordered by id."""

    placements: tuple

    def __post_init__(self):
        if len(self.placements) != PLACEMENT_COUNT:
            raise DomainError(f"Mechanism needs exactly {PLACEMENT_COUNT} placements, got {len(self.placements)}")
        ids = [p.id for p in self.placements]
        if len(set(ids)) != len(ids):
            raise DomainError("Placement ids must be unique")
        for axis in AXES:
            signs = {p.sign for p in self.placements if p.axis == axis}
            if signs != {1, -1}:
                raise DomainError(f"Axis '{axis}' needs an antagonistic pair (both signs), got {sorted(signs)}")
        object.__setattr__(self, "placements", tuple(sorted(self.placements, key=lambda p: p.id)))

    def __iter__(self):
        return iter(self.placements)

    def __len__(self):
        return len(self.placements)

    def by_id(self):
        return {p.id: p for p in self.placements}

    def group_counts(self):
        counts = {}
        for p in self.placements:
            counts[p.group] = counts.get(p.group, 0) + 1
        return counts


def build_default_mechanism(shell: ReferenceShell = NOMINAL_SHELL,
                            material: MaterialParams = NOMINAL_MATERIAL) -> Mechanism:
    """Four side and four base bladders, symmetric antagonistic pairs, nominal shells."""
    layout = [
        ("side-left-1", "side", 1), ("side-left-2", "side", 1),
        ("side-right-1", "side", -1), ("side-right-2", "side", -1),
        ("base-posterior-1", "base", 1), ("base-posterior-2", "base", 1),
        ("base-anterior-1", "base", -1), ("base-anterior-2", "base", -1),
    ]
    return Mechanism(tuple(
        IabPlacement(id=iab_id, group=group, axis=GROUP_AXES[group], sign=sign, shell=shell, material=material)
        for iab_id, group, sign in layout
    ))


def command_to_displacements(cmd: CorrectionCommand, mech: Mechanism) -> dict:
    """
    Target inner radius for every bladder.

    Bladders on the command axis whose sign matches the displacement expand
    by |displacement|; their antagonists contract by the same amount; bladders
    on the other axis keep r_i = R_i.

    Returns:
        dict: placement id -> target inner radius (m), ordered by id
    """
    magnitude = abs(cmd.displacement)
    direction = 1 if cmd.displacement > 0 else -1
    targets = {}
    for p in mech:
        if p.axis != cmd.axis or magnitude == 0.0:
            targets[p.id] = p.shell.R_i
        elif p.sign == direction:
            targets[p.id] = p.shell.R_i + magnitude
        else:
            targets[p.id] = p.shell.R_i - magnitude
    moved = sum(1 for p in mech if targets[p.id] != p.shell.R_i)
    logger.info(f"Command {cmd.axis} {cmd.displacement:+.4g} m -> {moved} bladders moved")
    return targets


def _solve_one(placement, r_i, settings):
    try:
        return placement.id, internal_pressure(placement.shell, r_i, placement.material, settings)
    except IabError as exc:
        raise IabSolveError(placement.id, exc) from exc


def solve_pressure_set(targets: dict, mech: Mechanism, settings: SolverSettings = DEFAULT_SETTINGS) -> dict:
    """
    Inverse solve for every bladder; one SolveReport per id.

    Solves are independent and run through joblib threads when
    settings.n_jobs != 1. The result is ordered by placement id.
    """
    placements = mech.by_id()
    unknown = set(targets) - set(placements)
    if unknown:
        raise DomainError(f"Targets name unknown bladders: {sorted(unknown)}")

    jobs = [delayed(_solve_one)(placements[iab_id], targets[iab_id], settings) for iab_id in sorted(targets)]
    results = Parallel(n_jobs=settings.n_jobs, prefer="threads")(jobs)
    logger.info(f"Solved pressure set for {len(results)} bladders, groups {mech.group_counts()}")
    return dict(sorted(results))


def pressure_table(reports: dict, mech: Mechanism) -> pd.DataFrame:
    """Summary of a pressure set, one row per bladder."""
    placements = mech.by_id()
    rows = []
    for iab_id, report in reports.items():
        p = placements[iab_id]
        rows.append({
            "id": iab_id,
            "group": p.group,
            "axis": p.axis,
            "sign": p.sign,
            "R_i": p.shell.R_i,
            "r_i": report.deformed.r_i,
            "pressure": report.pressure,
            "delta_wall_volume": report.delta_wall_volume,
        })
    return pd.DataFrame(rows, columns=["id", "group", "axis", "sign", "R_i", "r_i", "pressure", "delta_wall_volume"])
