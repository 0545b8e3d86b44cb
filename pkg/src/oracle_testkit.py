#!/usr/bin/env python3
"""
IAB Head-Stabilization Simulator - Reference Oracles
Brute-force reference computations used to cross-check the production solver:

  * fixed-grid composite trapezoid integration of the pressure integral
  * finite-difference differentiation of the stored energy
  * seeded random scenario generation for property tests

Nothing here calls the solver or constitutive modules; formulas are written
out again on purpose so a shared mistake cannot hide. Oracles are slow and
looser than the solver (see docs/iab_mechanics_notes.md for the review checklist).

Author: IAB Simulation Team
Purpose: acceptance-test oracles and the reproduce-paper cross-check column
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from iab_errors import DomainError
from iab_geometry import MaterialParams, ReferenceShell

ORACLE_STRETCH_RANGE = (0.4, 2.5)


@dataclass(frozen=True)
class OracleConfig:
    panels: int = 10**6
    fd_step: float = 1e-6
    seed: int = 20240607

    def __post_init__(self):
        if self.panels < 10**3:
            raise DomainError(f"panels must be >= 1000, got {self.panels}")
        if not 1e-9 <= self.fd_step <= 1e-3:
            raise DomainError(f"fd_step must lie in [1e-9, 1e-3], got {self.fd_step}")


@dataclass(frozen=True)
class TrapezoidEstimate:
    """Composite trapezoid value, Richardson error estimate and extrapolated value (Pa)."""

    value: float
    error_estimate: float
    extrapolated: float
    panels: int


@dataclass(frozen=True)
class RandomScenario:
    reference: ReferenceShell
    r_i: float
    material: MaterialParams

    @property
    def inner_stretch(self):
        return self.r_i / self.reference.R_i


def trapezoid_pressure(ref: ReferenceShell, r_i: float, m: MaterialParams, panels: int = 10**6) -> TrapezoidEstimate:
    """
    Internal pressure by the composite trapezoid rule on a uniform grid in r.

    The same nodes at half resolution give the Richardson estimate
    (T_n - T_{n/2}) / 3 of the error of T_n.
    """
    if not r_i > 0.0:
        raise DomainError(f"Inner radius must be positive, got {r_i}")
    if panels % 2:
        panels += 1
    shift = r_i**3 - ref.R_i**3
    r_o_cubed = ref.R_o**3 + shift
    if r_o_cubed <= 0.0:
        raise DomainError(f"Inner radius r_i={r_i} collapses the wall")
    r_o = r_o_cubed ** (1.0 / 3.0)

    r = np.linspace(r_i, r_o, panels + 1)
    R_cubed = r**3 - shift
    if np.any(R_cubed <= 0.0):
        raise DomainError(f"Inner radius r_i={r_i} collapses the wall")
    R = R_cubed ** (1.0 / 3.0)
    f = 2.0 * m.C1 * (r / R**2 - R**4 / r**5) + 2.0 * m.C2 * (r**3 / R**4 - R**2 / r**3)

    def composite(values, width):
        return width * (values.sum() - 0.5 * (values[0] + values[-1]))

    width = (r_o - r_i) / panels
    fine = composite(f, width)
    coarse = composite(f[::2], 2.0 * width)
    error = (fine - coarse) / 3.0
    return TrapezoidEstimate(value=float(fine), error_estimate=float(error),
                             extrapolated=float(fine + error), panels=panels)


def _stored_energy(lambda_r, lambda_theta, lambda_phi, m):
    I1 = lambda_r**2 + lambda_theta**2 + lambda_phi**2
    I2 = lambda_r**-2 + lambda_theta**-2 + lambda_phi**-2
    return 0.5 * m.C1 * (I1 - 3.0) + 0.5 * m.C2 * (I2 - 3.0)


def fd_energy_stress(s, m: MaterialParams, step: float = 1e-6) -> float:
    """
    sigma_thetatheta - sigma_rr estimated from energy perturbations.

    The hoop stretch is perturbed by the relative step (1 +/- step) and the
    radial stretch follows from lambda_r * lambda_theta^2 = 1. With two equal
    hoop directions the work-conjugate relation is
    sigma_thetatheta - sigma_rr = (lambda / 2) dW/dlambda.
    """
    lam = s.lambda_theta
    low, high = ORACLE_STRETCH_RANGE
    if not (low <= lam <= high and low <= s.lambda_r <= high):
        raise DomainError(f"Stretch state outside oracle range {ORACLE_STRETCH_RANGE}")

    def energy(hoop):
        return _stored_energy(1.0 / hoop**2, hoop, hoop, m)

    up = lam * (1.0 + step)
    down = lam * (1.0 - step)
    dW = (energy(up) - energy(down)) / (up - down)
    return 0.5 * lam * dW


def random_scenarios(seed: int, n: int) -> list:
    """Seeded scenarios spanning expansion and compression of random shells."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    scenarios = []
    for _ in range(n):
        R_i = rng.uniform(0.02, 0.035)
        wall = rng.uniform(0.001, 0.005)
        ratio = rng.uniform(0.85, 1.25)
        material = MaterialParams(C1=rng.uniform(5e3, 5e4), C2=rng.uniform(0.0, 1e5))
        scenarios.append(RandomScenario(ReferenceShell(R_i, R_i + wall), R_i * ratio, material))
    return scenarios
