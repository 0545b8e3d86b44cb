#!/usr/bin/env python3
"""
IAB Head-Stabilization Simulator - Mooney-Rivlin Constitutive Law
Stored energy and Cauchy stress for the incompressible bladder material.

    W' = C1 (I1 - 3) + C2 (I2 - 3),   W = W' / 2
    sigma = C1 B - C2 C^-1 - p I

The hydrostatic pressure p is an input here; only the boundary value
problem fixes it.

Author: IAB Simulation Team
Purpose: constitutive relations used by the BVP solver and the oracle checks
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from iab_geometry import MaterialParams, StretchState

DEFAULT_FD_STEP = 1e-6


@dataclass(frozen=True)
class StrainEnergy:
    """Scaled energy W (canonical) and the unscaled Mooney form W_prime, J/m^3."""

    W: float
    W_prime: float


@dataclass(frozen=True)
class StressState:
    """
    Normal Cauchy stress components at one point of the wall, Pa.

    Shear components are identically zero under spherical symmetry and are
    not represented. The Lagrange multiplier of the incompressibility
    constraint is q = -hydrostatic_p.
    """

    sigma_rr: float
    sigma_thetatheta: float
    sigma_phiphi: float
    hydrostatic_p: float
    at_R: float
    at_r: float

    @property
    def lagrange_multiplier(self):
        return -self.hydrostatic_p

    @property
    def hoop_minus_radial(self):
        return self.sigma_thetatheta - self.sigma_rr


@dataclass(frozen=True)
class DeviatoricCheck:
    """Result of comparing the analytic deviatoric stress with a derivative of W."""

    diagonal: np.ndarray
    analytic_difference: float
    fd_difference: float
    relative_error: float


def radial_deviatoric(R, r, m: MaterialParams):
    """p-independent part of sigma_rr: C1 R^4/r^4 - C2 r^4/R^4."""
    ratio = R / r
    return m.C1 * ratio**4 - m.C2 / ratio**4


def hoop_deviatoric(R, r, m: MaterialParams):
    """p-independent part of sigma_thetatheta: C1 r^2/R^2 - C2 R^2/r^2."""
    hoop = r / R
    return m.C1 * hoop**2 - m.C2 / hoop**2


def strain_energy(s: StretchState, m: MaterialParams) -> StrainEnergy:
    W_prime = m.C1 * (s.I1 - 3.0) + m.C2 * (s.I2 - 3.0)
    return StrainEnergy(W=0.5 * W_prime, W_prime=W_prime)


def normal_stresses(R: float, r: float, p: float, m: MaterialParams) -> StressState:
    """
    Normal stress components at reference radius R / deformed radius r.

    Args:
        R (float): reference radius, m
        r (float): deformed radius, m
        p (float): hydrostatic pressure, Pa
        m (MaterialParams): Mooney-Rivlin moduli

    Returns:
        StressState: sigma_rr, sigma_thetatheta = sigma_phiphi and p
    """
    hoop = -p + hoop_deviatoric(R, r, m)
    return StressState(
        sigma_rr=-p + radial_deviatoric(R, r, m),
        sigma_thetatheta=hoop,
        sigma_phiphi=hoop,
        hydrostatic_p=p,
        at_R=R,
        at_r=r,
    )


def stress_from_energy_check(s: StretchState, m: MaterialParams, step: float = DEFAULT_FD_STEP) -> DeviatoricCheck:
    """
    Deviatoric stress C1 diag(lambda^2) - C2 diag(lambda^-2) and its energy check.

    The hoop-minus-radial difference is also obtained by central differences
    of W in the logarithmic hoop strain eps = ln(lambda_theta): with two
    equal hoop directions, sigma_thetatheta - sigma_rr = (1/2) dW/deps.
    """
    principal = s.principal
    diagonal = m.C1 * principal**2 - m.C2 / principal**2
    analytic = float(diagonal[1] - diagonal[0])

    eps = math.log(s.lambda_theta)
    # energy on the incompressible family through the hoop stretch
    w_plus = strain_energy(StretchState.from_hoop_stretch(math.exp(eps + step)), m).W
    w_minus = strain_energy(StretchState.from_hoop_stretch(math.exp(eps - step)), m).W
    fd = 0.5 * (w_plus - w_minus) / (2.0 * step)

    scale = max(abs(analytic), m.C1 + m.C2)
    return DeviatoricCheck(
        diagonal=diagonal,
        analytic_difference=analytic,
        fd_difference=fd,
        relative_error=abs(fd - analytic) / scale,
    )
