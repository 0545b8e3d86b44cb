#!/usr/bin/env python3
"""
IAB Head-Stabilization Simulator - Shell Geometry and Kinematics
Spherical-polar kinematics of an incompressible thick-walled air bladder:
reference/deformed configurations, the volume-preserving radius map,
principal stretches, deformation gradient and strain invariants.

All lengths are meters. Deformation is radially symmetric (theta = Theta,
phi = Phi), so only radii enter the kinematics.

Author: IAB Simulation Team
Purpose: core geometry shared by the constitutive law, the BVP solver and the mechanism layer
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from iab_errors import DomainError

INCOMPRESSIBILITY_TOL = 1e-12


def real_cbrt(x):
    """Sign-preserving real cube root (works for floats and arrays)."""
    result = np.cbrt(x)
    if np.ndim(result) == 0:
        return float(result)
    return result


@dataclass(frozen=True)
class ReferenceShell:
    """Undeformed bladder wall, inner radius R_i and outer radius R_o (m)."""

    R_i: float
    R_o: float

    def __post_init__(self):
        if not (math.isfinite(self.R_i) and math.isfinite(self.R_o)):
            raise DomainError(f"Reference radii must be finite, got R_i={self.R_i}, R_o={self.R_o}")
        if not 0.0 < self.R_i < self.R_o:
            raise DomainError(f"Reference shell needs 0 < R_i < R_o, got R_i={self.R_i}, R_o={self.R_o}")

    @property
    def inner(self):
        return self.R_i

    @property
    def outer(self):
        return self.R_o

    @property
    def thickness(self):
        return self.R_o - self.R_i


@dataclass(frozen=True)
class DeformedShell:
    """Current bladder wall, inner radius r_i and outer radius r_o (m)."""

    r_i: float
    r_o: float

    def __post_init__(self):
        if not (math.isfinite(self.r_i) and math.isfinite(self.r_o)):
            raise DomainError(f"Deformed radii must be finite, got r_i={self.r_i}, r_o={self.r_o}")
        if not 0.0 < self.r_i < self.r_o:
            raise DomainError(f"Deformed shell needs 0 < r_i < r_o, got r_i={self.r_i}, r_o={self.r_o}")

    @property
    def inner(self):
        return self.r_i

    @property
    def outer(self):
        return self.r_o

    @property
    def thickness(self):
        return self.r_o - self.r_i


@dataclass(frozen=True)
class MaterialParams:
    """
    Mooney-Rivlin moduli plus density/Poisson metadata.

    C2 = 0 is the neo-Hookean limit and is allowed. Density and Poisson's
    ratio are carried for reports only; the incompressible model does not use them.
    """

    C1: float
    C2: float
    density: float = 0.1
    poisson: float = 0.45

    def __post_init__(self):
        if not self.C1 > 0.0:
            raise DomainError(f"C1 must be positive, got {self.C1}")
        if not self.C2 >= 0.0:
            raise DomainError(f"C2 must be non-negative, got {self.C2}")
        if not self.density > 0.0:
            raise DomainError(f"density must be positive, got {self.density}")
        if not 0.0 < self.poisson < 0.5:
            raise DomainError(f"poisson must lie in (0, 0.5), got {self.poisson}")

    def scaled(self, factor):
        """Copy with both moduli multiplied by factor."""
        return MaterialParams(self.C1 * factor, self.C2 * factor, self.density, self.poisson)


@dataclass(frozen=True)
class StretchState:
    """Principal stretches and invariants at one material radius."""

    lambda_r: float
    lambda_theta: float
    lambda_phi: float
    I1: float
    I2: float

    def __post_init__(self):
        if self.lambda_theta != self.lambda_phi:
            raise DomainError("Hoop stretches must be equal under spherical symmetry")
        jacobian = self.lambda_r * self.lambda_theta * self.lambda_phi
        if abs(jacobian - 1.0) > INCOMPRESSIBILITY_TOL:
            raise DomainError(f"Stretch product {jacobian!r} violates incompressibility")

    @classmethod
    def from_hoop_stretch(cls, lam):
        """State on the incompressible family lambda_theta = lambda_phi = lam, lambda_r = lam**-2."""
        if not lam > 0.0:
            raise DomainError(f"Stretch must be positive, got {lam}")
        return stretches(1.0, lam)

    @property
    def principal(self):
        return np.array([self.lambda_r, self.lambda_theta, self.lambda_phi])


def deform(ref: ReferenceShell, r_i: float) -> DeformedShell:
    """Deformed configuration reached from ref when the inner radius moves to r_i."""
    return DeformedShell(r_i=r_i, r_o=map_radius(ref.R_o, ref, r_i))


def map_radius(R, ref: ReferenceShell, r_i: float):
    """
    Map a reference radius to its deformed radius, r^3 = R^3 + r_i^3 - R_i^3.

    Args:
        R (float | np.ndarray): reference radius or radii in [R_i, R_o]
        ref (ReferenceShell): reference configuration
        r_i (float): deformed inner radius

    Returns:
        float | np.ndarray: deformed radius
    """
    if not r_i > 0.0:
        raise DomainError(f"Deformed inner radius must be positive, got {r_i}")
    R_arr = np.asarray(R, dtype=float)
    if np.any(R_arr < ref.R_i) or np.any(R_arr > ref.R_o):
        raise DomainError(f"Reference radius {R} outside wall [{ref.R_i}, {ref.R_o}]")

    if r_i == ref.R_i:
        # identity deformation
        r = R_arr
    else:
        cube = R_arr**3 + (r_i**3 - ref.R_i**3)
        if np.any(cube <= 0.0):
            raise DomainError(f"Inner radius r_i={r_i} collapses the wall (r^3 <= 0)")
        r = np.where(R_arr == ref.R_i, r_i, real_cbrt(cube))
    if r.ndim == 0:
        return float(r)
    return r


def stretches(R: float, r: float) -> StretchState:
    """Principal stretches lambda_r = R^2/r^2, lambda_theta = lambda_phi = r/R and invariants I1, I2."""
    if not (R > 0.0 and r > 0.0):
        raise DomainError(f"Radii must be positive, got R={R}, r={r}")
    hoop = r / R
    radial = (R / r) ** 2
    I1 = radial**2 + 2.0 * hoop**2
    I2 = hoop**4 + 2.0 / hoop**2
    return StretchState(lambda_r=radial, lambda_theta=hoop, lambda_phi=hoop, I1=I1, I2=I2)


def deformation_gradient(s: StretchState) -> np.ndarray:
    """F = diag(lambda_r, lambda_phi, lambda_theta) in the (r, phi, theta) frame."""
    return np.diag([s.lambda_r, s.lambda_phi, s.lambda_theta])


def cauchy_green_tensors(s: StretchState):
    """
    Right and left Cauchy-Green tensors C = F^T F and B = F F^T.

    Both are diagonal and equal here; they are returned separately so callers
    read like the continuum formulas.
    """
    F = deformation_gradient(s)
    return F.T @ F, F @ F.T


def wall_volume(shell) -> float:
    """Material volume (4/3) pi (outer^3 - inner^3) of a reference or deformed shell, m^3."""
    return 4.0 / 3.0 * math.pi * (shell.outer**3 - shell.inner**3)
