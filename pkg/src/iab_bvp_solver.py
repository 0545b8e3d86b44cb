#!/usr/bin/env python3
"""
IAB Head-Stabilization Simulator - Equilibrium Boundary Value Problem
Spherically symmetric equilibrium of the bladder wall.

Radial equilibrium (no body force, at rest):

    d sigma_rr / dr = (sigma_thetatheta + sigma_phiphi - 2 sigma_rr) / r

with sigma_rr(r_o) = -P_atm and sigma_rr(r_i) = -P_atm - P. Integrating
across the wall gives the internal gauge pressure P needed for a prescribed
inner radius (inverse kinematics); bracketed root finding on that relation
gives the inner radius reached under a prescribed pressure (forward kinematics).

Author: IAB Simulation Team
Purpose: pressure, stress profiles and solver telemetry for one bladder
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd
from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar

from iab_constitutive import hoop_deviatoric, radial_deviatoric
from iab_errors import DomainError, NoBracketError, NonMonotonePressureWarning, QuadratureError
from iab_geometry import DeformedShell, MaterialParams, ReferenceShell, deform, map_radius, real_cbrt, wall_volume

logger = logging.getLogger(__name__)

# pressures below this magnitude (Pa) are compared in absolute terms
PRESSURE_FLOOR = 1.0
MIN_PROFILE_SAMPLES = 2
MIN_RESIDUAL_GRID = 16


@dataclass(frozen=True)
class SolverSettings:
    """Numerical settings for one solve. Immutable; derive variants with with_overrides()."""

    quad_abs_tol: float = 1e-12
    quad_rel_tol: float = 1e-10
    quad_limit: int = 200
    dual_form_rel_tol: float = 1e-8
    P_atm: float = 0.0
    profile_samples: int = 64
    bracket_samples: int = 64
    collapse_fraction: float = 0.999
    collapse_margin: float = 1e-9
    max_stretch_factor: float = 2.0
    root_xtol: float = 1e-15
    root_maxiter: int = 200
    n_jobs: int = 1

    def __post_init__(self):
        if not (self.quad_abs_tol > 0 and self.quad_rel_tol > 0):
            raise DomainError("Quadrature tolerances must be positive")
        if self.profile_samples < MIN_PROFILE_SAMPLES:
            raise DomainError(f"profile_samples must be >= {MIN_PROFILE_SAMPLES}")
        if self.bracket_samples < 4:
            raise DomainError("bracket_samples must be >= 4")
        if not 0.0 < self.collapse_fraction < 1.0:
            raise DomainError("collapse_fraction must lie in (0, 1)")
        if not self.max_stretch_factor > 1.0:
            raise DomainError("max_stretch_factor must exceed 1")

    def with_overrides(self, **overrides):
        """Copy with the non-None overrides applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


DEFAULT_SETTINGS = SolverSettings()


@dataclass(frozen=True)
class BoundaryConditions:
    """Wall tractions: atmospheric pressure outside, P_atm + gauge P_internal inside (Pa)."""

    P_atm: float = 0.0
    P_internal: float = 0.0

    @property
    def outer_sigma_rr(self):
        return -self.P_atm

    @property
    def inner_sigma_rr(self):
        return -self.P_atm - self.P_internal


@dataclass(frozen=True)
class SolveReport:
    """
    Outcome of one inverse or forward deformation problem.

    Profiles are tuples of (R, r, sigma_rr) and (r, p) samples from the inner
    to the outer wall. Body force and velocity are identically zero (static
    equilibrium) and exposed as constants.
    """

    pressure: float
    reference: ReferenceShell
    deformed: DeformedShell
    boundary: BoundaryConditions
    sigma_rr_profile: tuple
    hydrostatic_profile: tuple
    delta_wall_volume: float
    quadrature_error_estimate: float
    iterations: int
    pressure_R_form: float
    outer_hoop_stress: float
    mode: str = "inverse"
    target_pressure: float | None = None
    candidate_roots: tuple = field(default_factory=tuple)

    body_force = 0.0
    velocity = 0.0

    @property
    def inner_displacement(self):
        return self.deformed.r_i - self.reference.R_i

    @property
    def outer_displacement(self):
        return self.deformed.r_o - self.reference.R_o

    @property
    def dual_form_difference(self):
        return abs(self.pressure - self.pressure_R_form)

    def profile_frame(self):
        """Profiles as one DataFrame with columns R, r, sigma_rr, p."""
        frame = pd.DataFrame(list(self.sigma_rr_profile), columns=["R", "r", "sigma_rr"])
        frame["p"] = [p for _, p in self.hydrostatic_profile]
        return frame


def _inverse_radius(r, r_i, R_i):
    if r_i == R_i:
        return r
    R_cubed = r**3 - r_i**3 + R_i**3
    if np.any(R_cubed <= 0.0):
        raise DomainError(f"No reference radius for r={r} (r^3 - r_i^3 + R_i^3 <= 0)")
    return real_cbrt(R_cubed)


def pressure_integrand_r(r, r_i: float, R_i: float, m: MaterialParams):
    """
    Current-configuration integrand (sigma_thetatheta + sigma_phiphi - 2 sigma_rr) / r, Pa/m.

    2 C1 (r/R^2 - R^4/r^5) + 2 C2 (r^3/R^4 - R^2/r^3) with R^3 = r^3 - r_i^3 + R_i^3.
    """
    R = _inverse_radius(r, r_i, R_i)
    return 2.0 * m.C1 * (r / R**2 - R**4 / r**5) + 2.0 * m.C2 * (r**3 / R**4 - R**2 / r**3)


def pressure_integrand_R(R, r_i: float, R_i: float, m: MaterialParams):
    """
    Reference-configuration integrand (change of variables dr/dR = R^2/r^2), Pa/m.

    2 C1 (1/r - R^6/r^7) - 2 C2 (R^4/r^5 - r/R^2) with r^3 = R^3 + r_i^3 - R_i^3.
    """
    if np.any(np.asarray(R) < R_i):
        raise DomainError(f"Reference radius {R} below inner radius {R_i}")
    r_cubed = R**3 + r_i**3 - R_i**3
    if np.any(r_cubed <= 0.0):
        raise DomainError(f"Inner radius r_i={r_i} collapses the wall (r^3 <= 0)")
    r = real_cbrt(r_cubed)
    return 2.0 * m.C1 * (1.0 / r - R**6 / r**7) - 2.0 * m.C2 * (R**4 / r**5 - r / R**2)


def _integrate(integrand, a, b, args, settings, label):
    result = quad(
        integrand, a, b, args=args,
        epsabs=settings.quad_abs_tol, epsrel=settings.quad_rel_tol,
        limit=settings.quad_limit, full_output=1,
    )
    value, abserr, info = result[:3]
    if len(result) > 3:
        bound = max(settings.quad_abs_tol, settings.quad_rel_tol * abs(value))
        if not np.isfinite(value) or abserr > bound:
            raise QuadratureError(
                f"{label} quadrature did not converge on [{a}, {b}]: {result[3]}",
                {"value": value, "abserr": abserr, "neval": info.get("neval"), "bound": bound},
            )
        logger.debug(f"{label} quadrature flagged but within bound: {result[3]}")
    return float(value), float(abserr), int(info.get("neval", 0))


def _check_inner_radius(ref, r_i, settings):
    if not np.isfinite(r_i) or r_i < settings.collapse_margin:
        raise DomainError(
            f"Inner radius r_i={r_i} is below the collapse guard {settings.collapse_margin} m"
        )
    return deform(ref, r_i)


def _radial_stress_at(r_nodes, ref, r_i, r_o, m, settings):
    # sigma_rr(r) = -P_atm - integral_r^r_o of the r-form integrand
    sigma = np.empty(len(r_nodes))
    args = (r_i, ref.R_i, m)
    for k, r in enumerate(r_nodes):
        if r_i == ref.R_i:
            integral = 0.0
        else:
            integral, _, _ = _integrate(pressure_integrand_r, float(r), r_o, args, settings, "stress")
        sigma[k] = -settings.P_atm - integral
    return sigma


def pressure_value(ref: ReferenceShell, r_i: float, m: MaterialParams, settings: SolverSettings = DEFAULT_SETTINGS) -> float:
    """Gauge pressure P(r_i) from the r-form integral alone (no profiles, no cross-check)."""
    deformed = _check_inner_radius(ref, r_i, settings)
    if r_i == ref.R_i:
        return 0.0
    value, _, _ = _integrate(pressure_integrand_r, r_i, deformed.r_o, (r_i, ref.R_i, m), settings, "r-form")
    return value


def radial_stress_profile(ref: ReferenceShell, r_i: float, m: MaterialParams, samples: int = 64,
                          settings: SolverSettings = DEFAULT_SETTINGS) -> pd.DataFrame:
    """
    Sampled radial stress and hydrostatic pressure across the wall.

    Samples are uniform in the reference radius from R_i to R_o. The
    hydrostatic pressure is recovered pointwise from the radial normal
    stress law, p = C1 R^4/r^4 - C2 r^4/R^4 - sigma_rr.

    Returns:
        pd.DataFrame: columns R, r, sigma_rr, p, sigma_thetatheta
    """
    if samples < MIN_PROFILE_SAMPLES:
        raise DomainError(f"samples must be >= {MIN_PROFILE_SAMPLES}, got {samples}")
    deformed = _check_inner_radius(ref, r_i, settings)

    R = np.linspace(ref.R_i, ref.R_o, samples)
    r = map_radius(R, ref, r_i)
    sigma_rr = _radial_stress_at(r, ref, r_i, deformed.r_o, m, settings)
    p = radial_deviatoric(R, r, m) - sigma_rr
    sigma_hoop = -p + hoop_deviatoric(R, r, m)

    return pd.DataFrame({"R": R, "r": r, "sigma_rr": sigma_rr, "p": p, "sigma_thetatheta": sigma_hoop})


def internal_pressure(ref: ReferenceShell, r_i: float, m: MaterialParams,
                      settings: SolverSettings = DEFAULT_SETTINGS, samples: int | None = None) -> SolveReport:
    """
    Inverse kinematics: internal gauge pressure that moves the inner wall to r_i.

    Both the r-form and the R-form of the pressure integral are evaluated
    and must agree to settings.dual_form_rel_tol.

    Args:
        ref (ReferenceShell): reference configuration
        r_i (float): prescribed deformed inner radius, m
        m (MaterialParams): material moduli
        settings (SolverSettings): numerical settings
        samples (int): profile sample count (defaults to settings.profile_samples)

    Returns:
        SolveReport: pressure, deformed shell, profiles and diagnostics
    """
    samples = settings.profile_samples if samples is None else samples
    deformed = _check_inner_radius(ref, r_i, settings)
    logger.info(f"Inverse solve: R_i={ref.R_i}, R_o={ref.R_o}, r_i={r_i}")

    # Pressure integral in both configurations
    if r_i == ref.R_i:
        P_r = P_R = err_r = err_R = 0.0
        neval = 0
    else:
        args = (r_i, ref.R_i, m)
        P_r, err_r, neval = _integrate(pressure_integrand_r, r_i, deformed.r_o, args, settings, "r-form")
        P_R, err_R, _ = _integrate(pressure_integrand_R, ref.R_i, ref.R_o, args, settings, "R-form")

    # Cross-check the two forms
    scale = max(abs(P_r), PRESSURE_FLOOR)
    if abs(P_r - P_R) > settings.dual_form_rel_tol * scale:
        raise QuadratureError(
            f"Pressure integral forms disagree: r-form {P_r!r} vs R-form {P_R!r}",
            {"P_r": P_r, "P_R": P_R, "tolerance": settings.dual_form_rel_tol},
        )

    # Stress profiles and volume diagnostics
    profile = radial_stress_profile(ref, r_i, m, samples, settings)
    delta_volume = wall_volume(deformed) - wall_volume(ref)

    # Hoop stress on the outer skin from the outer traction
    boundary = BoundaryConditions(P_atm=settings.P_atm, P_internal=P_r)
    outer_hoop = (hoop_deviatoric(ref.R_o, deformed.r_o, m) - radial_deviatoric(ref.R_o, deformed.r_o, m)
                  + boundary.outer_sigma_rr)

    report = SolveReport(
        pressure=P_r,
        reference=ref,
        deformed=deformed,
        boundary=boundary,
        sigma_rr_profile=tuple(zip(profile["R"].tolist(), profile["r"].tolist(), profile["sigma_rr"].tolist())),
        hydrostatic_profile=tuple(zip(profile["r"].tolist(), profile["p"].tolist())),
        delta_wall_volume=delta_volume,
        quadrature_error_estimate=max(err_r, err_R) / scale,
        iterations=neval,
        pressure_R_form=P_R,
        outer_hoop_stress=float(outer_hoop),
    )
    logger.info(f"Inverse solve done: P={P_r:.6g} Pa, r_o={deformed.r_o:.9g} m, dV={delta_volume:.3e} m^3")
    return report


def pressure_curve(ref: ReferenceShell, m: MaterialParams, r_i_values,
                   settings: SolverSettings = DEFAULT_SETTINGS) -> pd.DataFrame:
    """Tabulate P against the inner radius; columns r_i, stretch, pressure."""
    r_i_values = np.asarray(r_i_values, dtype=float)
    pressures = [pressure_value(ref, float(x), m, settings) for x in r_i_values]
    return pd.DataFrame({"r_i": r_i_values, "stretch": r_i_values / ref.R_i, "pressure": pressures})


def forward_bracket(ref: ReferenceShell, settings: SolverSettings = DEFAULT_SETTINGS):
    """Search interval for the inner radius: collapse guard to max_stretch_factor * R_i."""
    lower = float(real_cbrt(ref.R_i**3 - settings.collapse_fraction * ref.R_i**3))
    lower = max(lower, settings.collapse_margin)
    return lower, settings.max_stretch_factor * ref.R_i


def _refine_extrema(ref, m, grid, pressures, settings):
    """Locate the interior turning points of the sampled P(r_i) curve with a bounded scalar search."""
    slope = np.sign(np.diff(pressures))
    extrema = []
    for k in range(1, len(grid) - 1):
        if slope[k - 1] == slope[k]:
            continue
        # a local maximum is a minimum of -P, a local minimum of +P
        direction = -1.0 if slope[k - 1] > 0 else 1.0
        result = minimize_scalar(
            lambda x: direction * pressure_value(ref, x, m, settings),
            bounds=(float(grid[k - 1]), float(grid[k + 1])), method="bounded",
            options={"xatol": settings.root_xtol, "maxiter": settings.root_maxiter},
        )
        x_peak = float(result.x)
        extrema.append((x_peak, pressure_value(ref, x_peak, m, settings)))
        kind = "maximum" if direction < 0 else "minimum"
        logger.debug(f"Refined pressure {kind} at r_i={x_peak:.12g} m after {result.nfev} evaluations")
    return extrema


def forward_solve(ref: ReferenceShell, P_target: float, m: MaterialParams,
                  settings: SolverSettings = DEFAULT_SETTINGS, samples: int | None = None) -> SolveReport:
    """
    Forward kinematics: inner radius reached under gauge pressure P_target.

    P(r_i) is sampled over the bracket to locate sign changes of
    P - P_target; each sub-bracket is refined with Brent's method. If the
    sampled curve is not monotone (pressure limit point) its turning points
    are refined first and added to the grid, so both branches of a limit
    point are searched separately. Every root is then reported through
    NonMonotonePressureWarning and the root on the branch through the
    reference state (closest to R_i) is returned.
    """
    logger.info(f"Forward solve: R_i={ref.R_i}, R_o={ref.R_o}, P_target={P_target}")
    # zero pressure keeps the reference shell
    if P_target == 0.0:
        report = internal_pressure(ref, ref.R_i, m, settings, samples)
        return replace(report, mode="forward", target_pressure=P_target, candidate_roots=(ref.R_i,))

    # Sample P(r_i) over the bracket, reference state included
    lower, upper = forward_bracket(ref, settings)
    grid = np.union1d(np.linspace(lower, upper, settings.bracket_samples), [ref.R_i])
    curve = pressure_curve(ref, m, grid, settings)
    pressures = curve["pressure"].to_numpy()
    logger.debug(f"Bracket sampling over [{lower:.6g}, {upper:.6g}] m, {len(grid)} points")

    # Split the grid at refined turning points of a non-monotone curve
    if np.any(np.diff(pressures) <= 0.0):
        extrema = _refine_extrema(ref, m, grid, pressures, settings)
        for x_peak, P_peak in extrema:
            logger.warning(
                f"Pressure curve is not monotone over the bracket (turning point at r_i={x_peak:.9g} m, "
                f"P={P_peak:.9g} Pa)"
            )
        if extrema:
            nodes = np.concatenate([grid, [x for x, _ in extrema]])
            values = np.concatenate([pressures, [P for _, P in extrema]])
            grid, first = np.unique(nodes, return_index=True)
            pressures = values[first]

    # Brent refinement of every sign change
    residual = pressures - P_target
    roots = []
    iterations = 0
    for k in range(len(grid) - 1):
        a, b = float(grid[k]), float(grid[k + 1])
        if residual[k] == 0.0:
            roots.append(a)
            continue
        if residual[k] * residual[k + 1] < 0.0:
            root, info = brentq(
                lambda x: pressure_value(ref, x, m, settings) - P_target, a, b,
                xtol=settings.root_xtol, rtol=4 * np.finfo(float).eps,
                maxiter=settings.root_maxiter, full_output=True,
            )
            if not info.converged:
                raise QuadratureError(f"Root finding did not converge in [{a}, {b}]", {"flag": info.flag})
            iterations += info.iterations
            roots.append(float(root))
    if residual[-1] == 0.0:
        roots.append(float(grid[-1]))

    if not roots:
        achievable = (float(pressures.min()), float(pressures.max()))
        raise NoBracketError(
            f"Target pressure {P_target} Pa outside achievable range "
            f"[{achievable[0]:.9g}, {achievable[1]:.9g}] Pa for r_i in [{lower:.6g}, {upper:.6g}] m",
            target=P_target, achievable=achievable,
        )

    # Several roots: keep the branch through the reference state
    chosen = min(roots, key=lambda x: abs(x - ref.R_i))
    if len(roots) > 1:
        message = f"Pressure {P_target} Pa is reached at {len(roots)} inner radii {roots}; using {chosen}"
        logger.warning(message)
        warnings.warn(NonMonotonePressureWarning(message, roots), stacklevel=2)

    report = internal_pressure(ref, chosen, m, settings, samples)
    logger.info(f"Forward solve done: r_i={chosen:.12g} m after {iterations} root iterations")
    return replace(report, mode="forward", target_pressure=P_target, iterations=iterations,
                   candidate_roots=tuple(roots))


def equilibrium_residual(ref: ReferenceShell, r_i: float, m: MaterialParams, grid: int = 256,
                         settings: SolverSettings = DEFAULT_SETTINGS) -> float:
    """
    Max residual of the radial equilibrium equation on a uniform grid in r, Pa/m.

    d sigma_rr/dr is taken by central differences of the solved profile and
    compared with (sigma_thetatheta + sigma_phiphi - 2 sigma_rr) / r from the
    constitutive law. The residual is second order in the grid spacing.
    """
    if grid < MIN_RESIDUAL_GRID:
        raise DomainError(f"grid must be >= {MIN_RESIDUAL_GRID}, got {grid}")
    deformed = _check_inner_radius(ref, r_i, settings)

    r = np.linspace(r_i, deformed.r_o, grid + 1)
    h = r[1] - r[0]
    sigma_rr = _radial_stress_at(r, ref, r_i, deformed.r_o, m, settings)

    interior = r[1:-1]
    R = _inverse_radius(interior, r_i, ref.R_i)
    d_sigma = (sigma_rr[2:] - sigma_rr[:-2]) / (2.0 * h)
    # sigma_thetatheta - sigma_rr does not depend on p
    hoop_minus_radial = hoop_deviatoric(R, interior, m) - radial_deviatoric(R, interior, m)
    residual = d_sigma - 2.0 * hoop_minus_radial / interior
    return float(np.max(np.abs(residual)))
