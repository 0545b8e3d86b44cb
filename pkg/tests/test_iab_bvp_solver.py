import numpy as np
import pytest

from iab_bvp_solver import (BoundaryConditions, SolverSettings, equilibrium_residual, forward_bracket, forward_solve,
                            internal_pressure, pressure_curve, pressure_integrand_r, pressure_integrand_R,
                            pressure_value, radial_stress_profile)
from iab_errors import DomainError, NoBracketError, NonMonotonePressureWarning, QuadratureError
from iab_geometry import MaterialParams, ReferenceShell, map_radius


@pytest.fixture
def expansion_report(expansion_shell, material):
    return internal_pressure(expansion_shell, 0.03, material)


@pytest.fixture
def compression_report(compression_shell, material):
    return internal_pressure(compression_shell, 0.028, material)


class TestIntegrands:
    def test_current_form_at_inner_wall(self, material):
        expected = (2 * 1.1e4 * (0.03 / 0.027**2 - 0.027**4 / 0.03**5)
                    + 2 * 2.2e4 * (0.03**3 / 0.027**4 - 0.027**2 / 0.03**3))
        assert pressure_integrand_r(0.03, 0.03, 0.027, material) == pytest.approx(expected, rel=1e-13)

    def test_reference_form_is_change_of_variables(self, material):
        current = pressure_integrand_r(0.03, 0.03, 0.027, material)
        reference = pressure_integrand_R(0.027, 0.03, 0.027, material)
        assert reference == pytest.approx(current * 0.027**2 / 0.03**2, rel=1e-13)

    def test_positive_across_expanding_wall(self, expansion_shell, material):
        R = np.linspace(expansion_shell.R_i, expansion_shell.R_o, 101)
        r = map_radius(R, expansion_shell, 0.03)
        assert np.all(pressure_integrand_r(r, 0.03, 0.027, material) > 0)

    def test_reference_form_rejects_radius_below_wall(self, material):
        with pytest.raises(DomainError):
            pressure_integrand_R(0.02, 0.03, 0.027, material)


class TestInternalPressure:
    def test_expansion_needs_positive_pressure(self, expansion_report):
        assert expansion_report.pressure > 0
        assert expansion_report.deformed.r_o == pytest.approx(np.cbrt(0.03**3 + 0.03**3 - 0.027**3), rel=1e-12)

    def test_compression_draws_air_out(self, compression_report):
        assert compression_report.pressure < 0
        assert compression_report.deformed.r_o < 0.033

    def test_undeformed_shell_is_unloaded(self, expansion_shell, material):
        report = internal_pressure(expansion_shell, 0.027, material)
        assert report.pressure == 0.0
        assert report.pressure_R_form == 0.0
        assert all(sigma == 0.0 for _, _, sigma in report.sigma_rr_profile)
        assert report.inner_displacement == 0.0

    def test_dual_forms_agree(self, expansion_report, compression_report):
        for report in (expansion_report, compression_report):
            assert report.dual_form_difference <= 1e-8 * max(abs(report.pressure), 1.0)

    def test_boundary_conditions(self, expansion_report):
        P = expansion_report.pressure
        inner, outer = expansion_report.sigma_rr_profile[0], expansion_report.sigma_rr_profile[-1]
        assert inner[2] == pytest.approx(-P, abs=1e-9 * abs(P))
        assert abs(outer[2]) <= 1e-9 * abs(P)
        assert expansion_report.boundary == BoundaryConditions(P_atm=0.0, P_internal=P)

    def test_atmospheric_pressure_shifts_tractions(self, expansion_shell, material):
        report = internal_pressure(expansion_shell, 0.03, material, SolverSettings(P_atm=101325.0))
        assert report.sigma_rr_profile[-1][2] == pytest.approx(-101325.0, abs=1e-6)
        assert report.sigma_rr_profile[0][2] == pytest.approx(-101325.0 - report.pressure, rel=1e-9)
        assert report.boundary.inner_sigma_rr == -101325.0 - report.pressure

    def test_wall_volume_is_preserved(self, expansion_report, compression_report):
        assert abs(expansion_report.delta_wall_volume) < 1e-12
        assert abs(compression_report.delta_wall_volume) < 1e-12

    def test_report_diagnostics(self, expansion_report):
        assert expansion_report.mode == "inverse"
        assert expansion_report.iterations > 0
        assert expansion_report.quadrature_error_estimate < 1e-9
        assert expansion_report.outer_displacement == pytest.approx(expansion_report.deformed.r_o - 0.03)
        assert expansion_report.body_force == 0.0 and expansion_report.velocity == 0.0
        assert len(expansion_report.sigma_rr_profile) == 64

    def test_outer_hoop_stress_is_tensile_under_inflation(self, expansion_report):
        assert expansion_report.outer_hoop_stress > 0

    def test_profile_frame_columns(self, expansion_report):
        frame = expansion_report.profile_frame()
        assert list(frame.columns) == ["R", "r", "sigma_rr", "p"]
        assert frame["R"].iloc[0] == 0.027 and frame["r"].iloc[0] == 0.03

    def test_collapse_guard(self, expansion_shell, material):
        with pytest.raises(DomainError):
            internal_pressure(expansion_shell, 1e-12, material)

    def test_non_converging_quadrature_raises(self, expansion_shell, material):
        strict = SolverSettings(quad_abs_tol=1e-300, quad_rel_tol=1e-300, quad_limit=1)
        with pytest.raises(QuadratureError) as excinfo:
            internal_pressure(expansion_shell, 0.03, material, strict)
        assert "abserr" in excinfo.value.diagnostics

    def test_neo_hookean_inflation(self, expansion_shell):
        report = internal_pressure(expansion_shell, 0.03, MaterialParams(C1=1.1e4, C2=0.0))
        assert report.pressure > 0


class TestRadialStressProfile:
    def test_hydrostatic_pressure_inverts_radial_stress(self, expansion_shell, material):
        frame = radial_stress_profile(expansion_shell, 0.03, material, samples=9)
        expected = material.C1 * (frame["R"] / frame["r"]) ** 4 - material.C2 * (frame["r"] / frame["R"]) ** 4 - frame["sigma_rr"]
        np.testing.assert_allclose(frame["p"], expected, rtol=1e-12)

    def test_radial_stress_rises_towards_outer_wall_under_inflation(self, expansion_shell, material):
        frame = radial_stress_profile(expansion_shell, 0.03, material, samples=17)
        assert np.all(np.diff(frame["sigma_rr"]) > 0)

    def test_undeformed_profile_carries_reference_pressure(self, expansion_shell, material):
        frame = radial_stress_profile(expansion_shell, 0.027, material, samples=9)
        np.testing.assert_allclose(frame["p"], material.C1 - material.C2, rtol=1e-15)
        np.testing.assert_array_equal(frame["sigma_thetatheta"], 0.0)

    def test_samples_are_validated(self, expansion_shell, material):
        with pytest.raises(DomainError):
            radial_stress_profile(expansion_shell, 0.03, material, samples=1)


class TestForwardSolve:
    def test_round_trip_expansion(self, expansion_shell, material, expansion_report):
        report = forward_solve(expansion_shell, expansion_report.pressure, material)
        assert report.deformed.r_i == pytest.approx(0.03, abs=1e-9)
        assert report.mode == "forward"
        assert report.target_pressure == expansion_report.pressure
        assert abs(report.pressure - expansion_report.pressure) <= abs(expansion_report.pressure) * 1e-9 + 1e-12

    def test_negative_target_contracts(self, compression_shell, material, compression_report):
        report = forward_solve(compression_shell, compression_report.pressure, material)
        assert report.deformed.r_i < compression_shell.R_i
        assert report.deformed.r_i == pytest.approx(0.028, abs=1e-9)

    def test_zero_target_is_identity(self, expansion_shell, material):
        report = forward_solve(expansion_shell, 0.0, material)
        assert report.deformed.r_i == expansion_shell.R_i
        assert report.deformed.r_o == expansion_shell.R_o
        assert report.pressure == 0.0

    def test_unreachable_target(self, expansion_shell, material):
        with pytest.raises(NoBracketError) as excinfo:
            forward_solve(expansion_shell, 1e9, material)
        low, high = excinfo.value.achievable
        assert low < 0 < high < 1e9

    def test_limit_point_reports_every_root(self):
        shell = ReferenceShell(R_i=0.03, R_o=0.0305)
        neo_hookean = MaterialParams(C1=1.0e4, C2=0.0)
        target = pressure_value(shell, 1.2 * 0.03, neo_hookean)
        with pytest.warns(NonMonotonePressureWarning) as record:
            report = forward_solve(shell, target, neo_hookean)
        assert report.deformed.r_i == pytest.approx(0.036, abs=1e-9)
        assert len(report.candidate_roots) == 2
        assert max(report.candidate_roots) > 1.38 * 0.03
        warned = [w.message for w in record if issubclass(w.category, NonMonotonePressureWarning)]
        assert warned[0].candidate_roots == report.candidate_roots

    def test_target_just_below_limit_point_finds_both_branches(self):
        shell = ReferenceShell(R_i=0.03, R_o=0.0305)
        neo_hookean = MaterialParams(C1=1.0e4, C2=0.0)
        near_peak = pressure_curve(shell, neo_hookean, np.linspace(0.0410, 0.0424, 141))
        peak = near_peak.loc[near_peak["pressure"].idxmax()]
        target = peak["pressure"] * (1.0 - 1e-5)
        with pytest.warns(NonMonotonePressureWarning):
            report = forward_solve(shell, target, neo_hookean)
        low, high = report.candidate_roots
        assert low < peak["r_i"] < high
        assert report.deformed.r_i == low
        for root in (low, high):
            assert pressure_value(shell, root, neo_hookean) == pytest.approx(target, rel=1e-9)

    def test_unreachable_target_reports_refined_peak(self):
        shell = ReferenceShell(R_i=0.03, R_o=0.0305)
        neo_hookean = MaterialParams(C1=1.0e4, C2=0.0)
        near_peak = pressure_curve(shell, neo_hookean, np.linspace(0.0410, 0.0424, 141))
        peak_pressure = near_peak["pressure"].max()
        with pytest.raises(NoBracketError) as excinfo:
            forward_solve(shell, peak_pressure * 1.001, neo_hookean)
        assert excinfo.value.achievable[1] == pytest.approx(peak_pressure, rel=1e-6)

    def test_bracket(self, expansion_shell):
        lower, upper = forward_bracket(expansion_shell)
        assert lower == pytest.approx(0.1 * 0.027, rel=1e-9)
        assert upper == pytest.approx(0.054)


class TestPressureCurve:
    def test_curve_passes_through_reference_state(self, expansion_shell, material):
        curve = pressure_curve(expansion_shell, material, [0.025, 0.027, 0.03])
        assert list(curve.columns) == ["r_i", "stretch", "pressure"]
        assert curve["pressure"].iloc[1] == 0.0
        assert curve["pressure"].iloc[0] < 0 < curve["pressure"].iloc[2]
        assert curve["stretch"].iloc[2] == pytest.approx(0.03 / 0.027)


class TestEquilibriumResidual:
    @pytest.mark.parametrize("scenario", ["expansion", "compression"])
    def test_second_order_convergence(self, request, material, scenario):
        shell = request.getfixturevalue(f"{scenario}_shell")
        r_i = 0.03 if scenario == "expansion" else 0.028
        coarse = equilibrium_residual(shell, r_i, material, grid=32)
        fine = equilibrium_residual(shell, r_i, material, grid=64)
        assert 3.5 <= coarse / fine <= 4.5

    def test_residual_is_small(self, expansion_shell, material):
        r = np.linspace(0.03, np.cbrt(0.03**3 + 0.03**3 - 0.027**3), 257)
        scale = np.max(np.abs(pressure_integrand_r(r, 0.03, 0.027, material)))
        assert equilibrium_residual(expansion_shell, 0.03, material, grid=256) < 1e-3 * scale

    def test_undeformed_shell_is_in_equilibrium(self, expansion_shell, material):
        assert equilibrium_residual(expansion_shell, 0.027, material, grid=32) == 0.0

    def test_grid_is_validated(self, expansion_shell, material):
        with pytest.raises(DomainError):
            equilibrium_residual(expansion_shell, 0.03, material, grid=4)


class TestSolverSettings:
    def test_overrides_skip_none(self):
        settings = SolverSettings().with_overrides(quad_rel_tol=None, P_atm=10.0)
        assert settings.quad_rel_tol == 1e-10
        assert settings.P_atm == 10.0

    @pytest.mark.parametrize("kwargs", [{"quad_rel_tol": 0.0}, {"profile_samples": 1}, {"max_stretch_factor": 1.0}])
    def test_invalid_settings(self, kwargs):
        with pytest.raises(DomainError):
            SolverSettings(**kwargs)
