import math

import numpy as np
import pytest

from iab_errors import DomainError
from iab_geometry import (DeformedShell, MaterialParams, ReferenceShell, StretchState, cauchy_green_tensors, deform,
                          deformation_gradient, map_radius, real_cbrt, stretches, wall_volume)


class TestShellTypes:
    @pytest.mark.parametrize("R_i, R_o", [(0.03, 0.03), (0.03, 0.02), (0.0, 0.03), (-0.01, 0.03), (math.nan, 0.03)])
    def test_reference_shell_rejects_degenerate_radii(self, R_i, R_o):
        with pytest.raises(DomainError):
            ReferenceShell(R_i, R_o)

    def test_deformed_shell_rejects_inverted_radii(self):
        with pytest.raises(DomainError):
            DeformedShell(r_i=0.033, r_o=0.03)

    def test_thickness(self, expansion_shell):
        assert expansion_shell.thickness == pytest.approx(0.003)

    def test_material_allows_neo_hookean(self):
        assert MaterialParams(C1=1.0e4, C2=0.0).C2 == 0.0

    @pytest.mark.parametrize("kwargs", [
        {"C1": 0.0, "C2": 1.0},
        {"C1": 1.0, "C2": -1.0},
        {"C1": 1.0, "C2": 1.0, "poisson": 0.5},
        {"C1": 1.0, "C2": 1.0, "density": 0.0},
    ])
    def test_material_validation(self, kwargs):
        with pytest.raises(DomainError):
            MaterialParams(**kwargs)

    def test_scaled_material(self, material):
        doubled = material.scaled(2.0)
        assert (doubled.C1, doubled.C2) == (2.2e4, 4.4e4)
        assert doubled.density == material.density


class TestMapRadius:
    def test_inner_radius_maps_exactly(self, expansion_shell):
        assert map_radius(0.027, expansion_shell, 0.03) == 0.03

    def test_interior_point(self, expansion_shell):
        expected = (0.0285**3 + 0.03**3 - 0.027**3) ** (1.0 / 3.0)
        assert map_radius(0.0285, expansion_shell, 0.03) == pytest.approx(expected, rel=1e-14)

    def test_expansion_outer_radius(self, expansion_shell):
        deformed = deform(expansion_shell, 0.03)
        assert deformed.r_o == pytest.approx(np.cbrt(0.03**3 + 0.03**3 - 0.027**3), rel=1e-12)
        assert abs(deformed.r_o - 0.033) < 1e-3

    def test_identity_when_undeformed(self, expansion_shell):
        R = np.linspace(0.027, 0.03, 11)
        np.testing.assert_array_equal(map_radius(R, expansion_shell, 0.027), R)

    def test_monotone_in_reference_radius(self, compression_shell):
        R = np.linspace(compression_shell.R_i, compression_shell.R_o, 200)
        r = map_radius(R, compression_shell, 0.028)
        assert np.all(np.diff(r) > 0)

    @pytest.mark.parametrize("R", [0.026, 0.031])
    def test_rejects_radius_outside_wall(self, expansion_shell, R):
        with pytest.raises(DomainError):
            map_radius(R, expansion_shell, 0.03)

    @pytest.mark.parametrize("r_i", [0.0, -0.01])
    def test_rejects_non_positive_inner_radius(self, expansion_shell, r_i):
        with pytest.raises(DomainError):
            map_radius(0.0285, expansion_shell, r_i)

    def test_real_cbrt_is_sign_preserving(self):
        assert real_cbrt(-8.0) == pytest.approx(-2.0)
        np.testing.assert_allclose(real_cbrt(np.array([-27.0, 27.0])), [-3.0, 3.0])


class TestStretches:
    def test_expansion_inner_wall(self):
        s = stretches(0.027, 0.03)
        assert s.lambda_r == pytest.approx(0.81, rel=1e-14)
        assert s.lambda_theta == s.lambda_phi == pytest.approx(10.0 / 9.0, rel=1e-14)
        assert s.lambda_r * s.lambda_theta * s.lambda_phi == pytest.approx(1.0, abs=1e-12)

    def test_invariants_match_cauchy_green_traces(self):
        s = stretches(0.028, 0.0315)
        C, B = cauchy_green_tensors(s)
        np.testing.assert_array_equal(C, B)
        assert np.trace(C) == pytest.approx(s.I1, rel=1e-14)
        assert np.trace(np.linalg.inv(C)) == pytest.approx(s.I2, rel=1e-12)

    def test_reference_state_invariants(self):
        s = stretches(0.03, 0.03)
        assert (s.I1, s.I2) == (3.0, 3.0)

    @pytest.mark.parametrize("hoop", [np.linspace(1.0, 1.8, 17), np.linspace(1.0, 0.6, 17)])
    def test_invariants_grow_away_from_reference(self, hoop):
        states = [stretches(1.0, lam) for lam in hoop]
        I1 = np.array([s.I1 for s in states])
        I2 = np.array([s.I2 for s in states])
        assert I1[0] == I2[0] == 3.0
        assert np.all(np.diff(I1) > 0)
        assert np.all(np.diff(I2) > 0)

    def test_invariant_product_bound(self):
        rng = np.random.default_rng(7)
        for R, r in rng.uniform(0.01, 0.05, size=(500, 2)):
            s = stretches(R, r)
            assert s.I1 * s.I2 >= 9.0 - 1e-9

    def test_deformation_gradient_is_isochoric(self):
        F = deformation_gradient(StretchState.from_hoop_stretch(1.37))
        assert np.allclose(F, np.diag(np.diag(F)))
        assert np.linalg.det(F) == pytest.approx(1.0, abs=1e-12)

    def test_stretch_state_rejects_compressible_values(self):
        with pytest.raises(DomainError):
            StretchState(lambda_r=1.0, lambda_theta=1.1, lambda_phi=1.1, I1=3.0, I2=3.0)

    def test_rejects_non_positive_radii(self):
        with pytest.raises(DomainError):
            stretches(0.0, 0.03)


class TestWallVolume:
    def test_reference_volume(self, expansion_shell):
        assert wall_volume(expansion_shell) == pytest.approx(4.0 / 3.0 * math.pi * (2.7e-5 - 1.9683e-5), rel=1e-12)
        assert wall_volume(expansion_shell) == pytest.approx(3.0645e-5, rel=1e-3)

    @pytest.mark.parametrize("r_i", [0.02, 0.026, 0.03, 0.035])
    def test_volume_preserved_by_radius_map(self, expansion_shell, r_i):
        deformed = deform(expansion_shell, r_i)
        assert wall_volume(deformed) == pytest.approx(wall_volume(expansion_shell), rel=1e-13)
