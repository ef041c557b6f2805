"""Tests for numerical-range sampling, wedges, and the two-norm rank test."""

import numpy as np
import numpy.testing as npt
import pytest

from oalab.calculus import root_cai
from oalab.matcore import CrossCheckError, operator_norm
from oalab.sampling import (
    ginibre,
    haar_unitary,
    random_cone_element,
    random_singular_cone_element,
    random_strict_cone_element,
)
from oalab.spectral import (
    NumericalRangeSample,
    numerical_radius,
    numerical_range,
    sharp_neumann,
    wedge_membership,
)


class TestNumericalRange:
    def test_hermitian_range_is_real_segment(self):
        x = np.diag([-1.0, 0.25, 2.0]).astype(np.complex128)
        sample = numerical_range(x, theta_count=360)
        npt.assert_allclose(sample.boundary_points.imag, 0.0, atol=1e-10)
        assert np.all(sample.boundary_points.real >= -1.0 - 1e-10)
        assert np.all(sample.boundary_points.real <= 2.0 + 1e-10)
        npt.assert_allclose(sample.radius, 2.0, atol=1e-12)

    def test_nilpotent_two_by_two_is_centered_disk(self):
        # For [[0, 2a], [0, 0]] the numerical range is the disk of radius a
        # centered at the origin, so every support value equals a.
        a = 0.7
        x = np.array([[0.0, 2 * a], [0.0, 0.0]], dtype=np.complex128)
        sample = numerical_range(x, theta_count=256)
        npt.assert_allclose(sample.support_values, a, atol=1e-10)
        npt.assert_allclose(np.abs(sample.boundary_points), a, atol=1e-10)
        npt.assert_allclose(sample.radius, a, atol=1e-10)

    def test_normal_matrix_radius_matches_spectral_radius(self):
        rng = np.random.default_rng(7)
        for _ in range(8):
            n = int(rng.integers(2, 6))
            lams = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            u = haar_unitary(rng, n)
            x = u @ np.diag(lams) @ u.conj().T
            sample = numerical_range(x, theta_count=1440)
            # For a normal matrix the range is the convex hull of the
            # eigenvalues, so the numerical radius is max |lambda|.
            npt.assert_allclose(sample.radius, np.max(np.abs(lams)), rtol=1e-4)

    def test_radius_norm_sandwich(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            x = ginibre(rng, int(rng.integers(2, 7)))
            nu = numerical_radius(x, theta_count=720)
            nrm = operator_norm(x)
            assert nu <= nrm + 1e-9
            assert nrm <= 2.0 * nu + 1e-9

    def test_rejects_tiny_sweep(self):
        with pytest.raises(ValueError):
            numerical_range(np.eye(2), theta_count=4)

    def test_json_roundtrip(self):
        x = np.array([[0.5, 0.3j], [0.0, 0.2]], dtype=np.complex128)
        sample = numerical_range(x, theta_count=64)
        back = NumericalRangeSample.from_json(sample.to_json())
        assert back.theta_count == sample.theta_count
        npt.assert_allclose(back.boundary_points, sample.boundary_points)
        npt.assert_allclose(back.support_values, sample.support_values)
        npt.assert_allclose(back.radius, sample.radius)


class TestWedgeMembership:
    def test_positive_diagonal_sits_on_axis(self):
        x = np.diag([0.1, 0.6, 1.0]).astype(np.complex128)
        report = wedge_membership(x, rho=0.01)
        assert report.inside
        assert report.max_angle <= 1e-8
        assert report.max_disk_defect == 0.0

    def test_rotated_positive_matrix_needs_matching_angle(self):
        phi = 0.3
        x = np.exp(1j * phi) * np.diag([0.2, 0.5]).astype(np.complex128)
        tight = wedge_membership(x, rho=phi / 2)
        assert not tight.inside
        npt.assert_allclose(tight.max_angle, phi, atol=1e-8)
        loose = wedge_membership(x, rho=phi + 0.01)
        assert loose.inside

    def test_disk_condition_can_fail_alone(self):
        # 2I has angle zero but lies outside |z - 1/2| <= 1/2.
        report = wedge_membership(2.0 * np.eye(2), rho=0.5)
        assert not report.inside
        npt.assert_allclose(report.max_disk_defect, 1.0, atol=1e-10)

    def test_zero_matrix_is_at_the_tip(self):
        report = wedge_membership(np.zeros((3, 3)), rho=0.0)
        assert report.inside
        assert report.max_angle == 0.0

    def test_rho_out_of_range(self):
        with pytest.raises(ValueError):
            wedge_membership(np.eye(2), rho=-0.1)

    def test_root_sequence_shrinks_into_narrow_wedges(self):
        # Roots u_k = (x/2)^(1/k) of an element with ||1 - x|| <= 1 have
        # numerical range inside the wedge of half-angle pi/(2k), and the
        # opening shrinks monotonically as k grows.
        rng = np.random.default_rng(42)
        grid_slack = 2.0 * np.pi / 720 + 1e-6
        for _ in range(12):
            x = random_cone_element(rng, int(rng.integers(2, 7)))
            roots = root_cai(x, n_max=5)
            prev_angle = np.pi
            for k, u in enumerate(roots, start=1):
                report = wedge_membership(u, rho=np.pi / (2 * k))
                assert report.inside, (
                    f"k={k}: max angle {report.max_angle:.4f} exceeds "
                    f"{np.pi / (2 * k):.4f}"
                )
                assert report.max_angle <= prev_angle + grid_slack
                prev_angle = report.max_angle


class TestSharpNeumann:
    def test_identity_is_invertible(self):
        res = sharp_neumann(np.eye(3))
        assert not res.singular
        npt.assert_allclose(res.norm_one_minus, 0.0, atol=1e-12)
        npt.assert_allclose(res.norm_one_minus_half, 0.5, atol=1e-12)

    def test_exactly_singular_element_hits_both_norms(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            x = random_singular_cone_element(rng, int(rng.integers(2, 7)))
            res = sharp_neumann(x)
            assert res.singular
            npt.assert_allclose(res.norm_one_minus, 1.0, atol=1e-9)
            npt.assert_allclose(res.norm_one_minus_half, 1.0, atol=1e-9)
            assert res.sigma_min <= 1e-8

    def test_strict_elements_are_invertible(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            x = random_strict_cone_element(rng, int(rng.integers(2, 7)))
            res = sharp_neumann(x)
            assert not res.singular
            assert res.norm_one_minus_half < 1.0 - 1e-6

    def test_precondition_is_enforced(self):
        with pytest.raises(ValueError):
            sharp_neumann(-np.eye(2))

    def test_route_disagreement_is_loud(self):
        # sigma_min = 2e-7 is large enough for the rank oracle to call the
        # matrix invertible, yet both norms sit within iter_tol of 1, so the
        # norm route calls it singular; the conflict must surface.
        t = np.diag([2e-7, 1.0]).astype(np.complex128)
        with pytest.raises(CrossCheckError):
            sharp_neumann(t)

    def test_json_fields(self):
        import json

        res = sharp_neumann(np.eye(2))
        payload = json.loads(res.to_json())
        assert set(payload) == {
            "singular",
            "norm_one_minus",
            "norm_one_minus_half",
            "sigma_min",
        }
