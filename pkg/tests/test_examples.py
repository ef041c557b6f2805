"""Tests for the example algebras and the discretized integration operator."""

import numpy as np
import numpy.testing as npt
import pytest

from oalab.algebra import nor_battery
from oalab.calculus import bai_sequence
from oalab.cone import in_F
from oalab.examples import example_rdr, example_two_dim, volterra
from oalab.matcore import operator_norm, spectral_radius


class TestTwoDimAlgebra:
    def test_structure(self):
        alg = example_two_dim()
        assert alg.ambient_dim == 2
        assert alg.dim == 2
        assert alg.unital
        npt.assert_allclose(alg.unit, np.eye(2), atol=1e-9)

    def test_elements_have_difference_corner(self):
        alg = example_two_dim()
        x = alg.element([0.3 - 1j, 0.7j])
        s, t = x[0, 0], x[1, 1]
        npt.assert_allclose(x[0, 1], s - t, atol=1e-12)
        npt.assert_allclose(x[1, 0], 0.0, atol=1e-12)

    def test_corner_generator_is_idempotent_inside(self):
        alg = example_two_dim()
        b = np.array([[1.0, 1.0], [0.0, 0.0]])
        npt.assert_allclose(b @ b, b, atol=1e-12)
        assert alg.contains(b @ b)

    def test_ball_conditions_pass(self):
        rep = nor_battery(example_two_dim(), trials=60, seed=1)
        assert rep.all_pass
        assert not rep.idempotent_witnesses


class TestRdrExample:
    def test_two_by_two_commutator_is_half(self):
        # R*R = [[1, 1/2], [1/2, 5/4]]; cutting the diagonal leaves the
        # antisymmetric off-diagonal block of norm exactly 1/2.
        ex = example_rdr(2)
        npt.assert_allclose(ex.min_commutator, 0.5, atol=1e-12)

    def test_gap_is_uniform_up_to_eight(self):
        for n in (3, 5, 8):
            ex = example_rdr(n)
            npt.assert_allclose(ex.min_commutator, 0.5, atol=1e-10)
            assert ex.min_commutator > 1e-6

    def test_basis_is_a_resolution_of_identity(self):
        ex = example_rdr(4)
        total = np.zeros((4, 4), dtype=complex)
        for i, b in enumerate(ex.basis):
            npt.assert_allclose(b @ b, b, atol=1e-12)
            total += b
            for j, c in enumerate(ex.basis):
                if i != j:
                    npt.assert_allclose(b @ c, 0.0, atol=1e-12)
        npt.assert_allclose(total, np.eye(4), atol=1e-12)

    def test_conjugation_data(self):
        ex = example_rdr(3)
        npt.assert_allclose(ex.r @ ex.r_inv, np.eye(3), atol=1e-12)
        npt.assert_allclose(ex.basis[0], ex.r @ np.diag([1.0, 0, 0]) @ ex.r_inv,
                            atol=1e-12)

    def test_range_limits(self):
        with pytest.raises(ValueError):
            example_rdr(1)
        with pytest.raises(ValueError):
            example_rdr(13)


class TestVolterra:
    def test_entries(self):
        v = volterra(4)
        expected = np.array(
            [
                [0.125, 0, 0, 0],
                [0.25, 0.125, 0, 0],
                [0.25, 0.25, 0.125, 0],
                [0.25, 0.25, 0.25, 0.125],
            ]
        )
        npt.assert_allclose(v, expected, atol=1e-15)

    def test_constant_function_integrates_to_midpoints(self):
        # Applying the matrix to the all-ones vector must return the grid
        # midpoints exactly: the quadrature integrates constants exactly.
        n = 37
        v = volterra(n)
        mids = (np.arange(1, n + 1) - 0.5) / n
        npt.assert_allclose((v @ np.ones(n)).real, mids, atol=1e-14)

    def test_spectral_radius_is_half_cell(self):
        for n in (10, 100):
            npt.assert_allclose(spectral_radius(volterra(n)), 1.0 / (2 * n),
                                atol=1e-12)

    def test_norm_converges_to_continuous_value(self):
        errs = [abs(operator_norm(volterra(n)) - 2.0 / np.pi) for n in (50, 200)]
        assert errs[0] < 1e-4
        # midpoint quadrature is second order: quartering the step cuts the
        # error by about sixteen
        assert errs[1] < errs[0] / 12.0
        assert abs(operator_norm(volterra(500)) - 2.0 / np.pi) < 1e-5

    def test_small_size_rejected(self):
        with pytest.raises(ValueError):
            volterra(1)

    def test_resolvent_normalization_yields_quasinilpotent_bai_elements(self):
        # No positive multiple of the matrix lies in the unit-shifted cone
        # (its Hermitian part is rank one), but the resolvent V(1+V)^{-1}
        # does, stays inside the generated algebra, and its averaged
        # approximate-identity elements keep tiny spectral radius.
        n = 100
        v = volterra(n)
        u = np.linalg.solve(np.eye(n) + v, v)
        assert not in_F(v / operator_norm(v))
        assert in_F(u)
        npt.assert_allclose(spectral_radius(u), 1.0 / (2 * n + 1), atol=1e-12)
        for e in bai_sequence(u, 4):
            assert spectral_radius(e) < 2.0 / n
