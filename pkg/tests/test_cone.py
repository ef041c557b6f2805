import numpy as np
import pytest

from oalab.cone import (
    ConeReport,
    accretive,
    cone_constant,
    cone_report,
    in_F,
    in_halfF,
    strictly_real_positive,
)
from oalab.sampling import (
    random_cone_element,
    random_half_cone_element,
    random_strict_cone_element,
)


def test_identity_memberships():
    i2 = np.eye(2)
    assert in_F(i2)
    assert in_halfF(i2)  # ||1 - 2*1|| = 1, boundary
    assert accretive(i2)
    assert strictly_real_positive(i2)


def test_zero_matrix_is_boundary_member():
    z = np.zeros((3, 3))
    assert in_F(z)
    assert not strictly_real_positive(z)
    assert cone_constant(z) is None


def test_upper_triangular_unit_example():
    x = np.array([[1.0, 1.0], [0.0, 1.0]])
    assert in_F(x)  # ||1 - x|| = ||E12|| = 1
    assert not in_halfF(x)


def test_two_times_identity_boundary():
    assert in_F(2.0 * np.eye(4))
    assert not in_F(2.0000001 * np.eye(4))


def test_clear_nonmember():
    assert not in_F(np.diag([3.0, 1.0]))
    assert not in_F(np.array([[0.0, 2.0], [0.0, 0.0]]))


def test_strictly_real_positive_requires_membership():
    with pytest.raises(ValueError):
        strictly_real_positive(np.diag([5.0, 5.0]))


def test_cone_constant_identity_is_two():
    # x + x* = 2I, x*x = I: largest C with 2I >= C I is 2
    assert cone_constant(np.eye(3)) == pytest.approx(2.0, abs=1e-6)


def test_cone_constant_scaling():
    # x = tI: 2t >= C t^2 -> C = 2/t
    for t in (0.5, 2.0):
        assert cone_constant(t * np.eye(2)) == pytest.approx(2.0 / t, rel=1e-6)


def test_cone_constant_none_when_not_accretive():
    assert cone_constant(np.array([[0.0, 0.0], [2.0, 0.0]])) is None
    assert cone_constant(-np.eye(2)) is None


def test_random_cone_elements_are_members():
    rng = np.random.default_rng(21)
    for _ in range(50):
        dim = int(rng.integers(1, 7))
        x = random_cone_element(rng, dim)
        assert in_F(x)
        # scaling into [0, 1] keeps membership (convexity with 0)
        assert in_F(rng.uniform(0.0, 1.0) * x)


def test_half_cone_implies_cone():
    rng = np.random.default_rng(22)
    for _ in range(50):
        x = random_half_cone_element(rng, int(rng.integers(1, 7)))
        assert in_halfF(x)
        assert in_F(x)


def test_convex_combinations_stay_in_cone():
    rng = np.random.default_rng(23)
    for _ in range(25):
        dim = int(rng.integers(2, 6))
        x, y = random_cone_element(rng, dim), random_cone_element(rng, dim)
        t = rng.uniform()
        assert in_F(t * x + (1 - t) * y)


def test_strict_elements_have_cone_constant_certificate():
    rng = np.random.default_rng(24)
    for _ in range(25):
        dim = int(rng.integers(1, 6))
        x = random_strict_cone_element(rng, dim)
        assert strictly_real_positive(x)
        assert accretive(x)
        c = cone_constant(x)
        assert c is not None and c > 0
        # maximality: slightly larger constants break positivity
        h = x + x.conj().T - (c * 1.01 + 1e-6) * (x.conj().T @ x)
        assert np.linalg.eigvalsh((h + h.conj().T) / 2)[0] < 0


def test_cone_report_fields_and_json():
    report = cone_report(np.eye(2))
    assert isinstance(report, ConeReport)
    payload = report.to_json()
    assert set(payload) == {
        "in_F",
        "in_halfF",
        "accretive",
        "strictly_real_positive",
        "best_cone_constant",
    }
    assert payload["in_F"] is True
    assert payload["best_cone_constant"] == pytest.approx(2.0, abs=1e-6)


def test_cone_report_nonmember_disables_strict_flag():
    report = cone_report(np.diag([4.0, 4.0]))
    assert not report.in_F
    assert not report.strictly_real_positive
    # 4I is accretive and has cone constant 1/2
    assert report.accretive
    assert report.best_cone_constant == pytest.approx(0.5, rel=1e-6)
