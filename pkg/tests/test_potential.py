"""Potential jets, validity checks, Legendre duality and the perturbation transport."""

import math

import numpy as np
import pytest

from toric.errors import BoundaryPoint, NoConvergence, OutsidePolytope
from toric.models.correction import (
    CorrectionTerm,
    PolynomialCorrection,
    RidgeProfile,
    ZeroCorrection,
    calabi_blowup_correction,
    calabi_blowup_profile,
)
from toric.models.potential import LegendreField, SymplecticPotential
from toric.services.polytope_service import polytope_service
from toric.services.potential_service import potential_service
from toric.utils.sampling import SamplingConfig

FAST = SamplingConfig(grid_points=4, sobol_points=8, k_min=4, k_max=20)


def _fd_check(field, x, order, h=1e-5):
    """Central differences of the (order-1) tensor against the order tensor"""
    analytic = field.jet(x, order).tensor(order)
    fd = np.empty_like(analytic)
    for i in range(len(x)):
        e = np.zeros(len(x))
        e[i] = h
        plus = np.asarray(field.jet(x + e, order - 1).tensor(order - 1))
        minus = np.asarray(field.jet(x - e, order - 1).tensor(order - 1))
        fd[(Ellipsis, i)] = (plus - minus) / (2 * h)
    return float(np.abs(fd - analytic).max() / (1.0 + np.abs(analytic).max()))


class _Jets:
    """Adapter so potentials share the field jet signature"""

    def __init__(self, g):
        self.g = g

    def jet(self, x, order):
        return potential_service.eval_jet(self.g, x, order)


def test_canonical_potential_values(interval, triangle):
    g = potential_service.canonical_potential(interval)
    assert g.is_canonical
    assert potential_service.eval_jet(g, [0.0], 0).value == pytest.approx(0.0, abs=1e-15)
    expected = 0.5 * (1.5 * math.log(1.5) + 0.5 * math.log(0.5))
    assert potential_service.eval_jet(g, [0.5], 0).value == pytest.approx(expected, rel=1e-14)
    assert potential_service.eval_jet(g, [0.0], 2).hessian[0, 0] == pytest.approx(1.0)
    assert potential_service.eval_jet(g, [0.3], 2).hessian[0, 0] == pytest.approx(1 / (1 - 0.09))

    G = potential_service.eval_jet(potential_service.canonical_potential(triangle), [0.0, 0.0], 2).hessian
    np.testing.assert_allclose(G, 0.5 * np.array([[2.0, 1.0], [1.0, 2.0]]), atol=1e-14)


def test_jet_tensors_are_symmetric(blowup, sample_points):
    g = potential_service.add_correction(potential_service.canonical_potential(blowup), calabi_blowup_correction())
    for x in sample_points(blowup, 10):
        jet = potential_service.eval_jet(g, x, 4)
        np.testing.assert_allclose(jet.hessian, jet.hessian.T, atol=1e-12)
        np.testing.assert_allclose(jet.third, jet.third.transpose(1, 0, 2), atol=1e-10)
        np.testing.assert_allclose(jet.third, jet.third.transpose(0, 2, 1), atol=1e-10)
        np.testing.assert_allclose(jet.fourth, jet.fourth.transpose(0, 1, 3, 2), atol=1e-8)
        np.testing.assert_allclose(jet.fourth, jet.fourth.transpose(2, 3, 0, 1), atol=1e-8)


def test_jets_match_finite_differences(fixture_polytopes, sample_points):
    for P in fixture_polytopes.values():
        field = _Jets(potential_service.canonical_potential(P))
        for x in sample_points(P, 100, margin=0.1):
            for order in (1, 2, 3, 4):
                assert _fd_check(field, x, order) <= 1e-5


def test_correction_jets_match_finite_differences(blowup, sample_points):
    polynomial = PolynomialCorrection(2, (((2, 0), 0.3), ((1, 2), -0.2), ((0, 4), 0.05), ((3, 1), 0.1)))
    for correction in (calabi_blowup_correction(), polynomial):
        for x in sample_points(blowup, 20, margin=0.1):
            for order in (1, 2, 3, 4):
                assert _fd_check(correction, x, order) <= 1e-5


def test_ridge_profile_normalization():
    profile = calabi_blowup_profile()
    d = profile.derivatives(0.0)
    assert d[0] == pytest.approx(0.0, abs=1e-14)
    assert d[1] == pytest.approx(0.0, abs=1e-14)
    for t in (-0.9, 0.0, 0.7):
        expected = 2 / (t * t + 11 * t + 21) - 1 / (t + 2)
        assert profile.derivatives(t)[2] == pytest.approx(expected, rel=1e-12)


def test_ridge_profile_rejects_pole_at_origin():
    with pytest.raises(ValueError):
        RidgeProfile(coeffs=(1.0,), poles=(0.0,))


def test_eval_jet_rejects_boundary_and_outside(interval):
    g = potential_service.canonical_potential(interval)
    with pytest.raises(BoundaryPoint):
        potential_service.eval_jet(g, [1.0], 2)
    with pytest.raises(OutsidePolytope):
        potential_service.eval_jet(g, [1.5], 2)
    with pytest.raises(ValueError):
        potential_service.eval_jet(g, [0.0], 5)


def test_eval_jet_fills_requested_order_only(triangle):
    jet = potential_service.eval_jet(potential_service.canonical_potential(triangle), [0.1, 0.2], 2)
    assert jet.hessian is not None
    assert jet.third is None
    assert jet.fourth is None


def test_zero_correction_leaves_jets_unchanged(triangle):
    g = potential_service.canonical_potential(triangle)
    same = potential_service.add_correction(g, ZeroCorrection())
    assert same.label == g.label
    a = potential_service.eval_jet(g, [0.2, -0.4], 4)
    b = potential_service.eval_jet(same, [0.2, -0.4], 4)
    for k in range(5):
        np.testing.assert_array_equal(a.tensor(k), b.tensor(k))


def test_affine_correction_changes_only_value_and_gradient(triangle):
    g = potential_service.canonical_potential(triangle)
    affine = PolynomialCorrection(2, (((0, 0), 3.0), ((1, 0), -2.0), ((0, 1), 0.5)))
    shifted = potential_service.add_correction(g, affine)
    assert shifted.label.endswith("+polynomial")
    x = np.array([0.3, -0.1])
    a = potential_service.eval_jet(g, x, 4)
    b = potential_service.eval_jet(shifted, x, 4)
    assert b.value == pytest.approx(a.value + 3.0 - 0.6 - 0.05)
    np.testing.assert_allclose(b.gradient - a.gradient, [-2.0, 0.5], atol=1e-14)
    for k in (2, 3, 4):
        np.testing.assert_allclose(b.tensor(k), a.tensor(k), atol=1e-14)


def test_validate_canonical_sphere(interval):
    report = potential_service.validate_potential(potential_service.canonical_potential(interval), FAST)
    assert report.passed
    assert report.kernel_law
    for sequence in report.sequences:
        np.testing.assert_allclose(sequence.ratios, 1.0, rtol=1e-10)
    assert report.c_min == pytest.approx(1.0)
    assert report.c_max == pytest.approx(1.0)


def test_validate_fixtures_and_calabi(fixture_polytopes, blowup):
    for P in fixture_polytopes.values():
        report = potential_service.validate_potential(potential_service.canonical_potential(P), FAST)
        assert report.passed, P.name
        assert report.kernel_law, P.name
        assert 0 < report.c_min <= report.c_max < np.inf
    g = potential_service.add_correction(potential_service.canonical_potential(blowup), calabi_blowup_correction())
    assert potential_service.validate_potential(g, FAST).passed


def test_kernel_norms_decrease_toward_boundary(hexagon):
    report = potential_service.validate_potential(potential_service.canonical_potential(hexagon), FAST)
    for sequence in report.sequences:
        norms = sequence.kernel_norms
        assert norms[-1] < 1e-3 * norms[0]
        assert np.all(np.diff(norms[4:]) < 0)


def test_validate_reports_negative_correction(triangle):
    bump = PolynomialCorrection(2, (((2, 0), -10.0), ((0, 2), -10.0)))
    g = potential_service.add_correction(potential_service.canonical_potential(triangle), bump)
    report = potential_service.validate_potential(g, FAST)
    assert not report.positive_definite
    assert report.min_eigenvalue < 0
    assert not report.passed


def test_legendre_value_interval(interval):
    g = potential_service.canonical_potential(interval)
    assert potential_service.legendre_value(g, [0.0]) == pytest.approx(0.0, abs=1e-15)
    parts = potential_service.legendre_decomposition(interval, [0.5])
    expected = 0.5 * (-math.log(1.5) - math.log(0.5))
    assert parts["linear_part"] == pytest.approx(0.0, abs=1e-15)
    assert parts["total"] == pytest.approx(expected, abs=1e-12)
    assert parts["direct"] == pytest.approx(parts["total"], abs=1e-12)


def test_legendre_decomposition_all_fixtures(fixture_polytopes, sample_points):
    for P in fixture_polytopes.values():
        for x in sample_points(P, 10):
            parts = potential_service.legendre_decomposition(P, x)
            assert parts["direct"] == pytest.approx(parts["total"], abs=1e-10)


def test_legendre_decomposition_carries_half_linear_term(blowup):
    x = np.array([0.2, 0.3])
    parts = potential_service.legendre_decomposition(blowup, x)
    assert parts["linear_part"] == pytest.approx(0.25)
    assert parts["direct"] == pytest.approx(parts["total"], abs=1e-12)


def test_legendre_field_jets(triangle, sample_points):
    field = LegendreField(potential_service.canonical_potential(triangle))
    for x in sample_points(triangle, 10, margin=0.1):
        for order in (1, 2, 3):
            assert _fd_check(field, x, order) <= 1e-5
    with pytest.raises(ValueError):
        field.jet([0.0, 0.0], 4)


def test_moment_map_interval(interval):
    g = potential_service.canonical_potential(interval)
    assert potential_service.moment_map(g, [0.0])[0] == pytest.approx(0.0, abs=1e-15)
    near = potential_service.moment_map(g, [0.999])[0]
    nearer = potential_service.moment_map(g, [0.9999])[0]
    assert near == pytest.approx(0.5 * math.log(1.999 / 0.001))
    assert nearer > near
    np.testing.assert_allclose(potential_service.moment_map_inverse(g, [0.0]), [0.0], atol=1e-10)


def test_moment_map_round_trip(fixture_polytopes, triangle, sample_points):
    g = potential_service.canonical_potential(triangle)
    x_star = np.array([0.1, -0.2])
    u = potential_service.moment_map(g, x_star)
    np.testing.assert_allclose(potential_service.moment_map_inverse(g, u), x_star, atol=1e-10)

    for P in fixture_polytopes.values():
        g = potential_service.canonical_potential(P)
        for x in sample_points(P, 5):
            u = potential_service.moment_map(g, x)
            back = potential_service.moment_map_inverse(g, u)
            assert np.linalg.norm(potential_service.moment_map(g, back) - u) <= 1e-10


@pytest.mark.parametrize("u", [-1.3, 0.2, 0.7])
def test_sphere_dual_potential_from_u(interval, u):
    # f(u) = log cosh u and df/du = tanh u on the round sphere
    g = potential_service.canonical_potential(interval)
    x = potential_service.moment_map_inverse(g, [u])
    assert x[0] == pytest.approx(math.tanh(u), abs=1e-9)
    assert potential_service.legendre_value(g, x) == pytest.approx(math.log(math.cosh(u)), abs=1e-9)


@pytest.mark.parametrize("u", [(0.3, -0.4), (-0.8, 0.1), (0.5, 0.5)])
def test_cp2_dual_potential_from_u(triangle, u):
    # f(u) = -u1 - u2 + 3/2 log((1 + e^2u1 + e^2u2) / 3), x_i = 3 e^2ui / (1 + e^2u1 + e^2u2) - 1
    g = potential_service.canonical_potential(triangle)
    u = np.array(u)
    total = 1 + np.exp(2 * u).sum()
    x = potential_service.moment_map_inverse(g, u)
    np.testing.assert_allclose(x, 3 * np.exp(2 * u) / total - 1, atol=1e-9)
    expected = -u.sum() + 1.5 * math.log(total / 3)
    assert potential_service.legendre_value(g, x) == pytest.approx(expected, abs=1e-9)
    assert potential_service.legendre_decomposition(triangle, x)["total"] == pytest.approx(expected, abs=1e-9)


def test_moment_map_inverse_reports_no_convergence(interval):
    service = type(potential_service)()
    service.newton_max_iters = 1
    g = service.canonical_potential(interval)
    with pytest.raises(NoConvergence) as info:
        service.moment_map_inverse(g, [5.0])
    assert "residual" in info.value.diagnostics


def test_zero_perturbation_is_identity(triangle, sample_points):
    result = potential_service.kahler_perturbation(triangle, ZeroCorrection(), FAST)
    g = potential_service.canonical_potential(triangle)
    for x in sample_points(triangle, 5):
        np.testing.assert_allclose(result.map_eval(x), x, atol=1e-15)
        assert result.corrected_potential_eval(x) == pytest.approx(potential_service.eval_jet(g, x, 0).value, abs=1e-10)
    assert result.max_asymmetry <= 1e-12
    assert result.constant_drift <= 1e-5


def test_small_quadratic_perturbation_stays_positive(interval):
    bump = PolynomialCorrection(1, (((2,), 1e-3),))
    result = potential_service.kahler_perturbation(interval, bump, FAST)
    assert result.min_form_eigenvalue > 0
    assert result.min_jacobian_det > 0
    assert result.constant_drift <= 1e-4
    assert all(abs(c) < 0.1 for c in result.boundary_correction)
    x = np.array([0.4])
    x_tilde = result.map_eval(x)
    np.testing.assert_allclose(result.inverse_map(x_tilde), x, atol=1e-9)


def test_affine_perturbation_shifts_by_inverse_metric(triangle):
    affine = PolynomialCorrection(2, (((1, 0), 0.01), ((0, 1), -0.02)))
    result = potential_service.kahler_perturbation(triangle, affine, FAST)
    x = np.array([0.1, 0.2])
    Ginv = np.linalg.inv(potential_service.eval_jet(potential_service.canonical_potential(triangle), x, 2).hessian)
    np.testing.assert_allclose(result.map_eval(x), x + Ginv @ np.array([0.01, -0.02]), atol=1e-12)


def test_affine_perturbation_matches_direct_legendre_construction(triangle, sample_points):
    # Kahler potential f_P(u) + f_J(x(u)); its Legendre dual at x~ = x + G_P^-1 c is <x~, u> - f_P - f_J
    c = np.array([0.01, -0.02])
    affine = PolynomialCorrection(2, (((1, 0), 0.01), ((0, 1), -0.02), ((0, 0), 0.3)))
    result = potential_service.kahler_perturbation(triangle, affine, FAST)
    g_P = potential_service.canonical_potential(triangle)
    h = 1e-4
    for x in sample_points(triangle, 5, margin=0.1):
        u = potential_service.moment_map(g_P, x)
        Ginv = np.linalg.inv(potential_service.eval_jet(g_P, x, 2).hessian)
        x_tilde = x + Ginv @ c
        f_J = float(c @ x) + 0.3
        direct = float(x_tilde @ u) - potential_service.legendre_value(g_P, x) - f_J
        assert result.corrected_potential_eval(x_tilde) == pytest.approx(direct, abs=1e-9)

        grad = np.empty(2)
        for i in range(2):
            e = np.zeros(2)
            e[i] = h
            grad[i] = (result.corrected_potential_eval(x_tilde + e)
                       - result.corrected_potential_eval(x_tilde - e)) / (2 * h)
        np.testing.assert_allclose(grad, u, atol=1e-5)


class _CancelCanonical(CorrectionTerm):
    """-g_P, so that g_P + h has an identically zero Hessian"""
    kind = "cancel"

    def __init__(self, P):
        self.g_P = SymplecticPotential(P)

    def jet(self, x, order):
        return self.g_P.jet(x, order).scaled(-1.0)


def test_singular_hessian_is_reported_not_raised(interval):
    g = potential_service.add_correction(potential_service.canonical_potential(interval), _CancelCanonical(interval))
    report = potential_service.validate_potential(g, FAST)
    assert not report.positive_definite
    assert not report.boundary_bounded
    assert not report.passed
    assert report.c_min == 0.0


def test_sl_transformed_polytope_keeps_potential_valid(triangle):
    image = polytope_service.sl_transform(triangle, [[2, 1], [1, 1]])
    report = potential_service.validate_potential(potential_service.canonical_potential(image), FAST)
    assert report.passed
