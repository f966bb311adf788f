"""(1,1)-forms in symplectic coordinates and classes in H^2."""

import math
from fractions import Fraction

import numpy as np
import pytest

from toric.models.potential import LegendreField, LinearField, LogFacetField
from toric.models.reports import ClassVector
from toric.services.cohomology_service import cohomology_service
from toric.services.polytope_service import polytope_service
from toric.services.potential_service import potential_service


class _FacetCombination:
    """sum_r weights[r] * log ell_r"""

    def __init__(self, P, weights):
        self.fields = [LogFacetField(P, r) for r in range(P.num_facets)]
        self.weights = weights

    def jet(self, x, order):
        total = self.fields[0].jet(x, order).scaled(self.weights[0])
        for field, w in zip(self.fields[1:], self.weights[1:]):
            total = total + field.jet(x, order).scaled(w)
        return total


def test_ddbar_of_legendre_value_is_identity(fixture_polytopes, sample_points):
    for P in fixture_polytopes.values():
        g = potential_service.canonical_potential(P)
        field = LegendreField(g)
        for x in sample_points(P, 100):
            C = cohomology_service.ddbar_coefficients(g, field, x).C
            np.testing.assert_allclose(C, np.eye(P.dim), atol=1e-10)


def test_ddbar_of_constant_is_zero(triangle):
    g = potential_service.canonical_potential(triangle)
    C = cohomology_service.ddbar_coefficients(g, LinearField((0.0, 0.0), 7.0), [0.1, 0.1]).C
    np.testing.assert_array_equal(C, np.zeros((2, 2)))


def test_generator_form_on_interval(interval):
    # ell = 1 - x is the second facet
    form = cohomology_service.generator_form(interval, 1, [0.0])
    assert form.C[0, 0] == pytest.approx(1 / (4 * math.pi), rel=1e-14)
    with pytest.raises(IndexError):
        cohomology_service.generator_form(interval, 2, [0.0])


def test_generator_matches_ddbar_of_log_facet(fixture_polytopes, sample_points):
    for P in fixture_polytopes.values():
        g = potential_service.canonical_potential(P)
        for x in sample_points(P, 100):
            for r in range(P.num_facets):
                alpha = cohomology_service.generator_form(P, r, x).C
                direct = cohomology_service.ddbar_coefficients(g, LogFacetField(P, r), x).C
                np.testing.assert_allclose(-4 * math.pi * alpha, direct, atol=1e-10)


def test_generator_forms_stay_finite_near_other_facets(triangle):
    # approach facet 2 and evaluate the generator of facet 0
    for level in (1e-3, 1e-6, 1e-9):
        x = np.array([0.5 - level / 2, 0.5 - level / 2])
        C = cohomology_service.generator_form(triangle, 0, x).C
        assert np.all(np.isfinite(C))


def test_normal_relations_give_zero_forms(fixture_polytopes, sample_points):
    for P in fixture_polytopes.values():
        g = potential_service.canonical_potential(P)
        for i in range(P.dim):
            field = _FacetCombination(P, P.normals[:, i])
            for x in sample_points(P, 5):
                C = cohomology_service.ddbar_coefficients(g, field, x).C
                np.testing.assert_allclose(C, 0.0, atol=1e-10)


def test_decomposition_assembles_identity(blowup, sample_points):
    # -2 pi sum lambda_r alpha_r plus half the ddbar of ell_inf gives the identity
    g = potential_service.canonical_potential(blowup)
    ell_inf = LinearField(tuple(blowup.normals.sum(axis=0)))
    for x in sample_points(blowup, 10):
        representative = cohomology_service.symplectic_representative(blowup, x).C
        linear = cohomology_service.ddbar_coefficients(g, ell_inf, x).C
        np.testing.assert_allclose(representative + 0.5 * linear, np.eye(2), atol=1e-10)


def test_standard_representative_flag(fixture_polytopes, sample_points):
    for name in ("cp2-triangle", "hexagon", "sphere-interval"):
        P = fixture_polytopes[name]
        for x in sample_points(P, 10):
            C = cohomology_service.symplectic_representative(P, x).C
            np.testing.assert_allclose(C, np.eye(P.dim), atol=1e-10)

    P = fixture_polytopes["cp2-blowup-4gon"]
    deviation = max(
        np.abs(cohomology_service.symplectic_representative(P, x).C - np.eye(2)).max()
        for x in sample_points(P, 10)
    )
    assert deviation > 1e-3


def test_h2_dimension(fixture_polytopes):
    expected = {"sphere-interval": 1, "cp2-triangle": 1, "cp2-blowup-4gon": 2, "hexagon": 4}
    for name, P in fixture_polytopes.items():
        report = cohomology_service.h2_dimension(P)
        assert report.dim == expected[name]
        assert report.dim == P.num_facets - P.dim
        assert report.rank == P.dim
        assert len(report.kernel_basis) == P.num_facets


def test_generator_forms_span_h2(fixture_polytopes, sample_points):
    for P in fixture_polytopes.values():
        rank = cohomology_service.form_span_rank(P, sample_points(P, 12))
        assert rank == P.num_facets - P.dim


def test_symplectic_class_of_interval(interval):
    cls = cohomology_service.symplectic_class(interval)
    assert cls.coefficients == (Fraction(1), Fraction(1))
    assert cls.to_dict()["coefficients"] == ["1", "1"]


def test_classes_equal_modulo_normals(hexagon):
    cls = cohomology_service.symplectic_class(hexagon)
    shift = [sum(c * n for c, n in zip((2, -3), f.normal)) for f in hexagon.facets]
    moved = ClassVector(tuple(a + b for a, b in zip(cls.coefficients, shift)), cls.kernel_basis)
    assert cls.same_class(moved)

    other = ClassVector(tuple(a + (1 if r == 0 else 0) for r, a in enumerate(cls.coefficients)), cls.kernel_basis)
    assert not cls.same_class(other)


def test_class_is_translation_invariant(triangle):
    moved = polytope_service.translate(triangle, ["1/3", 2])
    assert cohomology_service.symplectic_class(triangle).same_class(cohomology_service.symplectic_class(moved))
