"""Delzant validation, exact vertex enumeration and face combinatorics."""

import itertools
from fractions import Fraction

import pytest
import sympy

from toric.errors import (
    EmptyInterior,
    NonPrimitiveNormal,
    NonUnimodularVertex,
    NotUnimodular,
    RedundantFacet,
    Unbounded,
)
from toric.models.polytope import NOT_COMPUTED
from toric.services.polytope_service import polytope_service


def _points(P):
    return {v.point for v in P.vertices}


def _brute_force_vertices(P):
    found = set()
    for subset in itertools.combinations(range(P.num_facets), P.dim):
        M = sympy.Matrix([list(P.facets[r].normal) for r in subset])
        if M.det() == 0:
            continue
        rhs = sympy.Matrix([sympy.Rational(str(P.facets[r].offset)) for r in subset])
        point = tuple(Fraction(str(c)) for c in M.solve(rhs))
        if all(f.ell(point) >= 0 for f in P.facets):
            found.add(point)
    return found


def _cube(dim):
    facets = []
    for i in range(dim):
        for sign in (1, -1):
            normal = [0] * dim
            normal[i] = sign
            facets.append((normal, -1))
    return polytope_service.build_polytope(dim, facets, name=f"cube{dim}")


def test_triangle_vertices_exact(triangle):
    F = Fraction
    assert _points(triangle) == {(F(-1), F(-1)), (F(2), F(-1)), (F(-1), F(2))}
    assert all(isinstance(c, Fraction) for v in triangle.vertices for c in v.point)


def test_blowup_vertices(blowup):
    F = Fraction
    assert _points(blowup) == {(F(-1), F(0)), (F(0), F(-1)), (F(2), F(-1)), (F(-1), F(2))}


def test_vertices_match_brute_force(fixture_polytopes):
    for P in fixture_polytopes.values():
        assert _points(P) == _brute_force_vertices(P)


def test_rational_offsets_stay_exact():
    P = polytope_service.build_polytope(1, [([1], "-1/3"), ([-1], "-2/3")])
    assert _points(P) == {(Fraction(-2, 3),), (Fraction(1, 3),)}


def test_every_vertex_is_simple_and_unimodular(fixture_polytopes):
    for P in fixture_polytopes.values():
        for v in P.vertices:
            assert len(v.active) == P.dim
            M = sympy.Matrix([list(P.facets[r].normal) for r in v.key])
            assert abs(M.det()) == 1


def test_non_primitive_normal_rejected():
    with pytest.raises(NonPrimitiveNormal) as info:
        polytope_service.build_polytope(1, [([2], -1), ([-1], -1)])
    assert info.value.r == 0


def test_zero_normal_rejected():
    with pytest.raises(NonPrimitiveNormal):
        polytope_service.build_polytope(2, [([0, 0], -1), ([1, 0], -1), ([0, 1], -1), ([-1, -1], -1)])


def test_unbounded_rejected():
    with pytest.raises(Unbounded):
        polytope_service.build_polytope(2, [([1, 0], -1), ([0, 1], -1), ([-1, 0], -1)])


def test_too_few_facets_rejected():
    with pytest.raises(Unbounded):
        polytope_service.build_polytope(2, [([1, 0], -1), ([0, 1], -1)])


def test_non_unimodular_vertex_rejected():
    with pytest.raises(NonUnimodularVertex) as info:
        polytope_service.build_polytope(2, [([1, 0], -1), ([0, 1], -1), ([-1, -2], -1)])
    assert abs(info.value.det) == 2


@pytest.mark.parametrize("dim, facets", [
    (1, [([1], 1), ([-1], 1)]),
    (1, [([1], 0), ([-1], 0)]),
    (2, [([1, 0], 0), ([0, 1], 0), ([-1, -1], 0)]),
    (2, [([1, 0], -1), ([-1, 0], 1), ([0, 1], -1), ([0, -1], -1)]),
])
def test_empty_interior_rejected(dim, facets):
    # infeasible, a single point, and a segment inside the plane
    with pytest.raises(EmptyInterior):
        polytope_service.build_polytope(dim, facets)


def test_redundant_facet_rejected():
    facets = [([1, 0], -1), ([-1, 0], -1), ([0, 1], -1), ([0, -1], -1), ([1, 0], -5)]
    with pytest.raises(RedundantFacet) as info:
        polytope_service.build_polytope(2, facets)
    assert info.value.r == 4


def test_f_vectors(interval, triangle, hexagon):
    assert polytope_service.f_vector(interval).counts == (2, 1)
    assert polytope_service.f_vector(triangle).counts == (3, 3, 1)
    assert polytope_service.f_vector(hexagon).counts == (6, 6, 1)


def test_h_numbers(interval, triangle, blowup, hexagon):
    assert polytope_service.h_numbers(interval) == (1, 1)
    assert polytope_service.h_numbers(triangle) == (1, 1, 1)
    assert polytope_service.h_numbers(blowup) == (1, 2, 1)
    assert polytope_service.h_numbers(hexagon) == (1, 4, 1)


def test_first_h_number_counts_facets_minus_dimension(fixture_polytopes):
    for P in fixture_polytopes.values():
        assert polytope_service.h_numbers(P)[1] == P.num_facets - P.dim


def test_hard_lefschetz_on_fixtures(fixture_polytopes):
    for P in fixture_polytopes.values():
        report = polytope_service.check_hard_lefschetz(polytope_service.h_numbers(P))
        assert report.symmetric
        assert report.unimodal_lower_half


def test_hard_lefschetz_detects_asymmetry():
    report = polytope_service.check_hard_lefschetz((1, 2, 3))
    assert report.symmetric is False
    assert report.passed is False


def test_hard_lefschetz_detects_decrease():
    report = polytope_service.check_hard_lefschetz((1, 0, 1))
    assert report.symmetric is True
    assert report.unimodal_lower_half is False
    assert report.passed is False


def test_hard_lefschetz_failure_wins_over_missing_entries():
    report = polytope_service.check_hard_lefschetz((1, 4, None, None, 2))
    assert report.symmetric is False
    assert report.unimodal_lower_half is None
    assert report.passed is False


def test_cube_h_numbers():
    cube = _cube(3)
    assert polytope_service.f_vector(cube).counts == (8, 12, 6, 1)
    assert polytope_service.h_numbers(cube) == (1, 3, 3, 1)
    assert polytope_service.f_vector(cube).euler_characteristic() == 0


def test_face_lattice_skipped_above_max_dimension():
    P = _cube(4)
    f = polytope_service.f_vector(P)
    assert f.counts == (16, None, None, 8, 1)
    assert f.to_list()[1] == "not_computed"
    assert f.euler_characteristic() is None

    h = polytope_service.h_numbers(P)
    assert h[:2] == (1, 4)
    assert h[2:] == (None, None, None)

    report = polytope_service.check_hard_lefschetz(h)
    assert report.symmetric is None
    assert report.unimodal_lower_half is None
    assert report.passed is None
    doc = report.to_dict()
    assert doc["symmetric"] == NOT_COMPUTED
    assert doc["unimodal_lower_half"] == NOT_COMPUTED
    assert doc["passed"] == NOT_COMPUTED
    assert doc["h"] == [1, 4, NOT_COMPUTED, NOT_COMPUTED, NOT_COMPUTED]


def test_sl_transform_maps_vertices(triangle):
    A = [[1, 1], [0, 1]]
    image = polytope_service.sl_transform(triangle, A)
    M = sympy.Matrix(A)
    expected = {
        tuple(Fraction(str(c)) for c in M * sympy.Matrix([sympy.Rational(str(x)) for x in v.point]))
        for v in triangle.vertices
    }
    assert _points(image) == expected
    assert [f.offset for f in image.facets] == [f.offset for f in triangle.facets]


SL2Z = [[1, 1], [0, 1]], [[2, 1], [1, 1]], [[0, -1], [1, 0]], [[3, 5], [1, 2]]


def _combinatorics(P):
    return (
        polytope_service.f_vector(P).counts,
        polytope_service.h_numbers(P),
        not any(polytope_service.normal_sum(P)),
    )


@pytest.mark.parametrize("A", SL2Z)
@pytest.mark.parametrize("name", ["cp2-triangle", "cp2-blowup-4gon", "hexagon"])
def test_combinatorics_invariant_under_sl_transform(fixture_polytopes, name, A):
    P = fixture_polytopes[name]
    assert _combinatorics(polytope_service.sl_transform(P, A)) == _combinatorics(P)


@pytest.mark.parametrize("A", SL2Z)
def test_hexagon_image_keeps_f_vector(hexagon, A):
    assert polytope_service.f_vector(polytope_service.sl_transform(hexagon, A)).counts == (6, 6, 1)


@pytest.mark.parametrize("name, t", [
    ("sphere-interval", ["5/2"]),
    ("cp2-triangle", [1, "-1/3"]),
    ("cp2-blowup-4gon", [-2, 3]),
    ("hexagon", ["1/7", 4]),
])
def test_combinatorics_invariant_under_translate(fixture_polytopes, name, t):
    P = fixture_polytopes[name]
    assert _combinatorics(polytope_service.translate(P, t)) == _combinatorics(P)


def test_sl_transform_rejects_determinant_minus_one(triangle):
    with pytest.raises(NotUnimodular):
        polytope_service.sl_transform(triangle, [[0, 1], [1, 0]])


def test_translate_shifts_vertices(triangle):
    moved = polytope_service.translate(triangle, ["1/2", 1])
    shift = (Fraction(1, 2), Fraction(1))
    assert _points(moved) == {tuple(a + b for a, b in zip(p, shift)) for p in _points(triangle)}
    for f_old, f_new in zip(triangle.facets, moved.facets):
        point = next(iter(_points(triangle)))
        assert f_new.ell(tuple(a + b for a, b in zip(point, shift))) == f_old.ell(point)


def test_normal_sum(fixture_polytopes):
    assert polytope_service.normal_sum(fixture_polytopes["sphere-interval"]) == (0,)
    assert polytope_service.normal_sum(fixture_polytopes["cp2-triangle"]) == (0, 0)
    assert polytope_service.normal_sum(fixture_polytopes["hexagon"]) == (0, 0)
    assert polytope_service.normal_sum(fixture_polytopes["cp2-blowup-4gon"]) == (1, 1)


def test_fixture_round_trips_through_document(fixture_polytopes):
    for name, P in fixture_polytopes.items():
        doc = P.to_dict()
        rebuilt = polytope_service.build_polytope(
            doc["dim"], [(f["normal"], f["offset"]) for f in doc["facets"]], name=name
        )
        assert rebuilt == P
