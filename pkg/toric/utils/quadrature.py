import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from toric.models.polytope import DelzantPolytope


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    points: np.ndarray   # (m, n)
    weights: np.ndarray  # (m,)

    def integrate(self, values) -> float:
        return float(np.asarray(values, dtype=float) @ self.weights)

    @property
    def size(self) -> int:
        return len(self.weights)


@lru_cache(maxsize=32)
def _reference_rule(dim: int, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Collapsed-coordinate Gauss-Jacobi rule on the unit simplex
    {t >= 0, sum t <= 1}, exact for polynomials of total degree <= degree.
    """
    m = max(1, math.ceil((degree + 1) / 2))
    axes = []
    for i in range(dim):
        alpha = dim - 1 - i
        s, w = roots_jacobi(m, alpha, 0.0)
        axes.append(((s + 1) / 2, w / 2 ** (alpha + 1)))

    grids = np.meshgrid(*[u for u, _ in axes], indexing="ij")
    wgrids = np.meshgrid(*[w for _, w in axes], indexing="ij")
    u = np.stack([g.ravel() for g in grids], axis=1)
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)

    t = np.empty_like(u)
    remaining = np.ones(len(u))
    for i in range(dim):
        t[:, i] = remaining * u[:, i]
        remaining = remaining * (1 - u[:, i])
    return t, weights


def simplex_rule(simplex: np.ndarray, degree: int) -> QuadratureRule:
    """Rule on the simplex with rows v_0..v_n"""
    simplex = np.asarray(simplex, dtype=float)
    dim = simplex.shape[1]
    t, w = _reference_rule(dim, degree)
    edges = simplex[1:] - simplex[0]
    jac = abs(np.linalg.det(edges))
    return QuadratureRule(simplex[0] + t @ edges, w * jac)


def fan_simplices(P: DelzantPolytope) -> list[np.ndarray]:
    """
    Triangulation of P into n-simplices: every face is coned from the centroid
    of its vertices over the triangulations of its facets.
    """
    V = P.vertex_array

    def triangulate(facet_set: frozenset) -> list[list[np.ndarray]]:
        ids = P.face_vertex_ids(facet_set)
        if len(facet_set) == P.dim:
            return [[V[ids[0]]]]
        center = V[ids].mean(axis=0)
        simplices = []
        for r in range(P.num_facets):
            if r in facet_set or not P.face_vertex_ids(facet_set | {r}):
                continue
            for simplex in triangulate(facet_set | {r}):
                simplices.append(simplex + [center])
        return simplices

    # one simplex per flag vertex < edge < ... < P
    return [np.array(s) for s in triangulate(frozenset())]


def polytope_rule(P: DelzantPolytope, degree: int) -> QuadratureRule:
    """Composite rule over the fan triangulation of P"""
    rules = [simplex_rule(s, degree) for s in fan_simplices(P)]
    return QuadratureRule(
        np.concatenate([r.points for r in rules]),
        np.concatenate([r.weights for r in rules]),
    )


def interval_gauss3(a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Three-point Gauss-Legendre nodes and weights on [a, b]"""
    s, w = np.polynomial.legendre.leggauss(3)
    half = (b - a) / 2
    return a + half * (s + 1), half * w
