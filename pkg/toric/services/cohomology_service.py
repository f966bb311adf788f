import logging
import math

import numpy as np
import sympy

from toric.models.jets import ScalarField
from toric.models.metric import metric_from_jet
from toric.models.polytope import DelzantPolytope
from toric.models.potential import LogFacetField, SymplecticPotential
from toric.models.reports import ClassVector, FormCoefficients, H2Report
from toric.services.potential_service import potential_service

logger = logging.getLogger(__name__)


class CohomologyService:
    """(1,1)-forms of T^n-invariant functions in symplectic coordinates and classes in H^2"""

    def ddbar_coefficients(self, g: SymplecticPotential, nu: ScalarField, x) -> FormCoefficients:
        """2i ddbar nu = sum_jk d_j(G^kl d_l nu) dx_j ^ dy_k"""
        x = np.asarray(x, dtype=float)
        m = metric_from_jet(potential_service.eval_jet(g, x, 3))
        v = nu.jet(x, 2)
        C = np.einsum("jkl,l->jk", m.dGinv, v.gradient) + np.einsum("kl,lj->jk", m.Ginv, v.hessian)
        return FormCoefficients(x, C)

    def generator_form(self, P: DelzantPolytope, r: int, x) -> FormCoefficients:
        """alpha_r = -1/(4 pi) 2i ddbar log ell_r for the canonical potential"""
        if not 0 <= r < P.num_facets:
            raise IndexError(f"facet index {r} out of range for {P.num_facets} facets")
        g = potential_service.canonical_potential(P)
        form = self.ddbar_coefficients(g, LogFacetField(P, r), x)
        return FormCoefficients(form.point, -form.C / (4 * math.pi))

    def h2_dimension(self, P: DelzantPolytope) -> H2Report:
        """dim H^2(P) = d - rank N; the normals matrix N spans the relations among the alpha_r"""
        N = sympy.Matrix([list(f.normal) for f in P.facets])
        rank = N.rank()
        return H2Report(P.num_facets - rank, rank, tuple(f.normal for f in P.facets))

    def symplectic_class(self, P: DelzantPolytope) -> ClassVector:
        """[omega_P] / 2 pi = -sum lambda_r alpha_r"""
        return ClassVector(
            coefficients=tuple(-f.offset for f in P.facets),
            kernel_basis=tuple(f.normal for f in P.facets),
        )

    def symplectic_representative(self, P: DelzantPolytope, x) -> FormCoefficients:
        """Pointwise -2 pi sum lambda_r alpha_r; the identity exactly when the normals sum to zero"""
        x = np.asarray(x, dtype=float)
        C = np.zeros((P.dim, P.dim))
        for r, f in enumerate(P.facets):
            C += -2 * math.pi * float(f.offset) * self.generator_form(P, r, x).C
        return FormCoefficients(x, C)

    def form_span_rank(self, P: DelzantPolytope, points: np.ndarray, rtol: float = 1e-9) -> int:
        """Numerical rank of the alpha_r as functions sampled at the given points"""
        rows = np.array([
            np.concatenate([self.generator_form(P, r, x).C.ravel() for x in points])
            for r in range(P.num_facets)
        ])
        singular = np.linalg.svd(rows, compute_uv=False)
        rank = int(np.sum(singular > rtol * singular[0]))
        logger.info(f"Generator forms of {P.name or 'polytope'} span rank {rank} over {len(points)} points")
        return rank


# Singleton instance
cohomology_service = CohomologyService()
