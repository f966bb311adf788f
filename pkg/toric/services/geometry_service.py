import itertools
import logging
from typing import Optional

import numpy as np
from scipy.optimize import least_squares

from toric.config import config
from toric.errors import NotPositiveDefinite
from toric.models.correction import PolynomialCorrection
from toric.models.metric import metric_from_jet
from toric.models.potential import SymplecticPotential
from toric.models.reports import ExtremalityReport, HexagonReport, MetricSample
from toric.services.polytope_service import polytope_service
from toric.services.potential_service import potential_service
from toric.utils.sampling import SamplingConfig, interior_samples

logger = logging.getLogger(__name__)

# Lattice symmetries generating the symmetry group of the hexagon fixture
HEXAGON_SYMMETRIES = (
    np.array([[1, 1], [-1, 0]]),  # rotation of order 6
    np.array([[0, 1], [1, 0]]),   # reflection x1 <-> x2
)


class GeometryService:
    """Metric blocks, scalar curvature and extremality"""

    def __init__(self):
        self.tol_extremal = config.tol_extremal

    def metric_sample(self, g: SymplecticPotential, x) -> MetricSample:
        return metric_from_jet(potential_service.eval_jet(g, x, 4))

    def scalar_curvature(self, g: SymplecticPotential, x) -> float:
        """S = -1/2 sum_jk d^2 G^jk / dx_j dx_k"""
        m = self.metric_sample(g, x)
        return -0.5 * float(np.einsum("jkjk->", m.d2Ginv))

    def scalar_curvature_alt(self, g: SymplecticPotential, x) -> float:
        """S = -1/2 sum_j d_j (G^jk d_k log det G), with d_k log det G = tr(G^-1 d_k G)"""
        jet = potential_service.eval_jet(g, x, 4)
        m = metric_from_jet(jet)
        dG, ddG = jet.third, jet.fourth
        a = np.einsum("ab,kba->k", m.Ginv, dG)
        da = np.einsum("jab,kba->jk", m.dGinv, dG) + np.einsum("ab,jkba->jk", m.Ginv, ddG)
        return -0.5 * float(np.einsum("jjk,k->", m.dGinv, a) + np.einsum("jk,jk->", m.Ginv, da))

    def divergence_defect(self, g: SymplecticPotential, x) -> float:
        """max_k |sum_j d_j G^jk + G^kb d_b log det G|, zero for Hessian metrics"""
        jet = potential_service.eval_jet(g, x, 3)
        m = metric_from_jet(jet)
        div = np.einsum("jjk->k", m.dGinv)
        a = np.einsum("ab,kba->k", m.Ginv, jet.third)
        return float(np.abs(div + m.Ginv @ a).max())

    def scalar_field(self, g: SymplecticPotential, points: np.ndarray) -> np.ndarray:
        return np.array([self.scalar_curvature(g, x) for x in points])

    def _affine_fit(self, points: np.ndarray, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        design = np.hstack([np.ones((len(points), 1)), points])
        coeffs, *_ = np.linalg.lstsq(design, values, rcond=None)
        return coeffs, values - design @ coeffs

    def extremality_test(
        self,
        g: SymplecticPotential,
        sampling: SamplingConfig = SamplingConfig(),
        tol: Optional[float] = None
    ) -> ExtremalityReport:
        """Least-squares affine fit of S over the interior sample set"""
        tol = self.tol_extremal if tol is None else tol
        points = interior_samples(g.polytope, sampling)
        values = self.scalar_field(g, points)
        coeffs, residual = self._affine_fit(points, values)
        report = ExtremalityReport(
            constant=float(coeffs[0]),
            gradient=coeffs[1:],
            residual_sup=float(np.abs(residual).max()),
            samples=len(points),
            tolerance=tol,
            scalar_range=(float(values.min()), float(values.max())),
        )
        logger.info(f"Extremality of {g.label}: residual_sup={report.residual_sup:.3e} "
                    f"over {len(points)} samples (extremal={report.is_extremal})")
        return report

    def hexagon_fixture_check(self, sampling: SamplingConfig = SamplingConfig()) -> HexagonReport:
        """Canonical hexagon metric: not extremal, scalar curvature invariant under the lattice symmetries"""
        P = polytope_service.fixture("hexagon")
        g = potential_service.canonical_potential(P)
        report = self.extremality_test(g, sampling)
        points = interior_samples(P, sampling)
        values = self.scalar_field(g, points)
        defect = 0.0
        for A in HEXAGON_SYMMETRIES:
            moved = self.scalar_field(g, points @ A.T)
            defect = max(defect, float(np.abs(moved - values).max()))
        if report.is_extremal:
            logger.warning("Canonical hexagon metric passed the extremality test")
        return HexagonReport(report, defect, float(values.mean()))

    def explore_extremal_correction(
        self,
        g: SymplecticPotential,
        degree: int = 4,
        sampling: SamplingConfig = SamplingConfig(grid_points=5, sobol_points=16),
        max_nfev: int = 50
    ) -> dict:
        """
        Least-squares search over polynomial corrections of degree 2..degree that
        reduce the non-affine part of S. Exploratory: no convergence claim.
        """
        n = g.dim
        exponents = [
            e for e in itertools.product(range(degree + 1), repeat=n)
            if 2 <= sum(e) <= degree
        ]
        points = interior_samples(g.polytope, sampling)

        def corrected(params) -> SymplecticPotential:
            h = PolynomialCorrection(n, tuple(zip(exponents, (float(p) for p in params))))
            return potential_service.add_correction(g, h, label=f"{g.label}+search")

        def residuals(params) -> np.ndarray:
            try:
                values = self.scalar_field(corrected(params), points)
            except NotPositiveDefinite:
                return np.full(len(points), 1e3)
            return self._affine_fit(points, values)[1]

        start = np.zeros(len(exponents))
        initial = residuals(start)
        result = least_squares(residuals, start, max_nfev=max_nfev)
        final = result.fun
        logger.info(f"Extremal search on {g.label}: cost {0.5 * initial @ initial:.3e} -> {result.cost:.3e} "
                    f"after {result.nfev} evaluations")
        return {
            "terms": [{"exponents": list(e), "coeff": float(c)} for e, c in zip(exponents, result.x)],
            "initial_cost": float(0.5 * initial @ initial),
            "final_cost": float(result.cost),
            "initial_residual_sup": float(np.abs(initial).max()),
            "final_residual_sup": float(np.abs(final).max()),
            "evaluations": int(result.nfev),
            "status": int(result.status),
        }


# Singleton instance
geometry_service = GeometryService()
