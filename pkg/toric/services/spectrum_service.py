import itertools
import logging
import math
from typing import Callable, Optional, Union

import numpy as np
import scipy.linalg
from numpy.polynomial import legendre
from scipy.optimize import brentq
from scipy.special import j0, j1

from toric.config import config
from toric.errors import IllConditionedGram, ZeroFunction
from toric.models.jets import ScalarField
from toric.models.methods import Fem1DConfig, RitzConfig
from toric.models.metric import metric_from_jet
from toric.models.polytope import DelzantPolytope
from toric.models.potential import SymplecticPotential
from toric.models.reports import BesselBound, SpectralInvarianceReport, SpectrumResult
from toric.services.polytope_service import polytope_service
from toric.services.potential_service import potential_service
from toric.utils.quadrature import QuadratureRule, interval_gauss3, polytope_rule

logger = logging.getLogger(__name__)

SpectrumMethod = Union[RitzConfig, Fem1DConfig]


class SpectrumService:
    """
    Invariant Laplacian spectrum: eigenvalues of
        A c = lambda M c,   A_ab = int_P grad p_a . G^-1 grad p_b dx,   M_ab = int_P p_a p_b dx
    over a polynomial trial space (any dimension) or 1D quadratic finite elements.
    No boundary condition is imposed; G^-1 degenerates on the boundary as the closed manifold requires.
    """

    def __init__(self):
        self.ritz_degree = config.ritz_degree
        self.fem_cells = config.fem_cells
        self.gram_cond_max = config.gram_cond_max
        self.convergence_rtol = config.convergence_rtol

    def inverse_metric(self, g: SymplecticPotential, points: np.ndarray) -> np.ndarray:
        """G^-1 at each point, shape (m, n, n)"""
        return np.array([np.linalg.inv(potential_service.eval_jet(g, x, 2).hessian) for x in points])

    def laplacian_apply(self, g: SymplecticPotential, psi: ScalarField, x) -> float:
        """
        Delta psi = -det G sum_jk G^jk d_j(det G^-1 d_k psi)
                  = -sum_jk G^jk (psi_jk - a_j psi_k),  a_j = d_j log det G
        """
        x = np.asarray(x, dtype=float)
        jet = potential_service.eval_jet(g, x, 3)
        m = metric_from_jet(jet)
        a = np.einsum("ab,jba->j", m.Ginv, jet.third)
        p = psi.jet(x, 2)
        return -float(np.einsum("jk,jk->", m.Ginv, p.hessian - np.outer(a, p.gradient)))

    def rayleigh_quotient(self, g: SymplecticPotential, psi: ScalarField,
                          rule: Optional[QuadratureRule] = None) -> float:
        """int_P grad psi . G^-1 grad psi dx / int_P psi^2 dx"""
        if rule is None:
            rule = polytope_rule(g.polytope, 2 * self.ritz_degree + 4)
        jets = [psi.jet(x, 1) for x in rule.points]
        values = np.array([j.value for j in jets])
        grads = np.array([j.gradient for j in jets])
        denominator = rule.integrate(values ** 2)
        if denominator <= 1e-300:
            raise ZeroFunction()
        Ginv = self.inverse_metric(g, rule.points)
        numerator = rule.integrate(np.einsum("qi,qij,qj->q", grads, Ginv, grads))
        return numerator / denominator

    # Rayleigh-Ritz

    def _ritz_basis(self, P: DelzantPolytope, degree: int, points: np.ndarray):
        """
        Tensor Legendre polynomials of total degree <= degree in box-scaled
        coordinates, ordered by total degree (index 0 is the constant).
        """
        lo, hi = P.bounding_box
        center = (lo + hi) / 2
        half = (hi - lo) / 2
        s = (points - center) / half
        n = P.dim
        vals = np.empty((n, len(points), degree + 1))
        ders = np.empty((n, len(points), degree + 1))
        for k in range(degree + 1):
            c = np.zeros(k + 1)
            c[k] = 1.0
            dc = legendre.legder(c)
            for i in range(n):
                vals[i, :, k] = legendre.legval(s[:, i], c)
                ders[i, :, k] = legendre.legval(s[:, i], dc) / half[i]

        indices = sorted(
            (e for e in itertools.product(range(degree + 1), repeat=n) if sum(e) <= degree),
            key=lambda e: (sum(e), e),
        )
        phi = np.ones((len(points), len(indices)))
        grad = np.ones((len(points), len(indices), n))
        for a, e in enumerate(indices):
            for i in range(n):
                phi[:, a] *= vals[i, :, e[i]]
                for l in range(n):
                    grad[:, a, l] *= ders[i, :, e[i]] if i == l else vals[i, :, e[i]]
        return phi, grad

    def _solve(self, A: np.ndarray, M: np.ndarray, k: int, degree: int) -> tuple[np.ndarray, float]:
        condition = float(np.linalg.cond(M))
        if condition > self.gram_cond_max:
            raise IllConditionedGram(condition, degree)
        count = min(k, len(M) - 1)
        values = scipy.linalg.eigh(A, M, eigvals_only=True, subset_by_index=[0, count])
        return values[1:], condition

    def _ritz(self, g: SymplecticPotential, k: int, degree: int, rule_degree: int):
        rule = polytope_rule(g.polytope, rule_degree)
        phi, grad = self._ritz_basis(g.polytope, degree, rule.points)
        Ginv = self.inverse_metric(g, rule.points)
        w = rule.weights
        M = np.einsum("q,qa,qb->ab", w, phi, phi)
        A = np.einsum("q,qai,qij,qbj->ab", w, grad, Ginv, grad)
        A = 0.5 * (A + A.T)
        values, condition = self._solve(A, M, k, degree)
        constant_residual = float(np.linalg.norm(A[:, 0]))
        return values, condition, constant_residual, len(phi[0]), rule.size

    # 1D finite elements

    def _fem_matrices(self, a: float, b: float, cells: int, coefficient: Callable[[np.ndarray], np.ndarray]):
        size = 2 * cells + 1
        A = np.zeros((size, size))
        M = np.zeros((size, size))
        edges = np.linspace(a, b, cells + 1)
        s_ref, _ = np.polynomial.legendre.leggauss(3)
        shape = np.stack([s_ref * (s_ref - 1) / 2, 1 - s_ref ** 2, s_ref * (s_ref + 1) / 2])
        dshape = np.stack([s_ref - 0.5, -2 * s_ref, s_ref + 0.5])
        nodes, weights = zip(*(interval_gauss3(edges[c], edges[c + 1]) for c in range(cells)))
        coeff = coefficient(np.concatenate(nodes)).reshape(cells, 3)
        for c in range(cells):
            h = edges[c + 1] - edges[c]
            w = weights[c]
            dphi = dshape * (2 / h)
            idx = slice(2 * c, 2 * c + 3)
            M[idx, idx] += np.einsum("q,aq,bq->ab", w, shape, shape)
            A[idx, idx] += np.einsum("q,q,aq,bq->ab", w, coeff[c], dphi, dphi)
        return A, M

    def fem_spectrum(self, a: float, b: float, coefficient: Callable[[np.ndarray], np.ndarray],
                     k: int, method: Fem1DConfig = Fem1DConfig()) -> SpectrumResult:
        """Eigenvalues of -(c(x) psi')' on [a, b] with natural boundary conditions"""
        history = []
        condition = 0.0
        residual = 0.0
        for cells in (max(2, method.cells // 2), method.cells):
            A, M = self._fem_matrices(a, b, cells, coefficient)
            values, condition = self._solve(A, M, k, cells)
            residual = float(np.linalg.norm(A.sum(axis=1)))
            history.append((cells, tuple(float(v) for v in values)))
        result = self._result(history, method.to_dict(), condition, residual)
        logger.info(f"FEM spectrum with {method.cells} cells: {np.round(result.eigenvalues, 6).tolist()}")
        return result

    def _result(self, history, method: dict, condition: float, residual: float) -> SpectrumResult:
        final = np.array(history[-1][1])
        if len(history) > 1:
            previous = np.array(history[-2][1])
            converged = tuple(
                bool(i < len(previous) and abs(final[i] - previous[i]) <= self.convergence_rtol * abs(final[i]))
                for i in range(len(final))
            )
        else:
            converged = (False,) * len(final)
        if not all(converged):
            logger.warning(f"Eigenvalues not converged under refinement: {converged}")
        return SpectrumResult(
            eigenvalues=final,
            method=method,
            gram_condition=condition,
            converged=converged,
            history=tuple(history),
            constant_mode_residual=residual,
        )

    def invariant_spectrum(self, g: SymplecticPotential, k: int,
                           method: Optional[SpectrumMethod] = None) -> SpectrumResult:
        """lambda_1..lambda_k; the constant mode lambda_0 = 0 is dropped"""
        if k < 1:
            raise ValueError("k must be at least 1")
        P = g.polytope
        if method is None:
            method = Fem1DConfig(self.fem_cells) if P.dim == 1 else RitzConfig(self.ritz_degree)

        if isinstance(method, Fem1DConfig):
            if P.dim != 1:
                raise ValueError("finite elements are available for one-dimensional polytopes only")
            lo, hi = P.bounding_box

            def coefficient(xs: np.ndarray) -> np.ndarray:
                return self.inverse_metric(g, xs.reshape(-1, 1))[:, 0, 0]

            return self.fem_spectrum(float(lo[0]), float(hi[0]), coefficient, k, method)

        first = method.degree - 1 if method.history_from is None else method.history_from
        first = max(1, min(first, method.degree))
        history = []
        condition = 0.0
        residual = 0.0
        size = points = 0
        for degree in range(first, method.degree + 1):
            if math.comb(degree + P.dim, P.dim) - 1 < k:
                continue
            values, condition, residual, size, points = self._ritz(g, k, degree, method.rule_degree)
            history.append((degree, tuple(float(v) for v in values)))
        if not history:
            raise ValueError(f"degree {method.degree} spans fewer than {k + 1} trial functions")
        info = {**method.to_dict(), "basis_size": size, "quadrature_points": points}
        result = self._result(history, info, condition, residual)
        logger.info(f"Ritz spectrum of {g.label} at degree {method.degree}: {np.round(result.eigenvalues, 6).tolist()}")
        return result

    # Bounds and invariance checks

    def bessel_bounds(self, max_j: int) -> list[BesselBound]:
        """
        xi_j is the ((j+1)/2)-th zero of J_0 for odd j and the (j/2)-th positive
        zero of J_0' = -J_1 for even j; the bound is xi_j^2 / 2.
        """
        if max_j < 1:
            raise ValueError("max_j must be at least 1")
        bounds = []
        for j in range(1, max_j + 1):
            if j % 2:
                m = (j + 1) // 2
                f, guess = j0, (m - 0.25) * math.pi
            else:
                m = j // 2
                f, guess = j1, (m + 0.25) * math.pi
            # McMahon estimate; zeros are about pi apart
            xi = brentq(f, guess - 0.6, guess + 0.6, xtol=1e-14)
            bounds.append(BesselBound(j, float(xi), float(xi * xi / 2)))
        return bounds

    def spectral_invariance_check(self, P: DelzantPolytope, A, k: int,
                                  method: Optional[RitzConfig] = None,
                                  tolerance: float = 1e-3) -> SpectralInvarianceReport:
        """Canonical spectra of P and A(P) at matched trial spaces"""
        method = method or RitzConfig(self.ritz_degree)
        original = self.invariant_spectrum(potential_service.canonical_potential(P), k, method)
        image = polytope_service.sl_transform(P, A)
        transformed = self.invariant_spectrum(potential_service.canonical_potential(image), k, method)
        diff = np.abs(original.eigenvalues - transformed.eigenvalues) / np.maximum(np.abs(original.eigenvalues), 1e-300)
        report = SpectralInvarianceReport(original, transformed, float(diff.max()), tolerance)
        logger.info(f"Spectral invariance under {np.asarray(A).tolist()}: max relative difference {report.max_relative_difference:.2e}")
        return report

    # Spheroids

    def ellipsoid_coefficient(self, ratio: float) -> Callable[[np.ndarray], np.ndarray]:
        """
        G^-1 on [-1, 1] for the spheroid r^2 + z^2/ratio^2 = 1, rescaled to the
        area of the unit sphere. Along the axis dx/dz = sqrt(1 - kappa z^2),
        kappa = (ratio^2 - 1) / ratio^4, and G^-1 = r^2.
        """
        c = float(ratio)
        if c <= 0:
            raise ValueError("axis ratio must be positive")
        kappa = (c * c - 1) / c ** 4

        def moment(z: float) -> float:
            root = math.sqrt(1 - kappa * z * z)
            if kappa > 0:
                q = math.sqrt(kappa)
                return 0.5 * (z * root + math.asin(q * z) / q)
            if kappa < 0:
                q = math.sqrt(-kappa)
                return 0.5 * (z * root + math.asinh(q * z) / q)
            return z

        scale = 2.0 / (2 * moment(c))

        def coefficient(xs: np.ndarray) -> np.ndarray:
            out = np.empty(len(xs))
            for i, x in enumerate(xs):
                z = brentq(lambda t: scale * moment(t) - x, -c, c, xtol=1e-14)
                out[i] = scale * (1 - z * z / (c * c))
            return out

        return coefficient

    def ellipsoid_spectrum(self, ratio: float, k: int, method: Fem1DConfig = Fem1DConfig()) -> SpectrumResult:
        return self.fem_spectrum(-1.0, 1.0, self.ellipsoid_coefficient(ratio), k, method)


# Singleton instance
spectrum_service = SpectrumService()
