import logging
from typing import Optional

import numpy as np

from toric.config import config
from toric.errors import DegenerateForm, NoConvergence
from toric.models.correction import CorrectionTerm, ZeroCorrection
from toric.models.jets import PotentialJet
from toric.models.metric import metric_from_jet
from toric.models.polytope import DelzantPolytope
from toric.models.potential import LegendreField, SymplecticPotential, interior_values
from toric.models.reports import BoundarySequence, PerturbationResult, ValidityReport
from toric.utils.sampling import (
    SamplingConfig,
    boundary_levels,
    facet_approach,
    interior_samples,
    vertex_approach,
)

logger = logging.getLogger(__name__)

# ell at which the transported potential is compared with g_P near each facet
BOUNDARY_STEP = 2.0 ** -12


class PotentialService:
    """Symplectic potentials g = g_P + h: jets, validation, Legendre duality"""

    def __init__(self):
        self.eps_boundary = config.eps_boundary
        self.newton_tol = config.newton_tol
        self.newton_max_iters = config.newton_max_iters

    def canonical_potential(self, P: DelzantPolytope) -> SymplecticPotential:
        return SymplecticPotential(P, ZeroCorrection(), label=f"canonical:{P.name}" if P.name else "canonical")

    def eval_jet(self, g: SymplecticPotential, x, order: int = 2) -> PotentialJet:
        if not 0 <= order <= 4:
            raise ValueError(f"jet order must be in 0..4, got {order}")
        return g.jet(x, order, self.eps_boundary)

    def add_correction(self, g: SymplecticPotential, h: CorrectionTerm, label: Optional[str] = None) -> SymplecticPotential:
        if label is None:
            label = g.label if h.is_zero() else f"{g.label}+{h.kind}"
        return SymplecticPotential(g.polytope, g.correction + h, label=label)

    # Validity

    def _boundary_sequence(self, g: SymplecticPotential, kind: str, index: int,
                           points: np.ndarray, levels: np.ndarray) -> BoundarySequence:
        P = g.polytope
        ratios = np.empty(len(points))
        norms = np.empty(len(points))
        for i, p in enumerate(points):
            G = self.eval_jet(g, p, 2).hessian
            ratios[i] = np.linalg.det(G) * np.prod(P.ell(p))
            # singular Hessians show up as det = 0 in the report
            Ginv = np.linalg.pinv(G)
            norms[i] = np.linalg.norm(Ginv @ P.normals[index]) if kind == "facet" else np.linalg.norm(Ginv)
        extrapolated = 2 * ratios[-1] - ratios[-2] if len(ratios) > 1 else ratios[-1]
        return BoundarySequence(kind, index, levels, ratios, float(extrapolated), norms)

    def validate_potential(self, g: SymplecticPotential, sampling: SamplingConfig = SamplingConfig()) -> ValidityReport:
        """
        Positivity of Hess g on interior samples and boundedness of
        det(Hess g) * prod ell_r along sequences ell = 2^-k toward every facet and vertex.
        Failures are report entries.
        """
        P = g.polytope
        samples = interior_samples(P, sampling)
        min_eig = np.inf
        for x in samples:
            min_eig = min(min_eig, float(np.linalg.eigvalsh(self.eval_jet(g, x, 2).hessian)[0]))

        levels = boundary_levels(sampling)
        sequences = []
        for r in range(P.num_facets):
            sequences.append(self._boundary_sequence(g, "facet", r, facet_approach(P, r, levels), levels))
        for v in range(len(P.vertices)):
            sequences.append(self._boundary_sequence(g, "vertex", v, vertex_approach(P, v, levels), levels))

        values = np.concatenate([np.append(s.ratios, s.extrapolated) for s in sequences])
        c_min = float(values.min())
        c_max = float(values.max())
        settled = all(
            abs(s.ratios[-1] - s.ratios[-2]) <= 1e-2 * max(1.0, abs(s.ratios[-1]))
            for s in sequences
        )
        boundary_bounded = bool(np.all(np.isfinite(values)) and c_min > 0 and settled)
        kernel_law = all(s.kernel_norms[-1] <= 1e-3 * s.kernel_norms[0] for s in sequences)

        report = ValidityReport(
            label=g.label,
            min_eigenvalue=min_eig,
            interior_samples=len(samples),
            sequences=tuple(sequences),
            c_min=c_min,
            c_max=c_max,
            positive_definite=min_eig > 0,
            boundary_bounded=boundary_bounded,
            kernel_law=kernel_law,
        )
        if report.passed:
            logger.info(f"Potential {g.label} valid: min eigenvalue {min_eig:.3e}, ratio band [{c_min:.4g}, {c_max:.4g}]")
        else:
            logger.warning(f"Potential {g.label} failed validation (positive_definite={report.positive_definite}, "
                           f"boundary_bounded={boundary_bounded})")
        return report

    # Legendre duality

    def legendre_value(self, g: SymplecticPotential, x) -> float:
        """f_g(x) = <x, dg/dx> - g(x)"""
        return LegendreField(g, self.eps_boundary).jet(x, 0).value

    def legendre_decomposition(self, P: DelzantPolytope, x) -> dict:
        """f_{g_P} = 1/2 sum lambda_r log ell_r + 1/2 ell_inf, ell_inf(x) = sum <x, mu_r>"""
        x = np.asarray(x, dtype=float)
        g = self.canonical_potential(P)
        ell = interior_values(P, x, self.eps_boundary)
        log_part = 0.5 * float(P.offsets @ np.log(ell))
        linear_part = 0.5 * float(P.normals.sum(axis=0) @ x)
        return {
            "log_part": log_part,
            "linear_part": linear_part,
            "total": log_part + linear_part,
            "direct": self.legendre_value(g, x),
        }

    def moment_map(self, g: SymplecticPotential, x) -> np.ndarray:
        """u = dg/dx"""
        return self.eval_jet(g, x, 1).gradient

    def _interior_step(self, P: DelzantPolytope, x: np.ndarray, step: np.ndarray, accept) -> Optional[np.ndarray]:
        t = 1.0
        while t > 1e-16:
            trial = x + t * step
            if P.contains(trial, self.eps_boundary) and accept(trial, t):
                return trial
            t *= 0.5
        return None

    def moment_map_inverse(self, g: SymplecticPotential, u, x0=None) -> np.ndarray:
        """
        Damped Newton on dg/dx = u, i.e. minimisation of g(x) - <u, x>,
        with backtracking that keeps every iterate inside P.
        """
        P = g.polytope
        u = np.asarray(u, dtype=float)
        x = P.centroid.copy() if x0 is None else np.asarray(x0, dtype=float)

        def objective(jet: PotentialJet) -> float:
            return jet.value - float(u @ jet.point)

        jet = self.eval_jet(g, x, 2)
        residual = jet.gradient - u
        for iteration in range(self.newton_max_iters):
            norm = float(np.linalg.norm(residual))
            if norm <= self.newton_tol:
                logger.debug(f"Moment map inverted in {iteration} Newton steps")
                return x
            step = -np.linalg.solve(jet.hessian, residual)
            slope = float(residual @ step)
            phi = objective(jet)

            def accept(trial, t):
                trial_jet = self.eval_jet(g, trial, 1)
                decrease = objective(trial_jet) <= phi + 1e-4 * t * slope
                return decrease or np.linalg.norm(trial_jet.gradient - u) < norm

            nxt = self._interior_step(P, x, step, accept)
            if nxt is None:
                break
            x = nxt
            jet = self.eval_jet(g, x, 2)
            residual = jet.gradient - u

        if np.linalg.norm(residual) <= self.newton_tol:
            return x
        raise NoConvergence(self.newton_max_iters, {
            "residual": float(np.linalg.norm(residual)),
            "last_iterate": x.tolist(),
        })

    # Perturbation transport

    def kahler_perturbation(self, P: DelzantPolytope, f_J: CorrectionTerm,
                            sampling: SamplingConfig = SamplingConfig()) -> PerturbationResult:
        """
        x~ = x + G_P^-1 df_J/dx and the potential of the perturbed structure,
            g(x~) = <x~, dg_P/dx(x)> - f_P(x) - f_J(x),   x = phi~^-1(x~).
        Raises DegenerateForm when d(phi~) G_P^-1 is not positive definite at a sample.
        """
        g_P = self.canonical_potential(P)

        def transport(x: np.ndarray):
            metric = metric_from_jet(self.eval_jet(g_P, x, 3))
            f = f_J.jet(x, 2)
            x_new = x + metric.Ginv @ f.gradient
            jac = (np.eye(P.dim)
                   + np.einsum("jkl,l->kj", metric.dGinv, f.gradient)
                   + metric.Ginv @ f.hessian)
            return x_new, jac, metric

        def map_eval(x) -> np.ndarray:
            return transport(np.asarray(x, dtype=float))[0]

        def inverse_map(x_tilde) -> np.ndarray:
            target = np.asarray(x_tilde, dtype=float)
            x = target.copy() if P.contains(target, self.eps_boundary) else P.centroid.copy()
            for _ in range(self.newton_max_iters):
                image, jac, _ = transport(x)
                residual = image - target
                norm = float(np.linalg.norm(residual))
                if norm <= self.newton_tol:
                    return x
                step = -np.linalg.solve(jac, residual)
                nxt = self._interior_step(
                    P, x, step,
                    lambda trial, t: np.linalg.norm(map_eval(trial) - target) < norm,
                )
                if nxt is None:
                    break
                x = nxt
            residual = float(np.linalg.norm(map_eval(x) - target))
            if residual <= self.newton_tol:
                return x
            raise NoConvergence(self.newton_max_iters, {"residual": residual, "last_iterate": x.tolist()})

        def value_at(x: np.ndarray, x_tilde: np.ndarray) -> float:
            g = self.eval_jet(g_P, x, 1)
            f_P = float(x @ g.gradient) - g.value
            return float(x_tilde @ g.gradient) - f_P - f_J.jet(x, 0).value

        def corrected_potential_eval(x_tilde) -> float:
            x_tilde = np.asarray(x_tilde, dtype=float)
            return value_at(inverse_map(x_tilde), x_tilde)

        samples = interior_samples(P, sampling)
        min_form = np.inf
        max_asym = 0.0
        min_det = np.inf
        for x in samples:
            _, jac, metric = transport(x)
            form = jac @ metric.Ginv
            max_asym = max(max_asym, float(np.abs(form - form.T).max()))
            lowest = float(np.linalg.eigvalsh(0.5 * (form + form.T))[0])
            if lowest <= 0:
                raise DegenerateForm(x, lowest)
            min_form = min(min_form, lowest)
            min_det = min(min_det, float(np.linalg.det(jac)))

        # g(x~) - g_P(x~) close to each facet
        boundary = []
        for r in range(P.num_facets):
            x = facet_approach(P, r, np.array([BOUNDARY_STEP]))[0]
            x_tilde = map_eval(x)
            if not P.contains(x_tilde, self.eps_boundary):
                continue
            boundary.append(value_at(x, x_tilde) - self.eval_jet(g_P, x_tilde, 0).value)

        # d g / d x~ must equal u = dg_P/dx(x): transported potential is the Legendre dual
        drift = 0.0
        h = 1e-5
        for x in samples[:4]:
            x_tilde = map_eval(x)
            u = self.moment_map(g_P, x)
            grad = np.empty(P.dim)
            for i in range(P.dim):
                e = np.zeros(P.dim)
                e[i] = h
                grad[i] = (corrected_potential_eval(x_tilde + e) - corrected_potential_eval(x_tilde - e)) / (2 * h)
            drift = max(drift, float(np.abs(grad - u).max()))

        logger.info(f"Perturbation transport on {len(samples)} samples: min form eigenvalue {min_form:.3e}, "
                    f"asymmetry {max_asym:.2e}, drift {drift:.2e}")
        return PerturbationResult(
            map_eval=map_eval,
            inverse_map=inverse_map,
            corrected_potential_eval=corrected_potential_eval,
            min_form_eigenvalue=min_form,
            max_asymmetry=max_asym,
            min_jacobian_det=min_det,
            boundary_correction=tuple(boundary),
            constant_drift=drift,
        )


# Singleton instance
potential_service = PotentialService()
