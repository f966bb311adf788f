from dataclasses import dataclass, field

import numpy as np

from toric.errors import BoundaryPoint, OutsidePolytope
from toric.models.correction import CorrectionTerm, ZeroCorrection
from toric.models.jets import PotentialJet, rank_one_jet
from toric.models.polytope import DelzantPolytope


def interior_values(polytope: DelzantPolytope, x: np.ndarray, eps_boundary: float) -> np.ndarray:
    """ell_r(x) for all r, raising if x is outside or too close to a facet"""
    ell = polytope.ell(x)
    r = int(np.argmin(ell))
    if ell[r] < 0:
        raise OutsidePolytope(r, float(ell[r]))
    if ell[r] <= eps_boundary:
        raise BoundaryPoint(r, float(ell[r]))
    return ell


def canonical_jet(polytope: DelzantPolytope, x: np.ndarray, order: int, ell: np.ndarray) -> PotentialJet:
    """
    Closed-form jet of g_P = 1/2 sum ell_r log ell_r. Each facet contributes
    phi^(k)(ell_r) mu_r^{(x)k} with phi(s) = s log s / 2.
    """
    N = polytope.normals
    log_ell = np.log(ell)
    value = 0.5 * float(ell @ log_ell)
    parts: list = [value, None, None, None, None]
    if order >= 1:
        parts[1] = N.T @ (0.5 * (log_ell + 1.0))
    if order >= 2:
        parts[2] = np.einsum("r,ri,rj->ij", 0.5 / ell, N, N)
    if order >= 3:
        parts[3] = np.einsum("r,ri,rj,rk->ijk", -0.5 / ell ** 2, N, N, N)
    if order >= 4:
        parts[4] = np.einsum("r,ri,rj,rk,rl->ijkl", 1.0 / ell ** 3, N, N, N, N)
    return PotentialJet(np.asarray(x, dtype=float), order, *parts)


@dataclass(frozen=True)
class SymplecticPotential:
    """g = g_P + h on the interior of a Delzant polytope"""
    polytope: DelzantPolytope
    correction: CorrectionTerm = field(default_factory=ZeroCorrection)
    label: str = "canonical"

    @property
    def dim(self) -> int:
        return self.polytope.dim

    @property
    def is_canonical(self) -> bool:
        return self.correction.is_zero()

    def jet(self, x, order: int = 2, eps_boundary: float = 1e-12) -> PotentialJet:
        x = np.asarray(x, dtype=float)
        ell = interior_values(self.polytope, x, eps_boundary)
        jet = canonical_jet(self.polytope, x, order, ell)
        if self.correction.is_zero():
            return jet
        return jet + self.correction.jet(x, order)


@dataclass(frozen=True)
class LogFacetField:
    """nu_r = log ell_r, the generating potential of the r-th facet"""
    polytope: DelzantPolytope
    r: int

    def jet(self, x, order: int = 2) -> PotentialJet:
        x = np.asarray(x, dtype=float)
        ell = float(self.polytope.ell(x)[self.r])
        derivs = [np.log(ell), 1 / ell, -1 / ell ** 2, 2 / ell ** 3, -6 / ell ** 4]
        return rank_one_jet(x, order, derivs, self.polytope.normals[self.r])


@dataclass(frozen=True)
class LinearField:
    """nu(x) = <c, x> + constant"""
    coefficients: tuple[float, ...]
    constant: float = 0.0

    def jet(self, x, order: int = 2) -> PotentialJet:
        x = np.asarray(x, dtype=float)
        c = np.asarray(self.coefficients, dtype=float)
        zero = PotentialJet.zero(x, order)
        return PotentialJet(x, order, float(c @ x) + self.constant,
                            c if order >= 1 else None, zero.hessian, zero.third, zero.fourth)


@dataclass(frozen=True)
class LegendreField:
    """f_g(x) = sum x_m dg/dx_m - g, supported through order 3"""
    potential: SymplecticPotential
    eps_boundary: float = 1e-12

    def jet(self, x, order: int = 2) -> PotentialJet:
        if order > 3:
            raise ValueError("LegendreField jets are available through order 3")
        x = np.asarray(x, dtype=float)
        g = self.potential.jet(x, order + 1, self.eps_boundary)
        parts: list = [float(x @ g.gradient - g.value), None, None, None, None]
        if order >= 1:
            parts[1] = g.hessian @ x
        if order >= 2:
            parts[2] = g.hessian + np.einsum("m,mjk->jk", x, g.third)
        if order >= 3:
            parts[3] = 2 * g.third + np.einsum("m,mijk->ijk", x, g.fourth)
        return PotentialJet(x, order, *parts)
