from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
import sympy

from toric.models.polytope import NOT_COMPUTED


def _floats(values) -> list:
    return [float(v) for v in np.asarray(values, dtype=float).ravel()]


@dataclass(frozen=True)
class HardLefschetzReport:
    """Each flag is None when it depends on h-numbers that were not computed"""
    h: tuple[Optional[int], ...]
    symmetric: Optional[bool]
    unimodal_lower_half: Optional[bool]

    @property
    def passed(self) -> Optional[bool]:
        flags = (self.symmetric, self.unimodal_lower_half)
        if False in flags:
            return False
        return None if None in flags else True

    def to_dict(self) -> dict:
        def show(flag):
            return NOT_COMPUTED if flag is None else flag

        return {
            "h": [show(c) for c in self.h],
            "symmetric": show(self.symmetric),
            "unimodal_lower_half": show(self.unimodal_lower_half),
            "passed": show(self.passed),
        }


@dataclass(frozen=True, eq=False)
class BoundarySequence:
    """det(G) * prod(ell) and |G^-1 mu| along points approaching a facet or vertex"""
    kind: str
    index: int
    ell: np.ndarray
    ratios: np.ndarray
    extrapolated: float
    kernel_norms: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        doc = {
            "kind": self.kind,
            "index": self.index,
            "ell": _floats(self.ell),
            "ratio": _floats(self.ratios),
            "extrapolated": float(self.extrapolated),
        }
        if self.kernel_norms is not None:
            doc["kernel_norm"] = _floats(self.kernel_norms)
        return doc


@dataclass(frozen=True, eq=False)
class ValidityReport:
    label: str
    min_eigenvalue: float
    interior_samples: int
    sequences: tuple[BoundarySequence, ...]
    c_min: float
    c_max: float
    positive_definite: bool
    boundary_bounded: bool
    kernel_law: bool

    @property
    def passed(self) -> bool:
        return self.positive_definite and self.boundary_bounded

    def to_dict(self) -> dict:
        return {
            "potential": self.label,
            "passed": self.passed,
            "positive_definite": self.positive_definite,
            "min_hessian_eigenvalue": float(self.min_eigenvalue),
            "interior_samples": self.interior_samples,
            "boundary_bounded": self.boundary_bounded,
            "kernel_law": self.kernel_law,
            "c_min": float(self.c_min),
            "c_max": float(self.c_max),
            "sequences": [s.to_dict() for s in self.sequences],
        }


@dataclass(frozen=True, eq=False)
class MetricSample:
    point: np.ndarray
    G: np.ndarray
    Ginv: np.ndarray
    detG: float
    dGinv: Optional[np.ndarray]
    d2Ginv: Optional[np.ndarray]


@dataclass(frozen=True, eq=False)
class ExtremalityReport:
    constant: float
    gradient: np.ndarray
    residual_sup: float
    samples: int
    tolerance: float
    scalar_range: tuple[float, float]

    @property
    def is_extremal(self) -> bool:
        return self.residual_sup <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "fit": {"constant": float(self.constant), "gradient": _floats(self.gradient)},
            "residual_sup": float(self.residual_sup),
            "samples": self.samples,
            "tolerance": self.tolerance,
            "scalar_min": float(self.scalar_range[0]),
            "scalar_max": float(self.scalar_range[1]),
            "is_extremal": self.is_extremal,
        }


@dataclass(frozen=True, eq=False)
class PerturbationResult:
    """Coordinate change x -> x + G_P^-1 df_J/dx and the transported potential"""
    map_eval: Callable[[np.ndarray], np.ndarray]
    inverse_map: Callable[[np.ndarray], np.ndarray]
    corrected_potential_eval: Callable[[np.ndarray], float]
    min_form_eigenvalue: float
    max_asymmetry: float
    min_jacobian_det: float
    boundary_correction: tuple[float, ...]
    constant_drift: float

    def to_dict(self) -> dict:
        return {
            "min_form_eigenvalue": float(self.min_form_eigenvalue),
            "max_asymmetry": float(self.max_asymmetry),
            "min_jacobian_det": float(self.min_jacobian_det),
            "boundary_correction": _floats(self.boundary_correction),
            "constant_drift": float(self.constant_drift),
        }


@dataclass(frozen=True)
class BesselBound:
    j: int
    xi: float
    bound: float

    def to_dict(self) -> dict:
        return {"j": self.j, "xi": self.xi, "bound": self.bound}


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Invariant eigenvalues lambda_1..lambda_k (the constant mode excluded)"""
    eigenvalues: np.ndarray
    method: dict
    gram_condition: float
    converged: tuple[bool, ...]
    history: tuple[tuple[int, tuple[float, ...]], ...] = ()
    constant_mode_residual: float = 0.0

    def to_dict(self) -> dict:
        return {
            "eigenvalues": _floats(self.eigenvalues),
            "method": self.method,
            "gram_condition": float(self.gram_condition),
            "converged": list(self.converged),
            "constant_mode_residual": float(self.constant_mode_residual),
        }

    def history_rows(self) -> list[list]:
        """(refinement, lambda_1, ..., lambda_k) rows for plotting"""
        return [[level, *values] for level, values in self.history]


@dataclass(frozen=True, eq=False)
class FormCoefficients:
    """Coefficients C of sum C_jk dx_j ^ dy_k at a point"""
    point: np.ndarray
    C: np.ndarray

    def to_dict(self) -> dict:
        return {"point": _floats(self.point), "C": np.asarray(self.C, dtype=float).tolist()}


@dataclass(frozen=True)
class ClassVector:
    """Class in H^2(P) as coefficients over alpha_1..alpha_d, modulo the normals' column space"""
    coefficients: tuple[Fraction, ...]
    kernel_basis: tuple[tuple[int, ...], ...]

    @property
    def kernel_matrix(self) -> sympy.Matrix:
        # d x n, columns span the relations
        return sympy.Matrix(self.kernel_basis)

    def same_class(self, other: "ClassVector") -> bool:
        diff = sympy.Matrix([sympy.Rational(a) - sympy.Rational(b)
                             for a, b in zip(self.coefficients, other.coefficients)])
        K = self.kernel_matrix
        return K.rank() == K.row_join(diff).rank()

    def to_dict(self) -> dict:
        return {
            "coefficients": [str(c) for c in self.coefficients],
            "kernel_basis": [list(row) for row in self.kernel_basis],
        }


@dataclass(frozen=True)
class H2Report:
    dim: int
    rank: int
    kernel_basis: tuple[tuple[int, ...], ...]

    def to_dict(self) -> dict:
        return {"dim": self.dim, "normals_rank": self.rank, "kernel_basis": [list(r) for r in self.kernel_basis]}


@dataclass(frozen=True, eq=False)
class SpectralInvarianceReport:
    original: SpectrumResult
    transformed: SpectrumResult
    max_relative_difference: float
    tolerance: float

    @property
    def agrees(self) -> bool:
        return self.max_relative_difference <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "original": _floats(self.original.eigenvalues),
            "transformed": _floats(self.transformed.eigenvalues),
            "max_relative_difference": float(self.max_relative_difference),
            "tolerance": self.tolerance,
            "agrees": self.agrees,
        }


@dataclass(frozen=True, eq=False)
class HexagonReport:
    extremality: ExtremalityReport
    symmetry_defect: float
    mean_scalar: float = field(default=0.0)

    def to_dict(self) -> dict:
        return {
            "extremality": self.extremality.to_dict(),
            "symmetry_defect": float(self.symmetry_defect),
            "mean_scalar": float(self.mean_scalar),
        }
