from toric.models.polytope import Facet, Vertex, FVector, DelzantPolytope
from toric.models.jets import PotentialJet, ScalarField
from toric.models.correction import (
    CorrectionTerm,
    ZeroCorrection,
    PolynomialCorrection,
    RidgeCorrection,
    RidgeProfile,
    SumCorrection,
    NAMED_CORRECTIONS,
)
from toric.models.potential import SymplecticPotential, LogFacetField, LinearField, LegendreField

__all__ = [
    'Facet', 'Vertex', 'FVector', 'DelzantPolytope',
    'PotentialJet', 'ScalarField',
    'CorrectionTerm', 'ZeroCorrection', 'PolynomialCorrection', 'RidgeCorrection',
    'RidgeProfile', 'SumCorrection', 'NAMED_CORRECTIONS',
    'SymplecticPotential', 'LogFacetField', 'LinearField', 'LegendreField',
]
