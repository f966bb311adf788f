from toric.services.polytope_service import polytope_service, PolytopeService
from toric.services.potential_service import potential_service, PotentialService
from toric.services.geometry_service import geometry_service, GeometryService
from toric.services.spectrum_service import spectrum_service, SpectrumService
from toric.services.cohomology_service import cohomology_service, CohomologyService

__all__ = [
    'polytope_service', 'PolytopeService',
    'potential_service', 'PotentialService',
    'geometry_service', 'GeometryService',
    'spectrum_service', 'SpectrumService',
    'cohomology_service', 'CohomologyService',
]
