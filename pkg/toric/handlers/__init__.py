from toric.handlers import polytope, geometry, spectrum, cohomology

__all__ = ['polytope', 'geometry', 'spectrum', 'cohomology']
