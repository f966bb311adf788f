from typing import Optional


class ToricError(Exception):
    """Base error for every failure raised by the toric package"""


# Polytope construction

class PolytopeError(ToricError):
    """Input does not describe a Delzant polytope"""


class NonPrimitiveNormal(PolytopeError):
    def __init__(self, r: int, normal):
        self.r = r
        self.normal = tuple(normal)
        super().__init__(f"facet {r}: normal {self.normal} is zero or not primitive")


class Unbounded(PolytopeError):
    def __init__(self, reason: str = "facet normals do not positively span R^n"):
        super().__init__(f"polytope is unbounded: {reason}")


class EmptyInterior(PolytopeError):
    def __init__(self, reason: str = "no point satisfies all inequalities strictly"):
        super().__init__(f"polytope has empty interior: {reason}")


class NonSimpleVertex(PolytopeError):
    def __init__(self, vertex, active):
        self.vertex = tuple(vertex)
        self.active = tuple(sorted(active))
        super().__init__(f"vertex {_fmt(self.vertex)} lies on facets {self.active}, expected exactly n")


class NonUnimodularVertex(PolytopeError):
    def __init__(self, vertex, active, det):
        self.vertex = tuple(vertex)
        self.active = tuple(sorted(active))
        self.det = det
        super().__init__(f"vertex {_fmt(self.vertex)}: normals of facets {self.active} have determinant {det}")


class RedundantFacet(PolytopeError):
    def __init__(self, r: int):
        self.r = r
        super().__init__(f"facet {r} does not cut a codimension-one face")


class NotUnimodular(PolytopeError):
    def __init__(self, det):
        self.det = det
        super().__init__(f"transformation has determinant {det}, expected 1")


# Pointwise evaluation

class PointError(ToricError):
    def __init__(self, message: str, r: int, value: float):
        self.r = r
        self.value = value
        super().__init__(message)


class BoundaryPoint(PointError):
    def __init__(self, r: int, value: float):
        super().__init__(f"point is on or too close to facet {r} (ell = {value:.3e})", r, value)


class OutsidePolytope(PointError):
    def __init__(self, r: int, value: float):
        super().__init__(f"point violates facet {r} (ell = {value:.3e})", r, value)


class NotPositiveDefinite(ToricError):
    def __init__(self, x, min_eigenvalue: float):
        self.x = tuple(float(v) for v in x)
        self.min_eigenvalue = min_eigenvalue
        super().__init__(f"Hessian not positive definite at {self.x} (min eigenvalue {min_eigenvalue:.3e})")


class DegenerateForm(ToricError):
    def __init__(self, x, min_eigenvalue: float):
        self.x = tuple(float(v) for v in x)
        self.min_eigenvalue = min_eigenvalue
        super().__init__(f"perturbed form degenerates at {self.x} (min eigenvalue {min_eigenvalue:.3e})")


class NoConvergence(ToricError):
    def __init__(self, max_iters: int, diagnostics: Optional[dict] = None):
        self.max_iters = max_iters
        self.diagnostics = diagnostics or {}
        super().__init__(f"no convergence after {max_iters} iterations: {self.diagnostics}")


# Spectrum

class ZeroFunction(ToricError):
    def __init__(self):
        super().__init__("trial function has zero L2 norm")


class IllConditionedGram(ToricError):
    def __init__(self, condition: float, degree: int):
        self.condition = condition
        self.degree = degree
        super().__init__(f"mass Gram condition {condition:.3e} at degree {degree}; reduce the degree")


# Input documents

class InputError(ToricError):
    """Input file could not be read against its schema"""


class ParseError(InputError):
    def __init__(self, path: str, line: int, detail: str = ""):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {detail}" if detail else f"{path}:{line}: parse error")


class SchemaViolation(InputError):
    def __init__(self, field: str, detail: str = ""):
        self.field = field
        super().__init__(f"schema violation at '{field}': {detail}" if detail else f"schema violation at '{field}'")


def _fmt(point) -> str:
    return "(" + ", ".join(str(c) for c in point) + ")"
