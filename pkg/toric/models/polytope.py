from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

import numpy as np

# Report marker for face numbers above the enumerated dimension
NOT_COMPUTED = "not_computed"


@dataclass(frozen=True)
class Facet:
    """One defining inequality ell(x) = <x, normal> - offset >= 0"""
    normal: tuple[int, ...]
    offset: Fraction

    def ell(self, x) -> Fraction:
        """Exact value of the affine function at a rational point"""
        return sum((Fraction(a) * b for a, b in zip(self.normal, x)), Fraction(0)) - self.offset

    def to_dict(self) -> dict:
        return {"normal": list(self.normal), "offset": str(self.offset)}


@dataclass(frozen=True)
class Vertex:
    """Vertex keyed by the indices of the facets through it"""
    point: tuple[Fraction, ...]
    active: frozenset[int]

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.active))

    def to_dict(self) -> dict:
        return {"point": [str(c) for c in self.point], "facets": list(self.key)}


@dataclass(frozen=True)
class FVector:
    """Face counts f_0..f_n; None marks a dimension that was not computed"""
    counts: tuple[Optional[int], ...]

    @property
    def complete(self) -> bool:
        return all(c is not None for c in self.counts)

    def euler_characteristic(self) -> Optional[int]:
        if not self.complete:
            return None
        return sum((-1) ** j * c for j, c in enumerate(self.counts))

    def to_list(self) -> list:
        return [NOT_COMPUTED if c is None else c for c in self.counts]


@dataclass(frozen=True)
class DelzantPolytope:
    """
    P = {x : <x, mu_r> - lambda_r >= 0 for all r}, validated and with its
    vertices enumerated. Instances come from PolytopeService.build_polytope.
    """
    dim: int
    facets: tuple[Facet, ...]
    vertices: tuple[Vertex, ...]
    name: Optional[str] = field(default=None, compare=False)

    @property
    def num_facets(self) -> int:
        return len(self.facets)

    @cached_property
    def normals(self) -> np.ndarray:
        """d x n float matrix of facet normals"""
        return np.array([f.normal for f in self.facets], dtype=float)

    @cached_property
    def offsets(self) -> np.ndarray:
        return np.array([float(f.offset) for f in self.facets], dtype=float)

    @cached_property
    def vertex_array(self) -> np.ndarray:
        return np.array([[float(c) for c in v.point] for v in self.vertices], dtype=float)

    @cached_property
    def centroid(self) -> np.ndarray:
        """Average of the vertices (an interior point)"""
        return self.vertex_array.mean(axis=0)

    @cached_property
    def diameter(self) -> float:
        pts = self.vertex_array
        diffs = pts[:, None, :] - pts[None, :, :]
        return float(np.sqrt((diffs ** 2).sum(axis=-1)).max())

    @cached_property
    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        pts = self.vertex_array
        return pts.min(axis=0), pts.max(axis=0)

    def ell(self, x) -> np.ndarray:
        """Values of all ell_r at a float point"""
        return self.normals @ np.asarray(x, dtype=float) - self.offsets

    def contains(self, x, margin: float = 0.0) -> bool:
        return bool(np.all(self.ell(x) > margin))

    def facet_vertex_ids(self, r: int) -> list[int]:
        return [i for i, v in enumerate(self.vertices) if r in v.active]

    def face_vertex_ids(self, facet_set) -> list[int]:
        """Vertices of the face cut out by a set of facets (empty if they do not meet)"""
        s = frozenset(facet_set)
        return [i for i, v in enumerate(self.vertices) if s <= v.active]

    def facet_centroid(self, r: int) -> np.ndarray:
        return self.vertex_array[self.facet_vertex_ids(r)].mean(axis=0)

    def to_dict(self) -> dict:
        """Polytope JSON document"""
        doc = {
            "dim": self.dim,
            "facets": [f.to_dict() for f in self.facets],
        }
        if self.name:
            doc["name"] = self.name
        return doc
