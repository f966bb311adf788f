import itertools
import logging
import math
import operator
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np
import sympy
from scipy.optimize import linprog

from toric.config import config
from toric.errors import (
    EmptyInterior,
    NonPrimitiveNormal,
    NonSimpleVertex,
    NonUnimodularVertex,
    NotUnimodular,
    RedundantFacet,
    SchemaViolation,
    Unbounded,
)
from toric.models.fixtures import FIXTURES
from toric.models.polytope import DelzantPolytope, Facet, FVector, Vertex
from toric.models.reports import HardLefschetzReport

logger = logging.getLogger(__name__)


def _to_fraction(value) -> Fraction:
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def _all_pairs(pairs, holds=operator.eq) -> Optional[bool]:
    """False on any violated pair, None if a pair has a missing entry, else True"""
    missing = False
    for a, b in pairs:
        if a is None or b is None:
            missing = True
        elif not holds(a, b):
            return False
    return None if missing else True


class PolytopeService:
    """Exact construction and combinatorics of Delzant polytopes"""

    def __init__(self):
        self.max_face_dim = config.max_face_dim

    def build_polytope(
        self,
        dim: int,
        facets: Iterable[tuple[Sequence[int], object]],
        name: Optional[str] = None
    ) -> DelzantPolytope:
        """Validate the Delzant conditions and enumerate vertices over the rationals"""
        if dim < 1:
            raise SchemaViolation("dim", "must be a positive integer")

        parsed = []
        for r, (normal, offset) in enumerate(facets):
            normal = tuple(int(c) for c in normal)
            if len(normal) != dim:
                raise SchemaViolation(f"facets[{r}].normal", f"expected {dim} entries")
            if math.gcd(*normal) != 1:
                raise NonPrimitiveNormal(r, normal)
            parsed.append(Facet(normal, _to_fraction(offset)))

        if len(parsed) <= dim:
            raise Unbounded(f"{len(parsed)} facets cannot bound a polytope in dimension {dim}")

        normals = sympy.Matrix([list(f.normal) for f in parsed])
        if normals.rank() < dim:
            raise Unbounded("facet normals do not span R^n")
        N = np.array(normals.tolist(), dtype=float)
        self._check_bounded(N)
        self._check_interior(N, np.array([float(f.offset) for f in parsed]))

        vertices = self._enumerate_vertices(dim, parsed)
        for v in vertices:
            if len(v.active) != dim:
                raise NonSimpleVertex(v.point, v.active)
            det = sympy.Matrix([list(parsed[r].normal) for r in v.key]).det()
            if abs(det) != 1:
                raise NonUnimodularVertex(v.point, v.active, int(det))

        for r in range(len(parsed)):
            if sum(1 for v in vertices if r in v.active) < dim:
                raise RedundantFacet(r)

        polytope = DelzantPolytope(dim=dim, facets=tuple(parsed), vertices=tuple(vertices), name=name)
        logger.info(f"Built Delzant polytope {name or ''} (n={dim}, d={len(parsed)}, {len(vertices)} vertices)")
        return polytope

    def _check_bounded(self, N: np.ndarray):
        # Recession cone {y : N y >= 0}; with full rank it is {0} iff max sum(N y) over the box is 0
        n = N.shape[1]
        res = linprog(
            c=-N.sum(axis=0),
            A_ub=-N,
            b_ub=np.zeros(N.shape[0]),
            bounds=[(-1, 1)] * n,
            method="highs",
        )
        if res.status == 0 and -res.fun > 1e-9:
            raise Unbounded(f"recession direction {np.round(res.x, 6).tolist()}")

    def _check_interior(self, N: np.ndarray, offsets: np.ndarray):
        # Chebyshev centre: max t s.t. ell_r(x) >= |mu_r| t; the interior is nonempty iff t > 0
        n = N.shape[1]
        res = linprog(
            c=np.r_[np.zeros(n), -1.0],
            A_ub=np.c_[-N, np.linalg.norm(N, axis=1)],
            b_ub=-offsets,
            bounds=[(None, None)] * n + [(0, None)],
            method="highs",
        )
        if res.status == 2:
            raise EmptyInterior()
        if res.status != 0 or res.x[-1] <= 1e-9:
            raise EmptyInterior("no ball of positive radius fits inside")

    def _enumerate_vertices(self, dim: int, facets: list[Facet]) -> list[Vertex]:
        """Solve every dim-subset of facet equalities exactly, keep feasible solutions"""
        found: dict[tuple, Vertex] = {}
        for subset in itertools.combinations(range(len(facets)), dim):
            M = sympy.Matrix([list(facets[r].normal) for r in subset])
            if M.det() == 0:
                continue
            rhs = sympy.Matrix([sympy.Rational(facets[r].offset.numerator, facets[r].offset.denominator)
                                for r in subset])
            point = tuple(_to_fraction(c) for c in M.LUsolve(rhs))
            if point in found:
                continue
            values = [f.ell(point) for f in facets]
            if any(v < 0 for v in values):
                continue
            active = frozenset(r for r, v in enumerate(values) if v == 0)
            found[point] = Vertex(point=point, active=active)
        return sorted(found.values(), key=lambda v: v.key)

    def faces(self, P: DelzantPolytope, k: int) -> list[frozenset[int]]:
        """k-dimensional faces as vertex-index sets (simple polytopes: cut out by n-k facets)"""
        n = P.dim
        seen: dict[frozenset, None] = {}
        for subset in itertools.combinations(range(P.num_facets), n - k):
            ids = frozenset(P.face_vertex_ids(subset))
            if ids:
                seen.setdefault(ids, None)
        return list(seen)

    def f_vector(self, P: DelzantPolytope) -> FVector:
        n = P.dim
        if n <= self.max_face_dim:
            return FVector(tuple(len(self.faces(P, k)) for k in range(n + 1)))
        counts: list[Optional[int]] = [None] * (n + 1)
        counts[0] = len(P.vertices)
        counts[n - 1] = P.num_facets
        counts[n] = 1
        logger.info(f"Face lattice skipped for n={n}; middle f-numbers not computed")
        return FVector(tuple(counts))

    def h_numbers(self, P: DelzantPolytope) -> tuple[Optional[int], ...]:
        """h^k = sum_j C(n-j, n-k) (-1)^(k-j) f_{n-j}; None where an f-number is missing"""
        f = self.f_vector(P).counts
        n = P.dim
        h: list[Optional[int]] = []
        for k in range(n + 1):
            needed = [f[n - j] for j in range(k + 1)]
            if any(c is None for c in needed):
                h.append(None)
                continue
            h.append(sum(math.comb(n - j, n - k) * (-1) ** (k - j) * f[n - j] for j in range(k + 1)))
        return tuple(h)

    def check_hard_lefschetz(self, h: Sequence[Optional[int]]) -> HardLefschetzReport:
        """
        (i) h^k = h^(n-k); (ii) h^(k+1) >= h^k for k <= floor(n/2) - 1.
        A condition is None (not computed) when it holds on every available pair
        but some pair involves a missing h-number; any violated pair makes it False.
        """
        n = len(h) - 1
        symmetric = _all_pairs((h[k], h[n - k]) for k in range(n + 1))
        unimodal = _all_pairs(((h[k + 1], h[k]) for k in range(n // 2)), operator.ge)
        return HardLefschetzReport(tuple(h), symmetric, unimodal)

    def sl_transform(self, P: DelzantPolytope, A) -> DelzantPolytope:
        """A(P): each facet (mu, lambda) goes to (A^-T mu, lambda)"""
        A = sympy.Matrix(A)
        if A.shape != (P.dim, P.dim) or any(not c.is_integer for c in A):
            raise SchemaViolation("A", f"expected an integer {P.dim}x{P.dim} matrix")
        det = A.det()
        if det != 1:
            raise NotUnimodular(int(det))
        inv_t = A.inv().T
        facets = [
            (tuple(int(c) for c in inv_t * sympy.Matrix(f.normal)), f.offset)
            for f in P.facets
        ]
        return self.build_polytope(P.dim, facets, name=P.name)

    def translate(self, P: DelzantPolytope, t: Sequence) -> DelzantPolytope:
        """P + t: ell'_r(x + t) = ell_r(x)"""
        t = [_to_fraction(c) for c in t]
        if len(t) != P.dim:
            raise SchemaViolation("t", f"expected {P.dim} entries")
        facets = [
            (f.normal, f.offset + sum((a * b for a, b in zip(t, f.normal)), Fraction(0)))
            for f in P.facets
        ]
        return self.build_polytope(P.dim, facets, name=P.name)

    def normal_sum(self, P: DelzantPolytope) -> tuple[int, ...]:
        return tuple(sum(f.normal[i] for f in P.facets) for i in range(P.dim))

    def fixture(self, name: str) -> DelzantPolytope:
        """One of the named polytopes in toric.models.fixtures"""
        if name not in FIXTURES:
            raise SchemaViolation("polytope", f"unknown fixture '{name}'")
        doc = FIXTURES[name]
        facets = [(f["normal"], f["offset"]) for f in doc["facets"]]
        return self.build_polytope(doc["dim"], facets, name=doc["name"])


# Singleton instance
polytope_service = PolytopeService()
