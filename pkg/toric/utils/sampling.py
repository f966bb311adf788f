import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from toric.config import config
from toric.models.polytope import DelzantPolytope


@dataclass(frozen=True)
class SamplingConfig:
    grid_points: int = config.grid_points
    sobol_points: int = config.sobol_points
    shrink: float = config.shrink
    boundary_margin: float = config.boundary_margin
    seed: int = config.sample_seed
    k_min: int = config.boundary_k_min
    k_max: int = config.boundary_k_max


def _shrink(P: DelzantPolytope, points: np.ndarray, factor: float) -> np.ndarray:
    c = P.centroid
    return c + factor * (points - c)


def _inside(P: DelzantPolytope, points: np.ndarray, margin: float) -> np.ndarray:
    if len(points) == 0:
        return points
    ell = points @ P.normals.T - P.offsets
    return points[np.all(ell > margin, axis=1)]


def interior_samples(P: DelzantPolytope, sampling: SamplingConfig = SamplingConfig()) -> np.ndarray:
    """
    Deterministic interior sample set: a bounding-box tensor grid and a scrambled
    Sobol set, both kept inside P and shrunk toward the centroid, with points
    closer than boundary_margin * diameter to a facet dropped.
    """
    lo, hi = P.bounding_box
    n = P.dim
    m = sampling.grid_points
    # cell centres, so the box corners (often vertices) are never hit
    axes = [lo[i] + (hi[i] - lo[i]) * (np.arange(m) + 0.5) / m for i in range(n)]
    grid = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    grid = _shrink(P, _inside(P, grid, 0.0), sampling.shrink)

    sobol = np.empty((0, n))
    if sampling.sobol_points > 0:
        engine = qmc.Sobol(d=n, scramble=True, seed=sampling.seed)
        raw = engine.random_base2(math.ceil(math.log2(sampling.sobol_points)))[: sampling.sobol_points]
        sobol = _shrink(P, _inside(P, qmc.scale(raw, lo, hi), 0.0), sampling.shrink)

    points = np.concatenate([grid, sobol])
    return _inside(P, points, sampling.boundary_margin * P.diameter)


def random_interior_points(P: DelzantPolytope, count: int, rng: np.random.Generator,
                           margin: float = 0.0) -> np.ndarray:
    """Uniform rejection samples from {x in P : ell_r(x) > margin}"""
    lo, hi = P.bounding_box
    found: list[np.ndarray] = []
    total = 0
    while total < count:
        batch = _inside(P, rng.uniform(lo, hi, size=(4 * count, P.dim)), margin)
        found.append(batch)
        total += len(batch)
    return np.concatenate(found)[:count]


def boundary_levels(sampling: SamplingConfig = SamplingConfig()) -> np.ndarray:
    """ell = 2^-k for k = k_min..k_max"""
    return 2.0 ** -np.arange(sampling.k_min, sampling.k_max + 1)


def facet_approach(P: DelzantPolytope, r: int, levels: np.ndarray) -> np.ndarray:
    """Points along the inward normal from the centroid of facet r with ell_r equal to each level"""
    mu = P.normals[r]
    return P.facet_centroid(r) + np.outer(levels, mu / (mu @ mu))


def vertex_approach(P: DelzantPolytope, v: int, levels: np.ndarray) -> np.ndarray:
    """Points on the segment from vertex v to the centroid, the smallest active ell equal to each level"""
    vertex = P.vertex_array[v]
    direction = P.centroid - vertex
    active = sorted(P.vertices[v].active)
    # every active ell grows linearly along the segment
    rate = min(P.normals[r] @ direction for r in active)
    return vertex + np.outer(levels / rate, direction)
