import logging
import os
from dataclasses import dataclass
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


@dataclass
class Config:
    # Interiority guard for jets
    eps_boundary: float = float(os.getenv("TORIC_EPS_BOUNDARY", "1e-12"))

    # Extremality
    tol_extremal: float = float(os.getenv("TORIC_TOL_EXTREMAL", "1e-6"))

    # Newton inversion of the moment map
    newton_tol: float = float(os.getenv("TORIC_NEWTON_TOL", "1e-10"))
    newton_max_iters: int = int(os.getenv("TORIC_NEWTON_MAX_ITERS", "100"))

    # Spectrum
    ritz_degree: int = int(os.getenv("TORIC_RITZ_DEGREE", "6"))
    fem_cells: int = int(os.getenv("TORIC_FEM_CELLS", "512"))
    gram_cond_max: float = float(os.getenv("TORIC_GRAM_COND_MAX", "1e12"))
    convergence_rtol: float = float(os.getenv("TORIC_CONVERGENCE_RTOL", "1e-4"))

    # Interior sampling
    grid_points: int = int(os.getenv("TORIC_GRID_POINTS", "9"))
    sobol_points: int = int(os.getenv("TORIC_SOBOL_POINTS", "64"))
    shrink: float = float(os.getenv("TORIC_SHRINK", "0.95"))
    boundary_margin: float = float(os.getenv("TORIC_BOUNDARY_MARGIN", "0.01"))
    sample_seed: int = int(os.getenv("TORIC_SAMPLE_SEED", "0"))

    # Boundary approach sequences: ell = 2^-k, k = k_min..k_max
    boundary_k_min: int = int(os.getenv("TORIC_BOUNDARY_K_MIN", "4"))
    boundary_k_max: int = int(os.getenv("TORIC_BOUNDARY_K_MAX", "20"))

    # Full face lattice only up to this dimension
    max_face_dim: int = int(os.getenv("TORIC_MAX_FACE_DIM", "3"))

    log_level: str = os.getenv("TORIC_LOG_LEVEL", "INFO")


config = Config()


# Validate config values
def validate_config(cfg: Config = config) -> bool:
    errors = []
    if cfg.eps_boundary <= 0:
        errors.append("TORIC_EPS_BOUNDARY must be positive")
    if cfg.tol_extremal <= 0:
        errors.append("TORIC_TOL_EXTREMAL must be positive")
    if cfg.newton_tol <= 0 or cfg.newton_max_iters < 1:
        errors.append("TORIC_NEWTON_TOL must be positive and TORIC_NEWTON_MAX_ITERS at least 1")
    if cfg.ritz_degree < 1 or cfg.fem_cells < 2:
        errors.append("TORIC_RITZ_DEGREE must be >= 1 and TORIC_FEM_CELLS >= 2")
    if not 0 < cfg.shrink < 1:
        errors.append("TORIC_SHRINK must lie in (0, 1)")
    if cfg.boundary_k_min >= cfg.boundary_k_max:
        errors.append("TORIC_BOUNDARY_K_MIN must be smaller than TORIC_BOUNDARY_K_MAX")
    if cfg.grid_points < 2:
        errors.append("TORIC_GRID_POINTS must be at least 2")

    if errors:
        logger.error("Configuration errors:")
        for error in errors:
            logger.error(f"  - {error}")
        return False
    return True
