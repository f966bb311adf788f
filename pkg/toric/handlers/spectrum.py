import logging

from toric.handlers.polytope import load_potential
from toric.handlers.router import CommandResult, CommandRouter
from toric.models.methods import Fem1DConfig, RitzConfig
from toric.models.run_config import RunConfig
from toric.services.spectrum_service import spectrum_service

logger = logging.getLogger(__name__)

router = CommandRouter()


@router.command("spectrum")
def cmd_spectrum(cfg: RunConfig) -> CommandResult:
    """Invariant eigenvalues; CSV output is the refinement history"""
    g = load_potential(cfg)
    if cfg.degree is not None:
        method = RitzConfig(cfg.degree)
    elif cfg.cells is not None or g.dim == 1:
        method = Fem1DConfig(cfg.cells) if cfg.cells is not None else Fem1DConfig()
    else:
        method = RitzConfig()

    result = spectrum_service.invariant_spectrum(g, cfg.k, method)
    bounds = spectrum_service.bessel_bounds(cfg.k) if g.dim == 1 else []
    body = {
        "potential": g.label,
        **result.to_dict(),
        "bessel_bounds": [b.to_dict() for b in bounds],
    }
    level = "degree" if isinstance(method, RitzConfig) else "cells"
    header = [level] + [f"lambda_{j + 1}" for j in range(len(result.eigenvalues))]
    return CommandResult(body, header=header, rows=result.history_rows())
