import logging

from toric.handlers.polytope import load_potential
from toric.handlers.router import CommandResult, CommandRouter
from toric.models.run_config import RunConfig
from toric.services.geometry_service import geometry_service
from toric.utils.io_utils import load_points
from toric.utils.sampling import SamplingConfig, interior_samples

logger = logging.getLogger(__name__)

router = CommandRouter()


@router.command("curvature")
def cmd_curvature(cfg: RunConfig) -> CommandResult:
    """Scalar curvature by both formulas at --points, or at the interior sample set"""
    g = load_potential(cfg)
    if cfg.points is not None:
        points = load_points(cfg.points, g.dim)
    else:
        points = interior_samples(g.polytope, SamplingConfig())

    samples = []
    rows = []
    for x in points:
        s = geometry_service.scalar_curvature(g, x)
        s_alt = geometry_service.scalar_curvature_alt(g, x)
        samples.append({"point": [float(c) for c in x], "scalar": s, "scalar_alt": s_alt})
        rows.append([*(float(c) for c in x), s, s_alt])

    body = {"potential": g.label, "samples": samples}
    header = [f"x{i + 1}" for i in range(g.dim)] + ["scalar", "scalar_alt"]
    return CommandResult(body, header=header, rows=rows)


@router.command("extremal-check")
def cmd_extremal_check(cfg: RunConfig) -> CommandResult:
    g = load_potential(cfg)
    report = geometry_service.extremality_test(g, SamplingConfig(), tol=cfg.tol_extremal)
    body = {"potential": g.label, **report.to_dict()}
    header = ["constant"] + [f"gradient_{i + 1}" for i in range(g.dim)] + ["residual_sup", "is_extremal"]
    rows = [[report.constant, *(float(c) for c in report.gradient), report.residual_sup, report.is_extremal]]
    return CommandResult(body, header=header, rows=rows)
