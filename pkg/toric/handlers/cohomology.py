import logging

from toric.handlers.polytope import require_polytope
from toric.handlers.router import CommandResult, CommandRouter
from toric.models.run_config import RunConfig
from toric.services.cohomology_service import cohomology_service
from toric.services.polytope_service import polytope_service
from toric.utils.io_utils import load_points

logger = logging.getLogger(__name__)

router = CommandRouter()


@router.command("cohomology")
def cmd_cohomology(cfg: RunConfig) -> CommandResult:
    """dim H^2(P), the class of omega_P, the normal-sum flag and optional pointwise forms"""
    P = require_polytope(cfg)
    h2 = cohomology_service.h2_dimension(P)
    normal_sum = polytope_service.normal_sum(P)
    body = {
        "h2": h2.to_dict(),
        "symplectic_class": cohomology_service.symplectic_class(P).to_dict(),
        "normal_sum": list(normal_sum),
        "standard_representative": not any(normal_sum),
    }

    rows = []
    if cfg.points is not None:
        evaluations = []
        for x in load_points(cfg.points, P.dim):
            generators = [cohomology_service.generator_form(P, r, x).C for r in range(P.num_facets)]
            representative = cohomology_service.symplectic_representative(P, x)
            evaluations.append({
                "point": [float(c) for c in x],
                "generators": [C.tolist() for C in generators],
                "representative": representative.C.tolist(),
            })
            for r, C in enumerate(generators):
                rows.append([*(float(c) for c in x), r, *C.ravel().tolist()])
        body["evaluations"] = evaluations

    n = P.dim
    header = [f"x{i + 1}" for i in range(n)] + ["facet"] + [f"C{j + 1}{k + 1}" for j in range(n) for k in range(n)]
    return CommandResult(body, header=header, rows=rows)
