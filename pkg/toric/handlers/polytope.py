import logging
from pathlib import Path

from toric.errors import PolytopeError, SchemaViolation
from toric.handlers.router import EXIT_VALIDATION, CommandResult, CommandRouter
from toric.models.fixtures import FIXTURES
from toric.models.polytope import NOT_COMPUTED
from toric.models.run_config import RunConfig
from toric.services.polytope_service import polytope_service
from toric.services.potential_service import potential_service
from toric.utils.io_utils import load_correction, load_polytope
from toric.utils.report_utils import render_json

logger = logging.getLogger(__name__)

router = CommandRouter()


def require_polytope(cfg: RunConfig):
    if cfg.polytope is None:
        raise SchemaViolation("polytope", f"required by '{cfg.command}'")
    return load_polytope(cfg.polytope)


def load_potential(cfg: RunConfig):
    """Canonical potential of --polytope plus the --correction term"""
    P = require_polytope(cfg)
    g = potential_service.canonical_potential(P)
    return potential_service.add_correction(g, load_correction(cfg.correction, P.dim))


@router.command("validate")
def cmd_validate(cfg: RunConfig) -> CommandResult:
    """Delzant validation, plus potential validation when a correction is given"""
    try:
        P = require_polytope(cfg)
    except PolytopeError as e:
        logger.warning(f"Polytope rejected: {e}")
        return CommandResult(
            {"delzant": False, "error": {"type": type(e).__name__, "message": str(e)}},
            exit_code=EXIT_VALIDATION,
        )

    body = {"delzant": True, "polytope": P.to_dict(), "vertices": [v.to_dict() for v in P.vertices]}
    if cfg.correction is None:
        return CommandResult(body)

    g = potential_service.add_correction(
        potential_service.canonical_potential(P), load_correction(cfg.correction, P.dim)
    )
    report = potential_service.validate_potential(g)
    body["potential"] = report.to_dict()
    rows = [[s.kind, s.index, float(level), float(ratio)]
            for s in report.sequences for level, ratio in zip(s.ell, s.ratios)]
    return CommandResult(
        body,
        exit_code=0 if report.passed else EXIT_VALIDATION,
        header=["kind", "index", "ell", "ratio"],
        rows=rows,
    )


@router.command("describe")
def cmd_describe(cfg: RunConfig) -> CommandResult:
    P = require_polytope(cfg)
    f = polytope_service.f_vector(P)
    h = polytope_service.h_numbers(P)
    normal_sum = polytope_service.normal_sum(P)
    body = {
        "polytope": P.to_dict(),
        "vertices": [v.to_dict() for v in P.vertices],
        "f_vector": f.to_list(),
        "euler_characteristic": f.euler_characteristic(),
        "h_numbers": [NOT_COMPUTED if c is None else c for c in h],
        "hard_lefschetz": polytope_service.check_hard_lefschetz(h).to_dict(),
        "normal_sum": list(normal_sum),
        "normal_sum_zero": not any(normal_sum),
    }
    rows = [[k, c] for k, c in enumerate(f.to_list())]
    return CommandResult(body, header=["dimension", "faces"], rows=rows)


@router.command("fixtures")
def cmd_fixtures(cfg: RunConfig) -> CommandResult:
    """Named polytopes; written one file each when --out names a directory"""
    if cfg.out is None:
        return CommandResult({"fixtures": list(FIXTURES.values())})

    directory = Path(cfg.out)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, doc in FIXTURES.items():
        path = directory / f"{name}.json"
        path.write_text(render_json(doc), encoding="utf-8")
        written.append(str(path))
    logger.info(f"Wrote {len(written)} fixtures to {directory}")
    return CommandResult({"written": written})
