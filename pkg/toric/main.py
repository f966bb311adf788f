import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from toric.config import config, validate_config
from toric.errors import InputError, PointError, PolytopeError, ToricError
from toric.handlers import cohomology, geometry, polytope, spectrum
from toric.handlers.router import EXIT_INTERNAL, EXIT_VALIDATION, Dispatcher
from toric.models.run_config import COMMANDS, RunConfig
from toric.utils.io_utils import load_run_config
from toric.utils.report_utils import build_report, emit, render_csv, render_json

logger = logging.getLogger(__name__)


@dataclass
class RunOutcome:
    exit_code: int
    document: dict
    text: str


def build_dispatcher() -> Dispatcher:
    dp = Dispatcher()
    dp.include_router(polytope.router)
    dp.include_router(geometry.router)
    dp.include_router(spectrum.router)
    dp.include_router(cohomology.router)
    return dp


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toric",
        description="Kähler geometry of toric manifolds on their Delzant polytopes",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS)
    parser.add_argument("--polytope", help="polytope JSON path or fixture name")
    parser.add_argument("--correction", help="correction JSON path or name (zero, calabi-blowup)")
    parser.add_argument("--points", help="JSON file with evaluation points")
    parser.add_argument("--k", type=int, default=3, help="number of eigenvalues")
    parser.add_argument("--degree", type=int, help="Ritz trial-space degree")
    parser.add_argument("--cells", type=int, help="1D finite element cells")
    parser.add_argument("--tol-extremal", type=float, help=f"extremality tolerance (default {config.tol_extremal})")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", help="output file (directory for fixtures)")
    parser.add_argument("--config", help="strict JSON run configuration")
    parser.add_argument("--log-level", help=f"logging level (default {config.log_level})")
    return parser


def parse_run_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    if args.config:
        return load_run_config(args.config)
    if args.command is None:
        raise InputError("a command is required (or --config)")
    return RunConfig(
        command=args.command,
        polytope=args.polytope,
        correction=args.correction,
        points=args.points,
        k=args.k,
        degree=args.degree,
        cells=args.cells,
        tol_extremal=args.tol_extremal,
        format=args.format,
        out=args.out,
        log_level=args.log_level,
    )


def run(cfg: RunConfig) -> RunOutcome:
    """Execute one command; validation failures map to exit 2, anything unexpected to 1"""
    dp = build_dispatcher()
    try:
        result = dp.dispatch(cfg)
    except (PolytopeError, InputError, PointError) as e:
        logger.error(f"Validation error in {cfg.command}: {e}")
        document = build_report(cfg.command, {"error": {"type": type(e).__name__, "message": str(e)}})
        return RunOutcome(EXIT_VALIDATION, document, render_json(document))
    except ToricError as e:
        logger.error(f"Error in {cfg.command}: {e}")
        document = build_report(cfg.command, {"error": {"type": type(e).__name__, "message": str(e)}})
        return RunOutcome(EXIT_INTERNAL, document, render_json(document))
    except Exception as e:
        logger.error(f"Internal error in {cfg.command}: {e}", exc_info=True)
        document = build_report(cfg.command, {"error": {"type": type(e).__name__, "message": str(e)}})
        return RunOutcome(EXIT_INTERNAL, document, render_json(document))

    document = build_report(cfg.command, result.body)
    if cfg.format == "csv" and result.header is not None:
        text = render_csv(result.header, result.rows)
    else:
        text = render_json(document)
    return RunOutcome(result.exit_code, document, text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    # Reports go to stdout, logs to stderr
    logging.basicConfig(
        level=config.log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

    if not validate_config():
        logger.error("Invalid configuration. Please check your .env file.")
        return EXIT_INTERNAL

    try:
        cfg = parse_run_config(argv)
    except ToricError as e:
        logger.error(f"Invalid invocation: {e}")
        return EXIT_VALIDATION
    if cfg.log_level:
        logging.getLogger().setLevel(cfg.log_level.upper())

    outcome = run(cfg)
    # fixtures --out names a directory; the summary still goes to stdout
    out = None if cfg.command == "fixtures" else cfg.out
    emit(outcome.text, out)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
