import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from toric.models.run_config import RunConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_VALIDATION = 2


@dataclass
class CommandResult:
    """Report body plus an optional table for --format csv"""
    body: dict
    exit_code: int = EXIT_OK
    header: Optional[Sequence[str]] = None
    rows: list = field(default_factory=list)


Handler = Callable[[RunConfig], CommandResult]


class CommandRouter:
    """Collects command handlers of one module"""

    def __init__(self):
        self.handlers: dict[str, Handler] = {}

    def command(self, name: str):
        def register(func: Handler) -> Handler:
            self.handlers[name] = func
            return func
        return register


class Dispatcher:
    def __init__(self):
        self.handlers: dict[str, Handler] = {}

    def include_router(self, router: CommandRouter):
        for name, handler in router.handlers.items():
            if name in self.handlers:
                raise ValueError(f"command '{name}' registered twice")
            self.handlers[name] = handler

    def dispatch(self, cfg: RunConfig) -> CommandResult:
        handler = self.handlers.get(cfg.command)
        if handler is None:
            raise ValueError(f"no handler for command '{cfg.command}'")
        logger.info(f"Running command {cfg.command}")
        return handler(cfg)
