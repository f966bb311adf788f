from dataclasses import dataclass, fields
from typing import Optional

from toric.errors import SchemaViolation

COMMANDS = ("validate", "describe", "curvature", "extremal-check", "spectrum", "cohomology", "fixtures")
FORMATS = ("json", "csv")

REQUIRED_FIELDS = ("command", "k", "format")
INT_FIELDS = ("k", "degree", "cells")
FLOAT_FIELDS = ("tol_extremal",)


def _check_type(name: str, value):
    if value is None:
        if name in REQUIRED_FIELDS:
            raise SchemaViolation(name, "must not be null")
        return
    if name in INT_FIELDS:
        expected, ok = "int", isinstance(value, int) and not isinstance(value, bool)
    elif name in FLOAT_FIELDS:
        expected, ok = "number", isinstance(value, (int, float)) and not isinstance(value, bool)
    else:
        expected, ok = "string", isinstance(value, str)
    if not ok:
        raise SchemaViolation(name, f"expected {expected}")


@dataclass
class RunConfig:
    """One CLI invocation; built from argv or a strict JSON document"""
    command: str
    polytope: Optional[str] = None
    correction: Optional[str] = None
    points: Optional[str] = None
    k: int = 3
    degree: Optional[int] = None
    cells: Optional[int] = None
    tol_extremal: Optional[float] = None
    format: str = "json"
    out: Optional[str] = None
    log_level: Optional[str] = None

    def __post_init__(self):
        for f in fields(self):
            _check_type(f.name, getattr(self, f.name))
        if self.tol_extremal is not None:
            self.tol_extremal = float(self.tol_extremal)
        if self.command not in COMMANDS:
            raise SchemaViolation("command", f"expected one of {', '.join(COMMANDS)}")
        if self.format not in FORMATS:
            raise SchemaViolation("format", "expected json or csv")
        if self.k < 1:
            raise SchemaViolation("k", "must be at least 1")
        if self.degree is not None and self.degree < 1:
            raise SchemaViolation("degree", "must be at least 1")
        if self.cells is not None and self.cells < 2:
            raise SchemaViolation("cells", "must be at least 2")

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        for key in doc:
            if key not in known:
                raise SchemaViolation(key, "unknown field")
        if "command" not in doc:
            raise SchemaViolation("command", "missing")
        return cls(**doc)
