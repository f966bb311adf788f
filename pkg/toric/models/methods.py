from dataclasses import dataclass
from typing import Optional

from toric.config import config


@dataclass(frozen=True)
class RitzConfig:
    """Polynomial trial space of total degree <= degree; history from history_from upward"""
    degree: int = config.ritz_degree
    history_from: Optional[int] = None
    quadrature_degree: Optional[int] = None

    @property
    def rule_degree(self) -> int:
        return self.quadrature_degree or 2 * self.degree + 4

    def to_dict(self) -> dict:
        return {"kind": "ritz", "degree": self.degree}


@dataclass(frozen=True)
class Fem1DConfig:
    """Piecewise-quadratic elements on a uniform mesh of the interval"""
    cells: int = config.fem_cells

    def to_dict(self) -> dict:
        return {"kind": "fem", "cells": self.cells, "element": "quadratic"}
