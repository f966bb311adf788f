from dataclasses import dataclass
from typing import Optional, Protocol

import numpy as np


@dataclass(frozen=True, eq=False)
class PotentialJet:
    """Derivatives of a scalar function at a point, filled up to `order`"""
    point: np.ndarray
    order: int
    value: float
    gradient: Optional[np.ndarray] = None
    hessian: Optional[np.ndarray] = None
    third: Optional[np.ndarray] = None
    fourth: Optional[np.ndarray] = None

    def tensor(self, k: int) -> Optional[np.ndarray]:
        return (self.value, self.gradient, self.hessian, self.third, self.fourth)[k]

    def __add__(self, other: "PotentialJet") -> "PotentialJet":
        order = min(self.order, other.order)
        parts = [None] * 5
        for k in range(order + 1):
            parts[k] = self.tensor(k) + other.tensor(k)
        return PotentialJet(self.point, order, *parts)

    def scaled(self, factor: float) -> "PotentialJet":
        parts = [None] * 5
        for k in range(self.order + 1):
            parts[k] = factor * self.tensor(k)
        return PotentialJet(self.point, self.order, *parts)

    @classmethod
    def zero(cls, x: np.ndarray, order: int) -> "PotentialJet":
        n = len(x)
        parts = [0.0] + [np.zeros((n,) * k) for k in range(1, 5)]
        return cls(np.asarray(x, dtype=float), order, *[parts[k] if k <= order else None for k in range(5)])


class ScalarField(Protocol):
    """Anything that can report its jet at an interior point"""

    def jet(self, x: np.ndarray, order: int) -> PotentialJet:
        ...


def rank_one_jet(x: np.ndarray, order: int, derivs, direction: np.ndarray) -> PotentialJet:
    """
    Jet of phi(<direction, x>) given the one-variable derivatives
    derivs[k] = phi^(k) at the point; the k-th tensor is derivs[k] * w^{(x)k}.
    """
    w = np.asarray(direction, dtype=float)
    parts: list = [float(derivs[0])]
    tensor = np.ones(())
    for k in range(1, 5):
        tensor = np.multiply.outer(tensor, w)
        parts.append(derivs[k] * tensor if k <= order else None)
    return PotentialJet(np.asarray(x, dtype=float), order, *parts)
