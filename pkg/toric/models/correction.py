import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as npoly

from toric.models.jets import PotentialJet, rank_one_jet


class CorrectionTerm:
    """Smooth function h on the whole polytope with exact jets through order 4"""
    kind: str = "abstract"

    def jet(self, x: np.ndarray, order: int) -> PotentialJet:
        raise NotImplementedError

    def is_zero(self) -> bool:
        return False

    def to_dict(self) -> dict:
        raise NotImplementedError

    def __add__(self, other: "CorrectionTerm") -> "CorrectionTerm":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        left = self.parts if isinstance(self, SumCorrection) else (self,)
        right = other.parts if isinstance(other, SumCorrection) else (other,)
        return SumCorrection(left + right)


@dataclass(frozen=True)
class ZeroCorrection(CorrectionTerm):
    kind: str = field(default="zero", init=False)

    def jet(self, x: np.ndarray, order: int) -> PotentialJet:
        return PotentialJet.zero(x, order)

    def is_zero(self) -> bool:
        return True

    def to_dict(self) -> dict:
        return {"kind": "zero"}


@dataclass(frozen=True, eq=False)
class PolynomialCorrection(CorrectionTerm):
    """Multivariate polynomial sum(coeff * x^exponents)"""
    dim: int
    terms: tuple[tuple[tuple[int, ...], float], ...]
    kind: str = field(default="polynomial", init=False)

    @cached_property
    def coefficients(self) -> np.ndarray:
        degree = max((sum(e) for e, _ in self.terms), default=0)
        c = np.zeros((degree + 1,) * self.dim)
        for exponents, coeff in self.terms:
            c[tuple(exponents)] += coeff
        return c

    @cached_property
    def _derivative_tables(self) -> dict:
        # sorted multi-index -> coefficient array of that partial derivative
        tables = {(): self.coefficients}
        for k in range(1, 5):
            for idx in itertools.combinations_with_replacement(range(self.dim), k):
                tables[idx] = npoly.polyder(tables[idx[:-1]], m=1, axis=idx[-1])
        return tables

    def _evaluate(self, c: np.ndarray, x: np.ndarray) -> float:
        value = c
        for xi in x:
            value = npoly.polyval(xi, value, tensor=False)
        return float(value)

    def jet(self, x: np.ndarray, order: int) -> PotentialJet:
        x = np.asarray(x, dtype=float)
        n = self.dim
        tables = self._derivative_tables
        parts: list = [self._evaluate(tables[()], x)]
        for k in range(1, 5):
            if k > order:
                parts.append(None)
                continue
            tensor = np.empty((n,) * k)
            for idx in itertools.product(range(n), repeat=k):
                tensor[idx] = self._evaluate(tables[tuple(sorted(idx))], x)
            parts.append(tensor)
        return PotentialJet(x, order, *parts)

    def is_zero(self) -> bool:
        return not np.any(self.coefficients)

    def degree(self) -> int:
        return max((sum(e) for e, c in self.terms if c != 0), default=0)

    def to_dict(self) -> dict:
        return {
            "kind": "polynomial",
            "terms": [{"exponents": list(e), "coeff": c} for e, c in self.terms],
        }


@dataclass(frozen=True)
class RidgeProfile:
    """
    One-variable profile given by its second derivative
        h''(t) = sum_i coeffs[i] / (t - poles[i]) + sum_k poly[k] t^k
    with h(0) = h'(0) = 0.
    """
    coeffs: tuple[float, ...] = ()
    poles: tuple[float, ...] = ()
    poly: tuple[float, ...] = ()
    name: str = ""

    def __post_init__(self):
        if len(self.coeffs) != len(self.poles):
            raise ValueError("coeffs and poles must have equal length")
        if any(p == 0 for p in self.poles):
            raise ValueError("profile poles must be nonzero (normalization at t = 0)")

    def derivatives(self, t: float) -> np.ndarray:
        """[h, h', h'', h''', h''''] at t"""
        out = np.zeros(5)
        for c, p in zip(self.coeffs, self.poles):
            s = t - p
            log_s = math.log(abs(s))
            log_p = math.log(abs(p))
            out[0] += c * (s * log_s - s) - c * (p - p * log_p) - c * log_p * t
            out[1] += c * (log_s - log_p)
            out[2] += c / s
            out[3] += -c / s ** 2
            out[4] += 2 * c / s ** 3
        if self.poly:
            d2 = np.array(self.poly, dtype=float)
            out[0] += npoly.polyval(t, npoly.polyint(d2, m=2))
            out[1] += npoly.polyval(t, npoly.polyint(d2, m=1))
            out[2] += npoly.polyval(t, d2)
            out[3] += npoly.polyval(t, npoly.polyder(d2, m=1))
            out[4] += npoly.polyval(t, npoly.polyder(d2, m=2))
        return out

    def to_dict(self):
        if self.name:
            return self.name
        return {
            "d2_partial_fractions": [{"coeff": c, "pole": p} for c, p in zip(self.coeffs, self.poles)],
            "d2_polynomial": list(self.poly),
        }


def calabi_blowup_profile() -> RidgeProfile:
    """h''(t) = 2/(t^2 + 11t + 21) - 1/(t + 2), split into partial fractions"""
    root = math.sqrt(37.0)
    a = (-11.0 + root) / 2
    b = (-11.0 - root) / 2
    return RidgeProfile(
        coeffs=(2.0 / root, -2.0 / root, -1.0),
        poles=(a, b, -2.0),
        name="calabi-blowup",
    )


@dataclass(frozen=True)
class RidgeCorrection(CorrectionTerm):
    """scale * h(<direction, x>)"""
    direction: tuple[float, ...]
    profile: RidgeProfile
    scale: float = 1.0
    kind: str = field(default="ridge", init=False)

    def jet(self, x: np.ndarray, order: int) -> PotentialJet:
        x = np.asarray(x, dtype=float)
        w = np.asarray(self.direction, dtype=float)
        derivs = self.scale * self.profile.derivatives(float(w @ x))
        return rank_one_jet(x, order, derivs, w)

    def is_zero(self) -> bool:
        return self.scale == 0

    def to_dict(self) -> dict:
        return {
            "kind": "ridge",
            "direction": list(self.direction),
            "profile": self.profile.to_dict(),
            "scale": self.scale,
        }


@dataclass(frozen=True)
class SumCorrection(CorrectionTerm):
    parts: tuple[CorrectionTerm, ...]
    kind: str = field(default="sum", init=False)

    def jet(self, x: np.ndarray, order: int) -> PotentialJet:
        total = self.parts[0].jet(x, order)
        for part in self.parts[1:]:
            total = total + part.jet(x, order)
        return total

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def to_dict(self) -> dict:
        return {"kind": "sum", "parts": [p.to_dict() for p in self.parts]}


def calabi_blowup_correction() -> RidgeCorrection:
    """Ridge correction 1/2 h(x1 + x2) that makes the blow-up 4-gon metric extremal"""
    return RidgeCorrection(direction=(1.0, 1.0), profile=calabi_blowup_profile(), scale=0.5)


NAMED_CORRECTIONS = {
    "zero": ZeroCorrection,
    "calabi-blowup": calabi_blowup_correction,
}
