import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.signal import residue

from toric.errors import ParseError, SchemaViolation
from toric.models.correction import (
    NAMED_CORRECTIONS,
    CorrectionTerm,
    PolynomialCorrection,
    RidgeCorrection,
    RidgeProfile,
    SumCorrection,
    ZeroCorrection,
    calabi_blowup_profile,
)
from toric.models.fixtures import FIXTURES
from toric.models.polytope import DelzantPolytope
from toric.models.run_config import RunConfig
from toric.services.polytope_service import polytope_service

logger = logging.getLogger(__name__)

NAMED_PROFILES = {"calabi-blowup": calabi_blowup_profile}


def read_json(path: str, exact: bool = False):
    """Load a JSON file; with exact=True decimal numbers become Fractions of their text"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(path, 0, str(e)) from e
    try:
        return json.loads(text, parse_float=Fraction if exact else float)
    except json.JSONDecodeError as e:
        raise ParseError(path, e.lineno, e.msg) from e


def _require_keys(doc, allowed: set, required: set, where: str):
    if not isinstance(doc, dict):
        raise SchemaViolation(where or "<root>", "expected an object")
    for key in doc:
        if key not in allowed:
            raise SchemaViolation(f"{where}.{key}" if where else key, "unknown field")
    for key in required:
        if key not in doc:
            raise SchemaViolation(f"{where}.{key}" if where else key, "missing")


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float, Fraction)):
        raise SchemaViolation(where, "expected a number")
    return float(value)


# Polytopes

def parse_offset(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise SchemaViolation(where, "expected a rational")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        # only reached for documents not read in exact mode
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise SchemaViolation(where, f"'{value}' is not a rational") from e
    raise SchemaViolation(where, "expected a rational string or number")


def polytope_from_document(doc: dict) -> DelzantPolytope:
    _require_keys(doc, {"dim", "facets", "name"}, {"dim", "facets"}, "")
    dim = doc["dim"]
    if not _is_int(dim) or dim < 1:
        raise SchemaViolation("dim", "expected a positive integer")
    if not isinstance(doc["facets"], list):
        raise SchemaViolation("facets", "expected a list")
    facets = []
    for r, facet in enumerate(doc["facets"]):
        where = f"facets[{r}]"
        _require_keys(facet, {"normal", "offset"}, {"normal", "offset"}, where)
        normal = facet["normal"]
        if not isinstance(normal, list) or not all(_is_int(c) for c in normal):
            raise SchemaViolation(f"{where}.normal", "expected a list of integers")
        facets.append((normal, parse_offset(facet["offset"], f"{where}.offset")))
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise SchemaViolation("name", "expected a string")
    return polytope_service.build_polytope(dim, facets, name=name)


def load_polytope(source: str) -> DelzantPolytope:
    """Fixture name or path to a polytope JSON document"""
    if source in FIXTURES:
        return polytope_from_document(FIXTURES[source])
    return polytope_from_document(read_json(source, exact=True))


# Corrections

def _profile_from_document(doc, where: str) -> RidgeProfile:
    if isinstance(doc, str):
        if doc not in NAMED_PROFILES:
            raise SchemaViolation(where, f"unknown profile '{doc}'")
        return NAMED_PROFILES[doc]()
    _require_keys(doc, {"d2_partial_fractions", "d2_polynomial", "d2_rational"}, set(), where)
    if "d2_rational" in doc:
        return _rational_profile(doc["d2_rational"], f"{where}.d2_rational")

    coeffs, poles = [], []
    for i, term in enumerate(doc.get("d2_partial_fractions", [])):
        _require_keys(term, {"coeff", "pole"}, {"coeff", "pole"}, f"{where}.d2_partial_fractions[{i}]")
        coeffs.append(_number(term["coeff"], f"{where}.d2_partial_fractions[{i}].coeff"))
        poles.append(_number(term["pole"], f"{where}.d2_partial_fractions[{i}].pole"))
    poly = [_number(c, f"{where}.d2_polynomial") for c in doc.get("d2_polynomial", [])]
    try:
        return RidgeProfile(tuple(coeffs), tuple(poles), tuple(poly))
    except ValueError as e:
        raise SchemaViolation(where, str(e)) from e


def _coefficient_list(doc, key: str, where: str) -> list[float]:
    values = doc[key]
    if not isinstance(values, list) or not values:
        raise SchemaViolation(f"{where}.{key}", "expected a non-empty list of numbers")
    return [_number(c, f"{where}.{key}") for c in values]


def _rational_profile(doc, where: str) -> RidgeProfile:
    """
    h'' = numerator / denominator - sum_i c_i / (t - p_i).

    Coefficients are listed highest degree first; the quotient is split into
    simple fractions by scipy.signal.residue and the minus terms are merged in.
    """
    _require_keys(
        doc,
        {"numerator_coeffs", "denominator_coeffs", "minus_terms"},
        {"numerator_coeffs", "denominator_coeffs"},
        where,
    )
    b = _coefficient_list(doc, "numerator_coeffs", where)
    a = _coefficient_list(doc, "denominator_coeffs", where)
    r, p, k = residue(b, a)
    if np.any(np.abs(np.imag(p)) > 1e-12):
        raise SchemaViolation(where, "complex poles are not supported")
    p = np.real(p)
    if len(p) > 1 and np.min(np.diff(np.sort(p))) < 1e-9:
        raise SchemaViolation(where, "repeated poles are not supported")

    coeffs = [float(c) for c in np.real(r)]
    poles = [float(c) for c in p]
    minus = doc.get("minus_terms", [])
    if not isinstance(minus, list):
        raise SchemaViolation(f"{where}.minus_terms", "expected a list")
    for i, term in enumerate(minus):
        tw = f"{where}.minus_terms[{i}]"
        _require_keys(term, {"coeff", "pole"}, {"coeff", "pole"}, tw)
        c = _number(term["coeff"], f"{tw}.coeff")
        pole = _number(term["pole"], f"{tw}.pole")
        same = [j for j, q in enumerate(poles) if abs(q - pole) < 1e-9]
        if same:
            coeffs[same[0]] -= c
        else:
            coeffs.append(-c)
            poles.append(pole)

    try:
        return RidgeProfile(
            coeffs=tuple(coeffs),
            poles=tuple(poles),
            poly=tuple(float(c) for c in np.real(k)[::-1]),
        )
    except ValueError as e:
        raise SchemaViolation(where, str(e)) from e


def correction_from_document(doc, dim: int, where: str = "") -> CorrectionTerm:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SchemaViolation(f"{where}.kind" if where else "kind", "missing")
    kind = doc["kind"]
    here = f"{where}." if where else ""

    if kind == "zero":
        _require_keys(doc, {"kind"}, set(), where)
        return ZeroCorrection()

    if kind == "polynomial":
        _require_keys(doc, {"kind", "terms"}, {"terms"}, where)
        terms = []
        for i, term in enumerate(doc["terms"]):
            tw = f"{here}terms[{i}]"
            _require_keys(term, {"exponents", "coeff"}, {"exponents", "coeff"}, tw)
            exps = term["exponents"]
            if not isinstance(exps, list) or len(exps) != dim or not all(_is_int(e) and e >= 0 for e in exps):
                raise SchemaViolation(f"{tw}.exponents", f"expected {dim} non-negative integers")
            terms.append((tuple(exps), _number(term["coeff"], f"{tw}.coeff")))
        return PolynomialCorrection(dim, tuple(terms))

    if kind == "ridge":
        _require_keys(doc, {"kind", "direction", "profile", "scale"}, {"direction", "profile"}, where)
        direction = doc["direction"]
        if not isinstance(direction, list) or len(direction) != dim:
            raise SchemaViolation(f"{here}direction", f"expected {dim} numbers")
        return RidgeCorrection(
            direction=tuple(_number(c, f"{here}direction") for c in direction),
            profile=_profile_from_document(doc["profile"], f"{here}profile"),
            scale=_number(doc.get("scale", 1.0), f"{here}scale"),
        )

    if kind == "sum":
        _require_keys(doc, {"kind", "parts"}, {"parts"}, where)
        parts = tuple(
            correction_from_document(part, dim, f"{here}parts[{i}]")
            for i, part in enumerate(doc["parts"])
        )
        if not parts:
            raise SchemaViolation(f"{here}parts", "expected at least one part")
        return SumCorrection(parts)

    raise SchemaViolation(f"{here}kind", f"unknown correction kind '{kind}'")


def load_correction(source: Optional[str], dim: int) -> CorrectionTerm:
    """Named correction, path to a correction JSON document, or None for zero"""
    if source is None:
        return ZeroCorrection()
    if source in NAMED_CORRECTIONS:
        return NAMED_CORRECTIONS[source]()
    return correction_from_document(read_json(source), dim)


# Points and run configuration

def load_points(path: str, dim: int) -> np.ndarray:
    """JSON list of points, or {"points": [...]}"""
    doc = read_json(path)
    if isinstance(doc, dict):
        _require_keys(doc, {"points"}, {"points"}, "")
        doc = doc["points"]
    if not isinstance(doc, list):
        raise SchemaViolation("points", "expected a list of points")
    points = []
    for i, p in enumerate(doc):
        if not isinstance(p, list) or len(p) != dim:
            raise SchemaViolation(f"points[{i}]", f"expected {dim} numbers")
        points.append([_number(c, f"points[{i}]") for c in p])
    return np.array(points, dtype=float).reshape(-1, dim)


def load_run_config(path: str) -> RunConfig:
    doc = read_json(path)
    if not isinstance(doc, dict):
        raise SchemaViolation("<root>", "expected an object")
    return RunConfig.from_dict(doc)
