"""JSON encodings: rationals as ``"p/q"`` strings, monomials as exponent arrays."""
from __future__ import annotations

import json
import re
from fractions import Fraction

from .grading import weights
from .polyvf import Polynomial, VectorField

SCHEMA_VERSION = 1

_RATIONAL = re.compile(r"^\s*(-?\d+)(?:/(\d+))?\s*$")


class ParseError(ValueError):
    """Malformed input; ``location`` is a JSON-path-like pointer."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s, location: str = "$") -> Fraction:
    if isinstance(s, int) and not isinstance(s, bool):
        return Fraction(s)
    if not isinstance(s, str):
        raise ParseError(location, f"expected a 'p/q' string, got {type(s).__name__}")
    m = _RATIONAL.match(s)
    if not m:
        raise ParseError(location, f"not a rational 'p/q': {s!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(location, f"zero denominator in {s!r}")
    q = Fraction(num, den)
    if q.denominator != den:
        raise ParseError(location, f"{s!r} is not in lowest terms")
    return q


def polynomial_to_json(p: Polynomial) -> list:
    return [{"exponents": list(m), "coeff": format_rational(c)} for m, c in p.sorted_terms()]


def vectorfield_to_json(X: VectorField) -> dict:
    return {"k": X.k, "components": [polynomial_to_json(p) for p in X.components]}


def polynomial_from_json(data, k: int, location: str) -> Polynomial:
    if not isinstance(data, list):
        raise ParseError(location, "polynomial must be a list of terms")
    terms: dict = {}
    for t, term in enumerate(data):
        loc = f"{location}[{t}]"
        if not isinstance(term, dict) or "exponents" not in term or "coeff" not in term:
            raise ParseError(loc, "term needs 'exponents' and 'coeff'")
        exps = term["exponents"]
        if (
            not isinstance(exps, list)
            or len(exps) != k + 1
            or not all(isinstance(a, int) and not isinstance(a, bool) and a >= 0 for a in exps)
        ):
            raise ParseError(f"{loc}.exponents", f"expected {k + 1} nonnegative integers")
        c = parse_rational(term["coeff"], f"{loc}.coeff")
        m = tuple(exps)
        if m in terms:
            raise ParseError(loc, f"duplicate monomial {list(m)}")
        terms[m] = c
    return Polynomial(k, terms)


def vectorfield_from_json(data) -> VectorField:
    if not isinstance(data, dict):
        raise ParseError("$", "system file must be a JSON object")
    k = data.get("k")
    if not isinstance(k, int) or isinstance(k, bool):
        raise ParseError("$.k", "k must be an integer")
    try:
        weights(k)
    except ValueError as exc:
        raise ParseError("$.k", str(exc)) from None
    comps = data.get("components")
    if not isinstance(comps, list) or len(comps) != k + 1:
        raise ParseError("$.components", f"expected a list of {k + 1} polynomials")
    return VectorField(k, [polynomial_from_json(c, k, f"$.components[{i}]") for i, c in enumerate(comps)])


def load_system_file(path) -> VectorField:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"invalid JSON: {exc}") from None
    return vectorfield_from_json(data)


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"
