"""Sparse polynomials in ``(x_1, ..., x_{k-1}, z, eps)`` and polynomial vector fields.

Bracket convention, used everywhere downstream::

    [X, Y]_i = X(Y_i) - Y(X_i)
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ._backend import mul_terms
from .grading import Monomial, Weights, format_monomial, variable_names, weights

__all__ = [
    "Polynomial",
    "VectorField",
    "directional_derivative",
    "lie_bracket",
    "quasi_components",
    "quasiorder",
    "INFINITY",
]

INFINITY = math.inf


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("k", "terms", "_hash")

    def __init__(self, k: int, terms: Mapping[Monomial, object] | None = None):
        n = k + 1
        clean = {}
        if terms:
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != n or any(a < 0 for a in m):
                    raise ValueError(f"bad exponent vector {m} for k={k}")
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    clean[m] = c
        self.k = k
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, k: int, terms: dict) -> "Polynomial":
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.k = k
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, k: int) -> "Polynomial":
        return cls._raw(k, {})

    @classmethod
    def constant(cls, k: int, c) -> "Polynomial":
        return cls(k, {(0,) * (k + 1): c})

    @classmethod
    def monomial(cls, k: int, m: Monomial, c=1) -> "Polynomial":
        return cls(k, {tuple(m): c})

    @classmethod
    def variable(cls, k: int, index: int) -> "Polynomial":
        m = [0] * (k + 1)
        m[index] = 1
        return cls._raw(k, {tuple(m): Fraction(1)})

    @property
    def weights(self) -> Weights:
        return weights(self.k)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.k == other.k and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.k, frozenset(self.terms.items())))
        return self._hash

    def _check(self, other: "Polynomial") -> None:
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.k != self.k:
            raise ValueError(f"mixed k: {self.k} and {other.k}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.k, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.k, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c) -> "Polynomial":
        c = c if isinstance(c, Fraction) else Fraction(c)
        if not c:
            return Polynomial.zero(self.k)
        return Polynomial._raw(self.k, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        return Polynomial._raw(self.k, mul_terms(self.terms, other.terms, self.weights.r, -1))

    __rmul__ = scale

    def mul_truncated(self, other: "Polynomial", maxdeg: int) -> "Polynomial":
        """Product keeping only monomials of quasidegree <= ``maxdeg``."""
        self._check(other)
        return Polynomial._raw(self.k, mul_terms(self.terms, other.terms, self.weights.r, max(maxdeg, 0))
                               if maxdeg >= 0 else {})

    def __pow__(self, e: int) -> "Polynomial":
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = Polynomial.constant(self.k, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def partial(self, var: int) -> "Polynomial":
        """Formal derivative with respect to variable ``var`` (0-based)."""
        if not 0 <= var <= self.k:
            raise ValueError(f"variable index {var} out of range for k={self.k}")
        out = {}
        for m, c in self.terms.items():
            a = m[var]
            if a:
                mm = list(m)
                mm[var] = a - 1
                out[tuple(mm)] = c * a
        return Polynomial._raw(self.k, out)

    def degrees(self) -> set[int]:
        w = self.weights
        return {w.degree(m) for m in self.terms}

    def is_quasihomogeneous(self, delta: int) -> bool:
        w = self.weights
        return all(w.degree(m) == delta for m in self.terms)

    def truncate(self, maxdeg: int) -> "Polynomial":
        w = self.weights
        return Polynomial._raw(self.k, {m: c for m, c in self.terms.items() if w.degree(m) <= maxdeg})

    def homogeneous_part(self, delta: int) -> "Polynomial":
        w = self.weights
        return Polynomial._raw(self.k, {m: c for m, c in self.terms.items() if w.degree(m) == delta})

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * (self.k + 1), Fraction(0))

    def substitute(self, values: Sequence["Polynomial"], maxdeg: int) -> "Polynomial":
        """Compose with polynomial substitutions ``x_j -> values[j]``, truncated at ``maxdeg``."""
        if len(values) != self.k + 1:
            raise ValueError("need one substitution per variable")
        powers: list[dict] = [{0: Polynomial.constant(self.k, 1)} for _ in values]

        def power(j: int, a: int) -> Polynomial:
            cache = powers[j]
            if a not in cache:
                cache[a] = power(j, a - 1).mul_truncated(values[j], maxdeg)
            return cache[a]

        acc: dict = {}
        for m, c in self.terms.items():
            term = Polynomial.constant(self.k, c)
            for j, a in enumerate(m):
                if a:
                    term = term.mul_truncated(power(j, a), maxdeg)
                    if not term:
                        break
            for mm, v in term.terms.items():
                acc[mm] = acc.get(mm, 0) + v
        return Polynomial._raw(self.k, {m: c for m, c in acc.items() if c})

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def __repr__(self) -> str:
        return f"Polynomial(k={self.k}, {self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = format_monomial(m)
            if mono == "1":
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")


class VectorField:
    """Polynomial vector field; ``components[i]`` multiplies ``d/dx_i``."""

    __slots__ = ("k", "components")

    def __init__(self, k: int, components: Sequence[Polynomial] | None = None):
        if components is None:
            components = [Polynomial.zero(k) for _ in range(k + 1)]
        components = tuple(components)
        if len(components) != k + 1:
            raise ValueError(f"expected {k + 1} components, got {len(components)}")
        for c in components:
            if not isinstance(c, Polynomial) or c.k != k:
                raise ValueError("components must be Polynomials with matching k")
        self.k = k
        self.components = components

    @classmethod
    def zero(cls, k: int) -> "VectorField":
        return cls(k)

    @classmethod
    def basis_element(cls, k: int, component: int, m: Monomial, c=1) -> "VectorField":
        comps = [Polynomial.zero(k) for _ in range(k + 1)]
        comps[component] = Polynomial.monomial(k, m, c)
        return cls(k, comps)

    @classmethod
    def from_coordinates(cls, k: int, elements: Sequence[tuple], coords: Sequence) -> "VectorField":
        """Build ``sum coords[j] * elements[j]`` for basis ``elements``."""
        acc = [dict() for _ in range(k + 1)]
        for (i, m), c in zip(elements, coords):
            if c:
                acc[i][m] = acc[i].get(m, 0) + c
        return cls(k, [Polynomial(k, a) for a in acc])

    def coordinates(self, elements: Sequence[tuple], index: dict | None = None) -> list[Fraction]:
        """Coordinates in the given basis; raises if the field leaves its span."""
        if index is None:
            index = {e: j for j, e in enumerate(elements)}
        out = [Fraction(0)] * len(elements)
        for i, p in enumerate(self.components):
            for m, c in p.terms.items():
                j = index.get((i, m))
                if j is None:
                    raise ValueError(f"term {c}*{format_monomial(m)} in component {i} is outside the basis")
                out[j] = c
        return out

    @property
    def weights(self) -> Weights:
        return weights(self.k)

    def __getitem__(self, i: int) -> Polynomial:
        return self.components[i]

    def is_zero(self) -> bool:
        return not any(self.components)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, VectorField):
            return self.k == other.k and self.components == other.components
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.k, self.components))

    def _check(self, other: "VectorField") -> None:
        if not isinstance(other, VectorField):
            raise TypeError(f"expected VectorField, got {type(other).__name__}")
        if other.k != self.k:
            raise ValueError(f"mixed k: {self.k} and {other.k}")

    def __add__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(self.k, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(self.k, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "VectorField":
        return VectorField(self.k, [-a for a in self.components])

    def scale(self, c) -> "VectorField":
        return VectorField(self.k, [a.scale(c) for a in self.components])

    __mul__ = scale
    __rmul__ = scale

    def __call__(self, g: Polynomial, maxdeg: int | None = None) -> Polynomial:
        return directional_derivative(self, g, maxdeg)

    def degree_of(self, i: int, m: Monomial) -> int:
        """Quasidegree of the term ``x^m d/dx_i``."""
        w = self.weights
        return w.degree(m) - w.r[i]

    def terms(self) -> Iterable[tuple[int, Monomial, Fraction]]:
        for i, p in enumerate(self.components):
            for m, c in p.terms.items():
                yield i, m, c

    def homogeneous_part(self, gamma: int) -> "VectorField":
        w = self.weights
        return VectorField(self.k, [p.homogeneous_part(gamma + w.r[i]) for i, p in enumerate(self.components)])

    def truncate(self, maxdeg: int) -> "VectorField":
        w = self.weights
        return VectorField(self.k, [p.truncate(maxdeg + w.r[i]) for i, p in enumerate(self.components)])

    def drop_below(self, mindeg: int) -> "VectorField":
        w = self.weights
        return VectorField(self.k, [
            Polynomial._raw(self.k, {m: c for m, c in p.terms.items() if w.degree(m) - w.r[i] >= mindeg})
            for i, p in enumerate(self.components)
        ])

    def is_quasihomogeneous(self, gamma: int) -> bool:
        return all(self.degree_of(i, m) == gamma for i, m, _ in self.terms())

    def __repr__(self) -> str:
        return f"VectorField(k={self.k}, {self})"

    def __str__(self) -> str:
        names = variable_names(self.k)
        parts = [f"({p}) d/d{names[i]}" for i, p in enumerate(self.components) if p]
        return " + ".join(parts) if parts else "0"


def directional_derivative(X: VectorField, g: Polynomial, maxdeg: int | None = None) -> Polynomial:
    """``X(g) = sum_j X_j * dg/dx_j``, optionally dropping degrees above ``maxdeg``."""
    if X.k != g.k:
        raise ValueError(f"mixed k: {X.k} and {g.k}")
    if maxdeg is not None and maxdeg < 0:
        return Polynomial.zero(X.k)
    cap = -1 if maxdeg is None else maxdeg
    acc: dict = {}
    r = X.weights.r
    for j, Xj in enumerate(X.components):
        if not Xj:
            continue
        dg = g.partial(j)
        if not dg:
            continue
        for m, c in mul_terms(Xj.terms, dg.terms, r, cap).items():
            acc[m] = acc.get(m, 0) + c
    return Polynomial._raw(X.k, {m: c for m, c in acc.items() if c})


def lie_bracket(X: VectorField, Y: VectorField, maxdeg: int | None = None) -> VectorField:
    """``[X, Y]``; with ``maxdeg`` only quasidegrees ``<= maxdeg`` are computed."""
    X._check(Y)
    r = X.weights.r
    comps = []
    for i, (Xi, Yi) in enumerate(zip(X.components, Y.components)):
        cap = None if maxdeg is None else maxdeg + r[i]
        comps.append(directional_derivative(X, Yi, cap) - directional_derivative(Y, Xi, cap))
    return VectorField(X.k, comps)


def quasi_components(X: VectorField, w: Weights | None = None) -> dict[int, VectorField]:
    """Split ``X`` into quasihomogeneous pieces keyed by vector-field degree."""
    w = w or X.weights
    buckets: dict[int, list[dict]] = {}
    for i, m, c in X.terms():
        g = w.degree(m) - w.r[i]
        comps = buckets.setdefault(g, [dict() for _ in range(X.k + 1)])
        comps[i][m] = c
    return {
        g: VectorField(X.k, [Polynomial._raw(X.k, d) for d in comps])
        for g, comps in sorted(buckets.items())
    }


def quasiorder(X: VectorField, w: Weights | None = None):
    """Lowest degree present in ``X``; ``math.inf`` for the zero field."""
    w = w or X.weights
    degs = [w.degree(m) - w.r[i] for i, m, _ in X.terms()]
    return min(degs) if degs else INFINITY
