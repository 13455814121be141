"""Quasihomogeneous grading of type ``(k, k-1, ..., 2, 1, 2k-1)``.

Variables are ordered ``(x_1, ..., x_{k-1}, z, eps)``; a monomial is a plain
tuple of ``k + 1`` nonnegative exponents. Vector-field basis elements are pairs
``(component, monomial)`` with 0-based component index (``k - 1`` is the
z-component, ``k`` the eps-component).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Tuple

Monomial = Tuple[int, ...]

__all__ = [
    "Monomial",
    "Weights",
    "PolyBasis",
    "VFBasis",
    "weights",
    "quasidegree",
    "gram_weight",
    "enumerate_monomials",
    "enumerate_poly_basis",
    "enumerate_vf_basis",
    "enumerate_good_basis",
    "variable_names",
    "format_monomial",
]


@dataclass(frozen=True)
class Weights:
    k: int
    r: tuple

    @property
    def n(self) -> int:
        return self.k + 1

    @property
    def z(self) -> int:
        """Index of z."""
        return self.k - 1

    @property
    def eps(self) -> int:
        """Index of eps."""
        return self.k

    @property
    def principal_degree(self) -> int:
        return self.k - 1

    def degree(self, m: Monomial) -> int:
        return sum(a * b for a, b in zip(self.r, m))


@lru_cache(maxsize=None)
def weights(k: int) -> Weights:
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")
    r = tuple(k - j for j in range(k - 1)) + (1, 2 * k - 1)
    return Weights(k, r)


def quasidegree(m: Monomial, w: Weights) -> int:
    if len(m) != w.n:
        raise ValueError(f"monomial {m} has {len(m)} exponents, expected {w.n}")
    return w.degree(m)


def gram_weight(m: Monomial, w: Weights, delta: int) -> Fraction:
    """``(s!)^r / delta!`` -- the squared norm of ``x^s`` in degree ``delta``."""
    num = 1
    for s, r in zip(m, w.r):
        num *= factorial(s) ** r
    return Fraction(num, factorial(delta))


@lru_cache(maxsize=None)
def enumerate_monomials(k: int, delta: int) -> tuple:
    """All exponent vectors of quasidegree ``delta``, lex-descending (x_1 first)."""
    w = weights(k)
    if delta < 0:
        return ()
    r = w.r
    n = w.n
    out = []
    cur = [0] * n

    def descend(i: int, rem: int) -> None:
        if i == n - 1:
            if rem % r[i] == 0:
                cur[i] = rem // r[i]
                out.append(tuple(cur))
            return
        for a in range(rem // r[i], -1, -1):
            cur[i] = a
            descend(i + 1, rem - a * r[i])
        cur[i] = 0

    descend(0, delta)
    return tuple(out)


@dataclass(frozen=True)
class PolyBasis:
    k: int
    delta: int
    monomials: tuple
    gram: tuple

    def __len__(self) -> int:
        return len(self.monomials)

    def index(self) -> dict:
        return _poly_index(self.k, self.delta)


@lru_cache(maxsize=None)
def _poly_index(k: int, delta: int) -> dict:
    return {m: i for i, m in enumerate(enumerate_monomials(k, delta))}


@lru_cache(maxsize=None)
def enumerate_poly_basis(k: int, delta: int) -> PolyBasis:
    w = weights(k)
    mons = enumerate_monomials(k, delta)
    gram = tuple(gram_weight(m, w, delta) for m in mons)
    assert all(g > 0 for g in gram)
    return PolyBasis(k, delta, mons, gram)


@dataclass(frozen=True)
class VFBasis:
    """Ordered basis of a graded piece of vector fields.

    ``elements[j] = (i, m)`` stands for ``x^m d/dx_i``.  ``with_eps`` records
    whether eps-components were admitted (they are not in the standard space).
    """

    k: int
    gamma: int
    elements: tuple
    gram: tuple
    with_eps: bool = False

    def __len__(self) -> int:
        return len(self.elements)

    def index(self) -> dict:
        return {e: j for j, e in enumerate(self.elements)}

    def component_slices(self) -> dict:
        """Map component -> list of positions of that component's elements."""
        out: dict = {}
        for j, (i, _) in enumerate(self.elements):
            out.setdefault(i, []).append(j)
        return out


@lru_cache(maxsize=None)
def enumerate_vf_basis(k: int, gamma: int, with_eps: bool = False) -> VFBasis:
    w = weights(k)
    ncomp = w.n if with_eps else k
    elements = []
    gram = []
    for i in range(ncomp):
        d = gamma + w.r[i]
        for m in enumerate_monomials(k, d):
            elements.append((i, m))
            gram.append(gram_weight(m, w, d))
    return VFBasis(k, gamma, tuple(elements), tuple(gram), with_eps)


@lru_cache(maxsize=None)
def enumerate_good_basis(k: int, beta: int) -> VFBasis:
    """Elements of the degree-``beta`` piece whose monomial contains eps."""
    if beta <= k - 1:
        raise ValueError(f"good perturbations live in degrees > k-1 = {k - 1}, got {beta}")
    full = enumerate_vf_basis(k, beta)
    keep = [j for j, (_, m) in enumerate(full.elements) if m[-1] >= 1]
    return VFBasis(
        k,
        beta,
        tuple(full.elements[j] for j in keep),
        tuple(full.gram[j] for j in keep),
    )


def good_positions(k: int, beta: int) -> list[int]:
    """Positions of the good sub-basis inside ``enumerate_vf_basis(k, beta)``."""
    full = enumerate_vf_basis(k, beta)
    return [j for j, (_, m) in enumerate(full.elements) if m[-1] >= 1]


def variable_names(k: int) -> list[str]:
    return [f"x{j}" for j in range(1, k)] + ["z", "eps"]


def format_monomial(m: Monomial) -> str:
    names = variable_names(len(m) - 1)
    parts = []
    for name, a in zip(names, m):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts) if parts else "1"


def format_element(e: tuple, k: int) -> str:
    i, m = e
    d = f"d/d{variable_names(k)[i]}"
    return d if not any(m) else f"{format_monomial(m)} {d}"
