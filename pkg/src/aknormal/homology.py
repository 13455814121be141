"""Weighted inner product and the homological operators d, d* and box = d d*.

Matrices are built on the monomial bases from :mod:`aknormal.grading`.
Monomials are pairwise orthogonal, so every Gram matrix is diagonal and the
adjoint of a matrix ``D`` between two graded pieces is
``diag(g_dom)^-1 D^T diag(g_cod)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactalg import QMatrix, Solver, column_space_basis, kernel_basis, rank
from .grading import (
    PolyBasis,
    VFBasis,
    enumerate_poly_basis,
    enumerate_vf_basis,
    gram_weight,
    weights,
)
from .polyvf import Polynomial, VectorField, lie_bracket

__all__ = [
    "OperatorMatrix",
    "inner_product_poly",
    "inner_product_vf",
    "gram_adjoint",
    "principal_part",
    "matrix_of_d",
    "matrix_of_dstar",
    "matrix_of_box",
    "adjoint_matrix_of_d",
    "verify_adjointness",
    "verify_lemma_kernel",
    "verify_decomposition",
    "DecompositionReport",
    "LemmaReport",
    "gram_form",
]


@dataclass(frozen=True)
class OperatorMatrix:
    """Matrix of a linear map; column ``j`` is the image of ``domain[j]``."""

    matrix: QMatrix
    domain: object
    codomain: object
    op_tag: str

    def __post_init__(self):
        if self.matrix.shape != (len(self.codomain), len(self.domain)):
            raise ValueError(
                f"{self.op_tag}: matrix {self.matrix.shape} does not fit "
                f"{len(self.codomain)}x{len(self.domain)}"
            )


def inner_product_poly(f: Polynomial, g: Polynomial, w, delta: int) -> Fraction:
    if not f.is_quasihomogeneous(delta) or not g.is_quasihomogeneous(delta):
        raise ValueError(f"inner product of degree {delta} needs quasihomogeneous inputs of that degree")
    out = Fraction(0)
    small, big = (f, g) if len(f.terms) <= len(g.terms) else (g, f)
    for m, c in small.terms.items():
        d = big.terms.get(m)
        if d:
            out += c * d * gram_weight(m, w, delta)
    return out


def inner_product_vf(X: VectorField, Y: VectorField, w, delta: int) -> Fraction:
    if X.k != Y.k:
        raise ValueError("mixed k")
    return sum(
        (inner_product_poly(a, b, w, delta + w.r[i]) for i, (a, b) in enumerate(zip(X.components, Y.components))),
        Fraction(0),
    )


def gram_form(gram: Sequence[Fraction], u: Sequence, v: Sequence) -> Fraction:
    """``u^T diag(gram) v``."""
    return sum((g * a * b for g, a, b in zip(gram, u, v) if a and b), Fraction(0))


def gram_adjoint(D: QMatrix, dom_gram: Sequence[Fraction], cod_gram: Sequence[Fraction]) -> QMatrix:
    """Adjoint of ``D: dom -> cod`` for diagonal Gram forms, as a map cod -> dom."""
    n, m = D.rows, D.cols
    if len(dom_gram) != m or len(cod_gram) != n:
        raise ValueError("Gram weights do not match the matrix")
    e = D.entries
    out = [
        e[j * m + i] * cod_gram[j] / dom_gram[i] if e[j * m + i] else Fraction(0)
        for i in range(m)
        for j in range(n)
    ]
    return QMatrix(m, n, tuple(out))


@lru_cache(maxsize=None)
def principal_part(k: int) -> VectorField:
    """``eps d/dx_1 - G_k d/dz``."""
    w = weights(k)
    terms = {(0,) * (k - 1) + (k, 0): -1}
    for i in range(k - 1):
        m = [0] * (k + 1)
        m[i] = 1
        m[k - 1] = i
        terms[tuple(m)] = -1
    comps = [Polynomial.zero(k) for _ in range(k + 1)]
    comps[0] = Polynomial.variable(k, w.eps)
    comps[w.z] = Polynomial(k, terms)
    return VectorField(k, comps)


def _expand(X: VectorField, basis: VFBasis, index: dict) -> list[Fraction]:
    try:
        return X.coordinates(basis.elements, index)
    except ValueError as exc:
        raise RuntimeError(f"image left the degree-{basis.gamma} space: {exc}") from exc


@lru_cache(maxsize=None)
def matrix_of_d(k: int, gamma: int, with_eps: bool = False) -> OperatorMatrix:
    """``U -> [F, U]`` from degree ``gamma`` to degree ``gamma + k - 1``."""
    F = principal_part(k)
    dom = enumerate_vf_basis(k, gamma, with_eps)
    cod = enumerate_vf_basis(k, gamma + k - 1, with_eps)
    index = cod.index()
    cols = []
    for i, m in dom.elements:
        image = lie_bracket(F, VectorField.basis_element(k, i, m))
        cols.append(_expand(image, cod, index))
    return OperatorMatrix(QMatrix.from_columns(cols, len(cod)), dom, cod, "d")


@lru_cache(maxsize=None)
def adjoint_matrix_of_d(k: int, beta: int, with_eps: bool = False) -> OperatorMatrix:
    """Gram adjoint of d, from degree ``beta`` down to ``beta - k + 1``, any ``beta``."""
    D = matrix_of_d(k, beta - k + 1, with_eps)
    M = gram_adjoint(D.matrix, D.domain.gram, D.codomain.gram)
    return OperatorMatrix(M, D.codomain, D.domain, "dstar")


def matrix_of_dstar(k: int, beta: int, with_eps: bool = False) -> OperatorMatrix:
    if beta < k:
        raise ValueError(f"d* is taken on degrees beta >= k = {k}, got {beta}")
    return adjoint_matrix_of_d(k, beta, with_eps)


@lru_cache(maxsize=None)
def matrix_of_box(k: int, beta: int) -> OperatorMatrix:
    if beta < k:
        raise ValueError(f"box is taken on degrees beta >= k = {k}, got {beta}")
    D = matrix_of_d(k, beta - k + 1)
    S = matrix_of_dstar(k, beta)
    return OperatorMatrix(D.matrix @ S.matrix, S.domain, D.codomain, "box")


def verify_adjointness(k: int, beta: int, pairs: Sequence[tuple[VectorField, VectorField]]) -> list:
    """Check <d U, V> = <U, d* V> on the given pairs, returning the failing ones."""
    w = weights(k)
    gamma = beta - k + 1
    D = matrix_of_d(k, gamma)
    S = adjoint_matrix_of_d(k, beta)
    failures = []
    for U, V in pairs:
        u = U.coordinates(D.domain.elements)
        v = V.coordinates(D.codomain.elements)
        dU = VectorField.from_coordinates(k, D.codomain.elements, D.matrix.apply(u))
        dsV = VectorField.from_coordinates(k, D.domain.elements, S.matrix.apply(v))
        lhs = inner_product_vf(dU, V, w, beta)
        rhs = inner_product_vf(U, dsV, w, gamma)
        if lhs != rhs:
            failures.append((U, V, lhs, rhs))
    return failures


@dataclass
class LemmaReport:
    k: int
    beta: int
    dim_space: int
    dim_ker_box: int
    dim_ker_dstar: int
    box_in_dstar: bool
    dstar_in_box: bool
    box_self_adjoint: bool

    @property
    def ok(self) -> bool:
        return (
            self.dim_ker_box == self.dim_ker_dstar
            and self.box_in_dstar
            and self.dstar_in_box
            and self.box_self_adjoint
        )


def _contained(vectors: list, basis: list, n: int) -> bool:
    """Every vector lies in the span of ``basis`` (checked by exact solves)."""
    if not vectors:
        return True
    if not basis:
        return all(not any(v) for v in vectors)
    B = QMatrix.from_columns(basis, n)
    solver = Solver(B)
    return all(solver.solve(v) is not None for v in vectors)


def verify_lemma_kernel(k: int, beta: int) -> LemmaReport:
    """ker box_beta == ker d*|_beta, by dimensions and mutual containment."""
    S = matrix_of_dstar(k, beta)
    B = matrix_of_box(k, beta)
    n = len(S.domain)
    kb = kernel_basis(B.matrix)
    ks = kernel_basis(S.matrix)
    G = QMatrix.diagonal(S.domain.gram)
    GB = G @ B.matrix
    return LemmaReport(
        k=k,
        beta=beta,
        dim_space=n,
        dim_ker_box=len(kb),
        dim_ker_dstar=len(ks),
        box_in_dstar=_contained(kb, ks, n),
        dstar_in_box=_contained(ks, kb, n),
        box_self_adjoint=GB.transpose() == GB,
    )


@dataclass
class DecompositionReport:
    k: int
    gamma: int
    dim_space: int
    dim_image_dstar: int
    dim_kernel_d: int
    orthogonal: bool
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.dim_image_dstar + self.dim_kernel_d == self.dim_space and self.orthogonal


def verify_decomposition(k: int, gamma: int) -> DecompositionReport:
    """Degree-``gamma`` space = Im d* (+) ker d, with the two factors Gram-orthogonal."""
    D = matrix_of_d(k, gamma)
    basis = D.domain
    n = len(basis)
    if n == 0:
        return DecompositionReport(k, gamma, 0, 0, 0, True)
    S = adjoint_matrix_of_d(k, gamma + k - 1)
    image = column_space_basis(S.matrix)
    kern = kernel_basis(D.matrix)
    bad = []
    for a, u in enumerate(image):
        for b, v in enumerate(kern):
            ip = gram_form(basis.gram, u, v)
            if ip:
                bad.append((a, b, ip))
    return DecompositionReport(k, gamma, n, len(image), len(kern), not bad, bad)


def image_rank(k: int, gamma: int) -> int:
    return rank(matrix_of_d(k, gamma).matrix)


def poly_operator_matrix(op, k: int, dom_degree: int, cod_degree: int) -> tuple[QMatrix, PolyBasis, PolyBasis]:
    """Matrix of a linear map on polynomials between two graded pieces."""
    dom = enumerate_poly_basis(k, dom_degree)
    cod = enumerate_poly_basis(k, cod_degree)
    index = cod.index()
    cols = []
    for m in dom.monomials:
        image = op(Polynomial.monomial(k, m))
        col = [Fraction(0)] * len(cod)
        for mm, c in image.terms.items():
            j = index.get(mm)
            if j is None:
                raise RuntimeError(f"image of {m} has a term of the wrong degree")
            col[j] = c
        cols.append(col)
    return QMatrix.from_columns(cols, len(cod)), dom, cod

