from fractions import Fraction as Q

import pytest

import aknormal.homology as hom
from aknormal.exactalg import QMatrix
from aknormal.grading import enumerate_vf_basis, weights
from aknormal.homology import (
    adjoint_matrix_of_d,
    gram_adjoint,
    inner_product_poly,
    inner_product_vf,
    matrix_of_box,
    matrix_of_d,
    matrix_of_dstar,
    verify_adjointness,
    verify_decomposition,
    verify_lemma_kernel,
)
from aknormal.polyvf import Polynomial, VectorField, lie_bracket


def test_inner_product_poly_diagonal():
    w = weights(2)
    f = Polynomial(2, {(0, 3, 0): 2, (1, 1, 0): 3})
    g = Polynomial(2, {(0, 3, 0): 5, (1, 1, 0): 1, (0, 0, 1): 7})
    assert inner_product_poly(f, g, w, 3) == 2 * 5 + 3 * Q(1, 6)


def test_inner_product_rejects_wrong_degree():
    w = weights(2)
    with pytest.raises(ValueError):
        inner_product_poly(Polynomial.variable(2, 0), Polynomial.variable(2, 1), w, 2)


def test_d_of_dx1_entry():
    # d/dx1 sits in degree -r_1 = -2
    op = matrix_of_d(2, -2)
    cols = op.domain.elements
    rows = op.codomain.elements
    j = cols.index((0, (0, 0, 0)))
    i = rows.index((1, (0, 0, 0)))
    # d(d/dx1) = d/dz
    assert op.matrix[i, j] == 1
    assert sum(1 for r in range(op.matrix.rows) if op.matrix[r, j]) == 1


def test_gram_adjoint_small():
    D = QMatrix.from_rows([[1, 2], [0, 3]])
    S = gram_adjoint(D, [Q(1), Q(1, 2)], [Q(1, 3), Q(1)])
    # S[i][j] = D[j][i] * cod[j] / dom[i]
    assert S.to_rows() == [[Q(1, 3), 0], [Q(4, 3), 6]]


@pytest.mark.parametrize("k,beta", [(2, 2), (2, 5), (3, 3), (3, 6), (4, 4), (4, 6)])
def test_adjoint_identity(k, beta, field_factory):
    g = beta - k + 1
    pairs = [(field_factory(k, g), field_factory(k, beta)) for _ in range(10)]
    assert verify_adjointness(k, beta, pairs) == []


def test_adjoint_identity_detects_missing_gram(monkeypatch, field_factory):
    """Mutation: an adjoint built from the plain transpose must be caught."""
    k, beta = 2, 4
    pairs = [(field_factory(k, beta - k + 1), field_factory(k, beta)) for _ in range(10)]

    def transpose_only(D, dom_gram, cod_gram):
        return D.transpose()

    monkeypatch.setattr(hom, "gram_adjoint", transpose_only)
    hom.adjoint_matrix_of_d.cache_clear()
    try:
        assert verify_adjointness(k, beta, pairs)
    finally:
        monkeypatch.undo()
        hom.adjoint_matrix_of_d.cache_clear()
    assert verify_adjointness(k, beta, pairs) == []


def test_dstar_requires_beta_at_least_k():
    with pytest.raises(ValueError):
        matrix_of_dstar(3, 2)
    with pytest.raises(ValueError):
        matrix_of_box(3, 2)


def test_box_self_adjoint_k2_beta4():
    op = matrix_of_box(2, 4)
    assert op.matrix.rows == op.matrix.cols == len(enumerate_vf_basis(2, 4))
    GB = QMatrix.diagonal(op.domain.gram) @ op.matrix
    assert GB.transpose() == GB


@pytest.mark.parametrize("k", [2, 3, 4])
def test_lemma_kernel(k):
    for beta in range(k, k + 5):
        rep = verify_lemma_kernel(k, beta)
        assert rep.ok, rep


@pytest.mark.parametrize("k", [2, 3, 4])
def test_decomposition(k):
    for gamma in range(0, 6):
        rep = verify_decomposition(k, gamma)
        assert rep.ok, rep
        assert rep.dim_image_dstar + rep.dim_kernel_d == rep.dim_space


def test_with_eps_operator_shapes():
    D = matrix_of_d(3, 2, with_eps=True)
    assert D.matrix.shape == (len(enumerate_vf_basis(3, 4, True)), len(enumerate_vf_basis(3, 2, True)))
    S = adjoint_matrix_of_d(3, 4, True)
    assert S.matrix.shape == D.matrix.transpose().shape


def test_d_image_stays_in_codomain():
    k = 3
    F = hom.principal_part(k)
    for gamma in range(4):
        D = matrix_of_d(k, gamma)
        for j, (i, m) in enumerate(D.domain.elements):
            img = lie_bracket(F, VectorField.basis_element(k, i, m))
            assert VectorField.from_coordinates(k, D.codomain.elements, D.matrix.column(j)) == img
