from fractions import Fraction as Q
from math import factorial

import pytest

from aknormal.grading import (
    enumerate_good_basis,
    enumerate_monomials,
    enumerate_poly_basis,
    enumerate_vf_basis,
    format_element,
    good_positions,
    gram_weight,
    quasidegree,
    weights,
)


def series_dim(r, delta):
    """Coefficient of t^delta in prod 1/(1 - t^r_i), by the usual coin-change recursion."""
    c = [1] + [0] * delta
    for ri in r:
        for d in range(ri, delta + 1):
            c[d] += c[d - ri]
    return c[delta]


def test_weights():
    assert weights(2).r == (2, 1, 3)
    assert weights(3).r == (3, 2, 1, 5)
    assert weights(4).r == (4, 3, 2, 1, 7)
    w = weights(4)
    assert (w.z, w.eps, w.n) == (3, 4, 5)


@pytest.mark.parametrize("k", [1, 0, -3])
def test_weights_reject_small_k(k):
    with pytest.raises(ValueError):
        weights(k)


def test_k2_degree3_basis_and_gram():
    b = enumerate_poly_basis(2, 3)
    assert set(b.monomials) == {(0, 3, 0), (1, 1, 0), (0, 0, 1)}
    gram = dict(zip(b.monomials, b.gram))
    assert gram[(0, 3, 0)] == 1
    assert gram[(1, 1, 0)] == Q(1, 6)
    assert gram[(0, 0, 1)] == Q(1, 6)


def test_degree_zero_is_constants():
    b = enumerate_poly_basis(2, 0)
    assert b.monomials == ((0, 0, 0),)
    assert b.gram == (1,)


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("delta", range(0, 16))
def test_dimension_matches_generating_function(k, delta):
    w = weights(k)
    mons = enumerate_monomials(k, delta)
    assert len(mons) == series_dim(w.r, delta)
    assert len(set(mons)) == len(mons)
    assert all(quasidegree(m, w) == delta for m in mons)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_canonical_order_is_lex_descending(k):
    for delta in range(8):
        mons = list(enumerate_monomials(k, delta))
        assert mons == sorted(mons, reverse=True)


def test_gram_weight_formula():
    w = weights(3)
    m = (1, 2, 3, 1)
    deg = quasidegree(m, w)
    expected = Q(factorial(1) ** 3 * factorial(2) ** 2 * factorial(3) ** 1 * factorial(1) ** 5, factorial(deg))
    assert gram_weight(m, w, deg) == expected


def test_vf_basis_excludes_eps_component():
    for k in (2, 3, 4):
        b = enumerate_vf_basis(k, 4)
        assert all(i < k for i, _ in b.elements)
        be = enumerate_vf_basis(k, 4, with_eps=True)
        assert any(i == k for i, _ in be.elements)
        w = weights(k)
        for i, m in be.elements:
            assert quasidegree(m, w) == 4 + w.r[i]


def test_vf_dimension():
    for k in (2, 3):
        w = weights(k)
        for g in range(6):
            assert len(enumerate_vf_basis(k, g)) == sum(series_dim(w.r, g + w.r[i]) for i in range(k))


def test_good_basis_k2_degree2():
    b = enumerate_good_basis(2, 2)
    assert [format_element(e, 2) for e in b.elements] == ["z*eps d/dx1", "eps d/dz"]


def test_good_basis_is_eps_divisible_subset():
    for k in (2, 3, 4):
        for beta in range(k, k + 5):
            full = enumerate_vf_basis(k, beta)
            good = enumerate_good_basis(k, beta)
            pos = good_positions(k, beta)
            assert [full.elements[p] for p in pos] == list(good.elements)
            assert all(m[k] >= 1 for _, m in good.elements)
            assert len(good) == sum(1 for _, m in full.elements if m[k] >= 1)


def test_good_basis_rejects_low_degree():
    with pytest.raises(ValueError):
        enumerate_good_basis(3, 2)
