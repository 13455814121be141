import math
from fractions import Fraction as Q

from hypothesis import given, settings
from hypothesis import strategies as st

from aknormal.aksys import build_F
from aknormal.polyvf import (
    Polynomial,
    VectorField,
    directional_derivative,
    lie_bracket,
    quasi_components,
    quasiorder,
)


def vf(k, comps):
    return VectorField(k, [Polynomial(k, c) for c in comps])


def test_principal_part_k2():
    F = build_F(2)
    assert F[0] == Polynomial.variable(2, 2)
    assert F[1] == Polynomial(2, {(0, 2, 0): -1, (1, 0, 0): -1})
    assert F[2].is_zero()


def test_d_of_dx1_is_dz():
    F = build_F(2)
    dx1 = VectorField.basis_element(2, 0, (0, 0, 0))
    dz = VectorField.basis_element(2, 1, (0, 0, 0))
    assert lie_bracket(F, dx1) == dz


def test_bracket_F_dz():
    F = build_F(2)
    dz = VectorField.basis_element(2, 1, (0, 0, 0))
    assert lie_bracket(F, dz) == VectorField.basis_element(2, 1, (0, 1, 0), 2)


def test_bracket_convention():
    # [x d/dz, z d/dx1] = x1 d/dx1 - z d/dz
    X = VectorField.basis_element(2, 1, (1, 0, 0))
    Y = VectorField.basis_element(2, 0, (0, 1, 0))
    expected = VectorField.basis_element(2, 0, (1, 0, 0)) - VectorField.basis_element(2, 1, (0, 1, 0))
    assert lie_bracket(X, Y) == expected


def test_polynomial_arithmetic():
    k = 2
    x, z, e = (Polynomial.variable(k, i) for i in range(3))
    p = (x + z) ** 2
    assert p == x * x + (x * z).scale(2) + z * z
    assert p.partial(1) == (x + z).scale(2)
    assert (p - p).is_zero()
    assert Polynomial.constant(k, 3).constant_term() == 3
    assert str(x * z - e.scale(Q(1, 2))) == "x1*z - 1/2*eps"


def test_truncate_and_homogeneous_parts():
    k = 2
    x, z, e = (Polynomial.variable(k, i) for i in range(3))
    p = x + z + e + z ** 4
    assert p.degrees() == {1, 2, 3, 4}
    assert p.truncate(2) == x + z
    assert p.homogeneous_part(3) == e
    assert p.mul_truncated(p, 3) == (p * p).truncate(3)


def test_substitute():
    k = 2
    x, z, e = (Polynomial.variable(k, i) for i in range(3))
    p = x * z + e
    out = p.substitute([x + z, z, e.scale(2)], 100)
    assert out == (x + z) * z + e.scale(2)


def test_quasiorder():
    k = 3
    assert quasiorder(VectorField.zero(k)) == math.inf
    F = build_F(k)
    assert quasiorder(F) == k - 1
    assert F.is_quasihomogeneous(k - 1)
    X = F + VectorField.basis_element(k, 1, (0, 0, 1, 1))
    comps = quasi_components(X)
    assert list(comps) == sorted(comps)
    assert sum(comps.values(), VectorField.zero(k)) == X


def test_from_coordinates_round_trip(field_factory):
    from aknormal.grading import enumerate_vf_basis

    X = field_factory(3, 4)
    b = enumerate_vf_basis(3, 4)
    assert VectorField.from_coordinates(3, b.elements, X.coordinates(b.elements)) == X


coef = st.builds(Q, st.integers(-5, 5), st.integers(1, 3))


@st.composite
def fields(draw, k=2, max_terms=4):
    comps = []
    for _ in range(k + 1):
        terms = draw(st.dictionaries(st.tuples(*[st.integers(0, 2)] * (k + 1)), coef, max_size=max_terms))
        comps.append(terms)
    return vf(k, comps)


@st.composite
def polys(draw, k=2):
    return Polynomial(k, draw(st.dictionaries(st.tuples(*[st.integers(0, 2)] * (k + 1)), coef, max_size=4)))


@settings(max_examples=60, deadline=None)
@given(fields(), fields(), fields())
def test_bracket_lie_algebra(X, Y, Z):
    assert (lie_bracket(X, Y) + lie_bracket(Y, X)).is_zero()
    jac = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y))
    assert jac.is_zero()
    assert lie_bracket(X, Y + Z) == lie_bracket(X, Y) + lie_bracket(X, Z)


@settings(max_examples=60, deadline=None)
@given(fields(), polys(), polys())
def test_derivation(X, f, g):
    assert X(f * g) == X(f) * g + f * X(g)


@settings(max_examples=60, deadline=None)
@given(fields(), fields(), polys())
def test_bracket_is_commutator(X, Y, f):
    assert lie_bracket(X, Y)(f) == X(Y(f)) - Y(X(f))


@settings(max_examples=40, deadline=None)
@given(fields(), fields(), st.integers(0, 8))
def test_truncated_bracket_agrees(X, Y, N):
    assert lie_bracket(X, Y, N) == lie_bracket(X, Y).truncate(N)


@settings(max_examples=40, deadline=None)
@given(fields(), polys(), st.integers(0, 10))
def test_truncated_derivative_agrees(X, f, N):
    assert directional_derivative(X, f, N) == directional_derivative(X, f).truncate(N)


def test_bracket_adds_degrees(field_factory):
    for k in (2, 3):
        for a in range(0, 4):
            for b in range(0, 4):
                br = lie_bracket(field_factory(k, a), field_factory(k, b))
                assert br.is_zero() or br.is_quasihomogeneous(a + b)
