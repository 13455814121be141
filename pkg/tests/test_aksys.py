import pytest

import aknormal.aksys as aksys
from aknormal.aksys import (
    AkSystem,
    ValidationError,
    block_labels,
    build_F,
    build_Gk,
    dstar_blocks,
    eps_slices_injective,
    explicit_dstar_good,
    random_ak_perturbation,
    random_good_perturbation,
    validate_ak_sfs,
    validate_good_perturbation,
    verify_kernel_trivial,
)
from aknormal.grading import weights
from aknormal.homology import matrix_of_dstar
from aknormal.polyvf import Polynomial, VectorField, quasi_components


def E(k, i, m, c=1):
    return VectorField.basis_element(k, i, m, c)


def test_Gk():
    assert build_Gk(2) == Polynomial(2, {(0, 2, 0): 1, (1, 0, 0): 1})
    assert build_Gk(3) == Polynomial(3, {(0, 0, 3, 0): 1, (1, 0, 0, 0): 1, (0, 1, 1, 0): 1})
    for k in range(2, 7):
        G = build_Gk(k)
        assert len(G.terms) == k
        assert G.is_quasihomogeneous(k)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_F_shape(k):
    F = build_F(k)
    w = weights(k)
    assert F[0] == Polynomial.variable(k, w.eps)
    assert all(F[i].is_zero() for i in range(1, k - 1))
    assert F[w.z] == -build_Gk(k)
    assert F[w.eps].is_zero()
    assert list(quasi_components(F)) == [k - 1]


def test_validate_unperturbed():
    for k in (2, 3, 4):
        s = validate_ak_sfs(build_F(k), k)
        assert s.P.is_zero()


def test_validate_rejects_constant_f1():
    X = build_F(2) + E(2, 0, (0, 0, 2))
    with pytest.raises(ValidationError) as exc:
        validate_ak_sfs(X, 2)
    assert any("f_1" in v for v in exc.value.violations)


def test_validate_accepts_eps2_z():
    P = E(2, 0, (0, 1, 2))
    s = validate_ak_sfs(build_F(2) + P, 2)
    assert s.P == P


def test_validate_reports_all_clauses():
    k = 3
    X = build_F(k) + E(k, 1, (0, 0, 1, 1)) + E(k, 3, (1, 0, 0, 0)) + E(k, 2, (1, 0, 0, 0))
    with pytest.raises(ValidationError) as exc:
        validate_ak_sfs(X, k)
    text = " | ".join(exc.value.violations)
    assert "eps-component" in text
    assert "x2-component" in text
    assert "z-component" in text


def test_good_perturbation_examples():
    assert validate_good_perturbation(VectorField.zero(2), 2) == []
    assert validate_good_perturbation(E(2, 1, (0, 0, 1)), 2) == []
    bad = validate_good_perturbation(E(2, 1, (0, 1, 0)), 2)
    assert any("eps=0" in v for v in bad)
    # eps d/dx1 at k=3 has degree 5 - 3 = 2 = k - 1
    assert any("quasiorder" in v for v in validate_good_perturbation(E(3, 0, (0, 0, 0, 1)), 3))


def test_aksystem_rejects_bad_perturbation():
    with pytest.raises(ValidationError):
        AkSystem.from_perturbation(2, E(2, 1, (0, 1, 0)))


@pytest.mark.parametrize("k", [2, 3, 4])
def test_random_generators(k):
    for seed in range(5):
        P = random_good_perturbation(k, k + 4, seed)
        assert validate_good_perturbation(P, k) == []
        assert P == random_good_perturbation(k, k + 4, seed)
        Q = random_ak_perturbation(k, k + 4, seed)
        validate_ak_sfs(build_F(k) + Q, k)
    degs = set()
    for seed in range(6):
        degs |= set(quasi_components(random_good_perturbation(2, 6, seed)))
    assert len(degs) > 1


def test_k2_block_pattern():
    assert block_labels(2) == [["F*", "1*", "0"], ["0", "F*+(2*z)*", "0"], ["-1*", "0", "F*"]]
    assert block_labels(2, with_eps=False) == [["F*", "1*"], ["0", "F*+(2*z)*"]]


def test_k3_block_pattern():
    grid = block_labels(3)
    assert grid[0][2] == "1*" and grid[1][2] == "z*"
    assert grid[0][0] == grid[1][1] == grid[3][3] == "F*"
    assert grid[3][0] == "-1*"


@pytest.mark.parametrize("k", [2, 3, 4])
def test_explicit_dstar_matches(k):
    for beta in range(k, k + 5):
        for with_eps in (False, True):
            op = explicit_dstar_good(k, beta, with_eps)
            assert op.matrix == matrix_of_dstar(k, beta, with_eps).matrix


def test_explicit_dstar_detects_sign_flip(monkeypatch):
    """Mutation: a sign flip in the F* block must be reported as a mismatch."""
    orig = aksys._F_adjoint

    def flipped(k, degree):
        return -orig(k, degree)

    monkeypatch.setattr(aksys, "_F_adjoint", flipped)
    with pytest.raises(RuntimeError, match="disagrees"):
        explicit_dstar_good(2, 4)


def test_block_shapes_match_component_slices():
    from aknormal.grading import enumerate_vf_basis

    k, beta = 3, 5
    dom = enumerate_vf_basis(k, beta, True).component_slices()
    cod = enumerate_vf_basis(k, beta - k + 1, True).component_slices()
    for (i, j), (_, B) in dstar_blocks(k, beta, True).items():
        assert B.shape == (len(cod.get(i, [])), len(dom.get(j, [])))


@pytest.mark.parametrize("k,hi", [(2, 9), (3, 8), (4, 7)])
def test_kernel_trivial(k, hi):
    reps = verify_kernel_trivial(k, k, hi)
    assert [r.beta for r in reps] == list(range(k, hi + 1))
    for r in reps:
        assert r.dim_good_kernel == 0 and not r.witnesses
        assert r.p1_forced_zero and r.pk_forced_zero and r.slices_ok
        assert r.ok


def test_kernel_dstar_nontrivial_on_full_space():
    # ker d* itself is not zero; only its intersection with good fields is
    reps = verify_kernel_trivial(2, 2, 5)
    assert all(r.dim_full_kernel > 0 for r in reps)


def test_eps_slices():
    # the F* blocks on x_1..x_{k-1} eliminate eps-divisible inputs slice by slice
    for k in (2, 3, 4):
        for beta in range(k, k + 4):
            for comp in range(k - 1):
                assert eps_slices_injective(k, beta, comp)
