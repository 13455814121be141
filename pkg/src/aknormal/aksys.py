"""The A_k family: principal part, shape validators, random inputs and the
block-matrix form of d* used to cross-check :mod:`aknormal.homology`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exactalg import QMatrix, kernel_basis, primitive_integer_vector, rank
from .grading import (
    enumerate_good_basis,
    enumerate_poly_basis,
    enumerate_vf_basis,
    format_monomial,
    good_positions,
    variable_names,
    weights,
)
from .homology import (
    OperatorMatrix,
    gram_adjoint,
    matrix_of_dstar,
    poly_operator_matrix,
    principal_part,
)
from .polyvf import Polynomial, VectorField, directional_derivative, quasiorder

__all__ = [
    "AkSystem",
    "KernelReport",
    "ValidationError",
    "build_Gk",
    "build_F",
    "validate_ak_sfs",
    "validate_good_perturbation",
    "random_good_perturbation",
    "random_ak_perturbation",
    "dstar_blocks",
    "explicit_dstar_good",
    "block_labels",
    "eps_slices_injective",
    "verify_kernel_trivial",
]


class ValidationError(ValueError):
    """Raised when a field fails the A_k-SFS or good-perturbation checks."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def build_Gk(k: int) -> Polynomial:
    """``z^k + sum_{i=1}^{k-1} x_i z^(i-1)``."""
    return -principal_part(k)[weights(k).z]


def build_F(k: int) -> VectorField:
    return principal_part(k)


@dataclass(frozen=True)
class AkSystem:
    k: int
    X: VectorField
    F: VectorField
    P: VectorField

    def __post_init__(self):
        if self.X != self.F + self.P:
            raise ValueError("X must equal F + P")
        if self.F != build_F(self.k):
            raise ValueError("F is not the A_k principal part")
        problems = validate_good_perturbation(self.P, self.k)
        if problems:
            raise ValidationError(problems)

    @classmethod
    def from_perturbation(cls, k: int, P: VectorField) -> "AkSystem":
        """Wrap a good perturbation ``P`` of ``F`` (Def.-1 shape not required)."""
        F = build_F(k)
        return cls(k, F + P, F, P)


def _divide_by_eps(p: Polynomial, power: int):
    """``(p / eps^power, offending monomials)``."""
    e = p.k
    bad = [m for m in p.terms if m[e] < power]
    quotient = {}
    for m, c in p.terms.items():
        if m[e] >= power:
            mm = list(m)
            mm[e] -= power
            quotient[tuple(mm)] = c
    return Polynomial(p.k, quotient), bad


def _fmt(ms) -> str:
    return ", ".join(format_monomial(m) for m in sorted(ms, reverse=True))


def validate_ak_sfs(X: VectorField, k: int) -> AkSystem:
    """Check the A_k slow-fast shape clause by clause and split ``X = F + P``.

    Raises :class:`ValidationError` listing every violated clause.
    """
    if X.k != k:
        raise ValidationError([f"field has k={X.k}, expected k={k}"])
    w = weights(k)
    names = variable_names(k)
    F = build_F(k)
    v = []
    if X[w.eps]:
        v.append(f"eps-component must vanish, found {X[w.eps]}")
    # x_1: eps + eps^2 f_1
    f1, bad = _divide_by_eps(X[0] - F[0], 2)
    if bad:
        v.append(f"{names[0]}-component minus eps is not divisible by eps^2 (terms {_fmt(bad)})")
    if f1.constant_term():
        v.append(f"f_1 does not vanish at the origin (constant {f1.constant_term()})")
    for i in range(1, k - 1):
        fi, bad = _divide_by_eps(X[i], 2)
        if bad:
            v.append(f"{names[i]}-component is not divisible by eps^2 (terms {_fmt(bad)})")
        if fi.constant_term():
            v.append(f"f_{i + 1} does not vanish at the origin (constant {fi.constant_term()})")
    fk, bad = _divide_by_eps(X[w.z] - F[w.z], 1)
    if bad:
        v.append(f"z-component plus G_k is not divisible by eps (terms {_fmt(bad)})")
    if fk.constant_term():
        v.append(f"f_{k} does not vanish at the origin (constant {fk.constant_term()})")
    if v:
        raise ValidationError(v)
    P = X - F
    return AkSystem(k, X, F, P)


def validate_good_perturbation(P: VectorField, k: int) -> list[str]:
    """Violated clauses of the good-perturbation definition; empty means ok."""
    if P.k != k:
        return [f"field has k={P.k}, expected k={k}"]
    w = weights(k)
    out = []
    qo = quasiorder(P, w)
    if qo <= k - 1:
        out.append(f"quasiorder {qo} is not greater than k-1 = {k - 1}")
    if P[w.eps]:
        out.append("eps-component must vanish")
    names = variable_names(k)
    for i in range(k):
        bad = [m for m in P[i].terms if m[w.eps] == 0]
        if bad:
            out.append(f"{names[i]}-component does not vanish at eps=0 (terms {_fmt(bad)})")
    return out


def _random_coeff(rng: random.Random) -> Fraction:
    num = 0
    while num == 0:
        num = rng.randint(-9, 9)
    return Fraction(num, rng.randint(1, 5))


def random_good_perturbation(k: int, max_degree: int, seed: int, density: float = 0.5) -> VectorField:
    """Random rational combination of good basis elements in degrees ``k..max_degree``.

    Each element is kept with probability ``density``; at least one term per
    degree is kept when the degree has any good elements.
    """
    if max_degree < k:
        raise ValueError(f"max_degree must be >= k = {k}")
    rng = random.Random(seed)
    elements, coords = [], []
    for beta in range(k, max_degree + 1):
        basis = enumerate_good_basis(k, beta)
        if not len(basis):
            continue
        chosen = [j for j in range(len(basis)) if rng.random() < density]
        if not chosen:
            chosen = [rng.randrange(len(basis))]
        for j in chosen:
            elements.append(basis.elements[j])
            coords.append(_random_coeff(rng))
    return VectorField.from_coordinates(k, elements, coords)


def random_ak_perturbation(k: int, max_degree: int, seed: int, density: float = 0.5) -> VectorField:
    """Like :func:`random_good_perturbation`, restricted to the slow-fast shape:
    ``eps^2 f_i`` in the x-components and ``eps f_k`` in z, all ``f`` vanishing at 0.
    """
    if max_degree < k:
        raise ValueError(f"max_degree must be >= k = {k}")
    rng = random.Random(seed)
    w = weights(k)
    elements, coords = [], []
    for beta in range(k, max_degree + 1):
        cand = []
        for i, m in enumerate_good_basis(k, beta).elements:
            need = 1 if i == w.z else 2
            f = list(m)
            f[w.eps] -= need
            if f[w.eps] >= 0 and any(f):
                cand.append((i, m))
        chosen = [e for e in cand if rng.random() < density]
        if cand and not chosen:
            chosen = [cand[rng.randrange(len(cand))]]
        for e in chosen:
            elements.append(e)
            coords.append(_random_coeff(rng))
    return VectorField.from_coordinates(k, elements, coords)


# --- block form of d* ---------------------------------------------------------

@lru_cache(maxsize=None)
def _F_adjoint(k: int, degree: int) -> QMatrix:
    """Adjoint of ``Q -> F(Q)`` mapping degree ``degree + k - 1`` to ``degree``."""
    F = build_F(k)
    M, dom, cod = poly_operator_matrix(lambda q: directional_derivative(F, q), k, degree, degree + k - 1)
    return gram_adjoint(M, dom.gram, cod.gram)


def _mult_adjoint(poly: Polynomial, degree: int, shift: int) -> QMatrix:
    """Adjoint of ``q -> poly * q`` from degree ``degree`` to ``degree + shift``."""
    M, dom, cod = poly_operator_matrix(lambda q: poly * q, poly.k, degree, degree + shift)
    return gram_adjoint(M, dom.gram, cod.gram)


def dstar_blocks(k: int, beta: int, with_eps: bool = False) -> dict:
    """Nonzero blocks of d* on degree ``beta``, read off the A_k principal part.

    Returns ``{(row, col): (label, matrix)}`` with 0-based component indices.
    Block ``(i, j)`` maps the ``j``-th component of the input to the ``i``-th
    component of the output. Rows/columns for eps appear only when
    ``with_eps`` is set.
    """
    w = weights(k)
    gamma = beta - k + 1
    z = w.z
    zvar = Polynomial.variable(k, z)
    one = Polynomial.constant(k, 1)
    blocks = {}
    for i in range(k - 1):
        blocks[(i, i)] = ("F*", _F_adjoint(k, gamma + w.r[i]))
        blocks[(i, z)] = ({0: "1*", 1: "z*"}.get(i, f"(z^{i})*"), _mult_adjoint(zvar ** i, gamma + w.r[i], i))
    Gz = build_Gk(k).partial(z)
    Fs = _F_adjoint(k, gamma + 1)
    blocks[(z, z)] = (f"F*+({Gz})*", Fs + _mult_adjoint(Gz, gamma + 1, k - 1))
    if with_eps:
        e = w.eps
        blocks[(e, 0)] = ("-1*", -_mult_adjoint(one, gamma + w.r[e], 0))
        blocks[(e, e)] = ("F*", _F_adjoint(k, gamma + w.r[e]))
    return blocks


def block_labels(k: int, with_eps: bool = True) -> list[list[str]]:
    """Label grid of the d* block pattern (``"0"`` for empty blocks)."""
    n = k + 1 if with_eps else k
    grid = [["0"] * n for _ in range(n)]
    for (i, j), (label, _) in dstar_blocks(k, k, with_eps).items():
        grid[i][j] = label
    return grid


def explicit_dstar_good(k: int, beta: int, with_eps: bool = False) -> OperatorMatrix:
    """d* on degree ``beta`` assembled from :func:`dstar_blocks`.

    Raises ``RuntimeError`` if the result differs from the Gram-transpose
    construction :func:`aknormal.homology.matrix_of_dstar` in any entry.
    """
    if beta < k:
        raise ValueError(f"beta must be >= k = {k}")
    gamma = beta - k + 1
    dom = enumerate_vf_basis(k, beta, with_eps)
    cod = enumerate_vf_basis(k, gamma, with_eps)
    dslices = dom.component_slices()
    cslices = cod.component_slices()
    out = [[Fraction(0)] * len(dom) for _ in range(len(cod))]
    for (i, j), (_, B) in dstar_blocks(k, beta, with_eps).items():
        rows = cslices.get(i, [])
        cols = dslices.get(j, [])
        if B.shape != (len(rows), len(cols)):
            raise RuntimeError(f"block ({i},{j}) has shape {B.shape}, expected {(len(rows), len(cols))}")
        for a, ra in enumerate(rows):
            for b, cb in enumerate(cols):
                out[ra][cb] += B[a, b]
    M = QMatrix.from_rows(out, len(dom))
    ref = matrix_of_dstar(k, beta, with_eps)
    if M != ref.matrix:
        bad = next(
            (a, b) for a in range(M.rows) for b in range(M.cols) if M[a, b] != ref.matrix[a, b]
        )
        raise RuntimeError(
            f"block d* disagrees with Gram-transpose d* at k={k}, beta={beta}, entry {bad}: "
            f"{M[bad]} != {ref.matrix[bad]}"
        )
    return OperatorMatrix(M, dom, cod, "dstar")


# --- kernel triviality --------------------------------------------------------

@dataclass
class KernelReport:
    k: int
    beta: int
    dim_space: int
    dim_good: int
    dim_full_kernel: int
    dim_good_kernel: int
    witnesses: list = field(default_factory=list)
    # staged elimination along the block structure
    p1_forced_zero: bool = True
    pk_forced_zero: bool = True
    slices_ok: bool = True
    candidates_p1_pk_zero: bool = True

    @property
    def ok(self) -> bool:
        return (
            self.dim_good_kernel == 0
            and self.p1_forced_zero
            and self.pk_forced_zero
            and self.slices_ok
            and self.candidates_p1_pk_zero
        )


def _good_component_columns(k: int, beta: int, component: int, with_eps: bool) -> list[int]:
    basis = enumerate_vf_basis(k, beta, with_eps)
    return [j for j, (i, m) in enumerate(basis.elements) if i == component and m[-1] >= 1]


def _full_column_rank(M: QMatrix) -> bool:
    return M.cols == 0 or rank(M) == M.cols


def eps_slices_injective(k: int, beta: int, component: int) -> bool:
    """Elimination of an eps-divisible ``P_j`` from ``F*(P_j) = 0``, one eps-power at a time.

    Checks that ``F*`` only couples eps-exponents ``n`` (output) with ``n`` and
    ``n + 1`` (input), and that each slice ``rows n-1 x columns n`` is injective,
    so coefficients vanish slice by slice starting at ``n = 1``.
    """
    w = weights(k)
    gamma = beta - k + 1
    Fs = _F_adjoint(k, gamma + w.r[component])
    rows = enumerate_poly_basis(k, gamma + w.r[component]).monomials
    cols = enumerate_poly_basis(k, beta + w.r[component]).monomials
    e = w.eps
    for a, q in enumerate(rows):
        for b, p in enumerate(cols):
            if Fs[a, b] and p[e] not in (q[e], q[e] + 1):
                return False
    top = max((p[e] for p in cols), default=0)
    for n in range(1, top + 1):
        ci = [b for b, p in enumerate(cols) if p[e] == n]
        ri = [a for a, q in enumerate(rows) if q[e] == n - 1]
        if not ci:
            continue
        if not ri or not _full_column_rank(Fs.select_rows(ri).select_columns(ci)):
            return False
    return True


def verify_kernel_trivial(k: int, beta_min: int, beta_max: int) -> list[KernelReport]:
    """Kernel of d* restricted to good fields, for each degree in the range."""
    if not (k <= beta_min <= beta_max):
        raise ValueError(f"need k <= beta_min <= beta_max, got {k}, {beta_min}, {beta_max}")
    w = weights(k)
    reports = []
    for beta in range(beta_min, beta_max + 1):
        S = matrix_of_dstar(k, beta)
        good = good_positions(k, beta)
        full_ker = kernel_basis(S.matrix)
        sub = S.matrix.select_columns(good)
        gker = kernel_basis(sub) if good else []
        rep = KernelReport(
            k=k,
            beta=beta,
            dim_space=len(S.domain),
            dim_good=len(good),
            dim_full_kernel=len(full_ker),
            dim_good_kernel=len(gker),
            witnesses=[primitive_integer_vector(v) for v in gker],
        )
        # eps-row: -1* P_1 = 0 forces P_1 = 0
        Se = matrix_of_dstar(k, beta, with_eps=True)
        ext_rows = Se.codomain.component_slices()
        c1 = _good_component_columns(k, beta, 0, True)
        ck = _good_component_columns(k, beta, w.z, True)
        rep.p1_forced_zero = _full_column_rank(Se.matrix.select_rows(ext_rows.get(w.eps, [])).select_columns(c1))
        # z-row only involves P_k: (F* + Z*) P_k = 0 forces P_k = 0
        rep.pk_forced_zero = _full_column_rank(Se.matrix.select_rows(ext_rows.get(w.z, [])).select_columns(ck))
        rep.slices_ok = all(eps_slices_injective(k, beta, j) for j in range(k - 1))
        # any candidate from the full good kernel must already have P_1 = P_k = 0
        comps = [S.domain.elements[j][0] for j in good]
        rep.candidates_p1_pk_zero = all(
            not v[t] for v in gker for t, c in enumerate(comps) if c in (0, w.z)
        )
        reports.append(rep)
    return reports
