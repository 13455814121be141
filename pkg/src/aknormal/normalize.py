"""Degree-by-degree formal normalization of a good perturbation of F.

At each degree ``gamma = k..N`` the degree-``gamma`` part ``P`` of the running
perturbation is split as ``P = d(U) + R`` with ``R`` the Gram-orthogonal
projection of ``P`` onto ker d*, and the running field is replaced by the
time-1 Lie series ``exp(ad U) X`` truncated at ``N``. Since
``[U, F] = -d(U)``, this removes ``P - R`` and leaves lower degrees untouched.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .aksys import AkSystem, validate_good_perturbation
from .exactalg import QMatrix, Solver, kernel_basis
from .grading import weights
from .polyvf import Polynomial, VectorField, lie_bracket, quasiorder

__all__ = [
    "NormalizationResult",
    "ConjugacyCertificate",
    "homological_solve",
    "apply_generator",
    "normalize",
    "verify_conjugacy",
    "coordinate_change",
]


class _Homological:
    """Per-degree data for the homological equation, built once per (k, beta)."""

    def __init__(self, k: int, beta: int):
        from .homology import matrix_of_d, matrix_of_dstar

        self.D = matrix_of_d(k, beta - k + 1)
        self.Dstar = matrix_of_dstar(k, beta)
        self.basis = self.D.codomain
        self.index = self.basis.index()
        self.solver = Solver(self.D.matrix)
        gram = self.basis.gram
        self.kernel = kernel_basis(self.Dstar.matrix)
        # R = K (K^T G K)^-1 K^T G p
        self._gk = [[g * x for g, x in zip(gram, v)] for v in self.kernel]
        if self.kernel:
            KGK = QMatrix.from_rows([
                [sum((a * b for a, b in zip(gu, v) if a and b), Fraction(0)) for v in self.kernel]
                for gu in self._gk
            ])
            self._small = Solver(KGK)
        else:
            self._small = None

    def project(self, p: list) -> list:
        if not self.kernel:
            return [Fraction(0)] * len(p)
        rhs = [sum((a * b for a, b in zip(gu, p) if a and b), Fraction(0)) for gu in self._gk]
        c = self._small.solve(rhs)
        if c is None:
            raise RuntimeError("singular Gram matrix on ker d*")
        out = [Fraction(0)] * len(p)
        for ci, v in zip(c, self.kernel):
            if ci:
                for j, x in enumerate(v):
                    if x:
                        out[j] += ci * x
        return out


@lru_cache(maxsize=None)
def _homological(k: int, beta: int) -> _Homological:
    return _Homological(k, beta)


def homological_solve(k: int, gamma: int, P: VectorField) -> tuple[VectorField, VectorField]:
    """Split ``P = d(U) + R`` with ``R`` in ker d*, exactly.

    ``U`` lives one principal degree lower (``gamma - k + 1``) and has its free
    coordinates set to zero.
    """
    if gamma < k:
        raise ValueError(f"gamma must be >= k = {k}")
    if P.k != k:
        raise ValueError("mixed k")
    w = weights(k)
    if P[w.eps]:
        raise ValueError("P must have zero eps-component")
    if not P.is_quasihomogeneous(gamma):
        raise ValueError(f"P is not quasihomogeneous of degree {gamma}")
    h = _homological(k, gamma)
    p = P.coordinates(h.basis.elements, h.index)
    r = h.project(p)
    u = h.solver.solve([a - b for a, b in zip(p, r)])
    if u is None:
        raise RuntimeError(f"P - R is not in the image of d at degree {gamma}; projection is broken")
    U = VectorField.from_coordinates(k, h.D.domain.elements, u)
    R = VectorField.from_coordinates(k, h.basis.elements, r)
    return U, R


def apply_generator(X: VectorField, U: VectorField, w=None, N: int | None = None) -> VectorField:
    """``X + [U, X] + [U, [U, X]]/2! + ...`` with every degree above ``N`` dropped."""
    if N is None:
        raise ValueError("truncation order N is required")
    w = w or X.weights
    if U[w.eps]:
        raise ValueError("generator must have zero eps-component")
    if U.is_zero():
        return X.truncate(N)
    if quasiorder(U, w) <= 0:
        raise ValueError("generator quasiorder must be >= 1 for the truncated series to terminate")
    out = X.truncate(N)
    term = out
    n = 0
    while term:
        n += 1
        term = lie_bracket(U, term, N).scale(Fraction(1, n))
        out = out + term
    return out


@dataclass
class NormalizationResult:
    k: int
    N: int
    generators: dict = field(default_factory=dict)
    resonant_parts: dict = field(default_factory=dict)
    residual: VectorField | None = None
    normal_form: VectorField | None = None
    goodness_log: dict = field(default_factory=dict)

    @property
    def resonant_zero(self) -> bool:
        return all(R.is_zero() for R in self.resonant_parts.values())

    def nonzero_resonant_degrees(self) -> list[int]:
        return [g for g, R in sorted(self.resonant_parts.items()) if R]


def normalize(sys: AkSystem, N: int) -> NormalizationResult:
    """Run the homological loop for degrees ``k..N`` on ``sys.X``.

    A nonzero resonant part cannot be removed by a generator from the
    eps-free space; it is kept in the running field and recorded.
    """
    k = sys.k
    if N < k:
        raise ValueError(f"N must be >= k = {k}")
    w = weights(k)
    F = sys.F
    X = sys.X.truncate(N)
    low = (X - F).truncate(k - 1)
    if low:
        raise ValueError(f"perturbation has terms of degree <= k-1: {low}")
    result = NormalizationResult(k, N)
    kept = VectorField.zero(k)
    for gamma in range(k, N + 1):
        P = (X - F).homogeneous_part(gamma)
        U, R = homological_solve(k, gamma, P)
        result.generators[gamma] = U
        result.resonant_parts[gamma] = R
        kept = kept + R
        X = apply_generator(X, U, w, N)
        result.goodness_log[gamma] = validate_good_perturbation((X - F).drop_below(gamma + 1), k)
    result.normal_form = F + kept
    result.residual = X - result.normal_form
    if quasiorder(result.residual, w) <= N:
        raise RuntimeError("normalization left a term of degree <= N")
    return result


@dataclass
class ConjugacyCertificate:
    holds: bool
    checked_order: int
    first_failure: tuple | None = None


def coordinate_change(k: int, generators, maxdeg) -> list[Polynomial]:
    """Components of the composite time-1 flow map applied to the coordinates.

    Returns ``Psi_j = E(x_j)`` with ``E = exp(L_{U_m}) ... exp(L_{U_1})``,
    keeping polynomial degrees ``<= maxdeg[j]`` (an int applies to all j).
    """
    if isinstance(maxdeg, int):
        maxdeg = [maxdeg] * (k + 1)
    out = []
    for j in range(k + 1):
        f = Polynomial.variable(k, j)
        for U in generators:
            if U.is_zero():
                continue
            total = f
            term = f
            n = 0
            while term:
                n += 1
                term = U(term, maxdeg[j]).scale(Fraction(1, n))
                total = total + term
            f = total
        out.append(f)
    return out


def verify_conjugacy(sys: AkSystem, result: NormalizationResult, target: VectorField | None = None) -> ConjugacyCertificate:
    """Re-verify the recorded generators by substitution.

    With ``E`` the composite flow operator and ``Psi_j = E(x_j)``, the fields
    are conjugate iff ``Y(Psi_i) = X_i(Psi)`` for every coordinate. This is
    checked for all quasidegrees up to ``result.N`` against ``target``
    (default ``F``), independently of the Lie series used by :func:`normalize`.
    """
    k, N = result.k, result.N
    w = weights(k)
    Y = sys.F if target is None else target
    Y = Y.truncate(N)
    gens = [result.generators[g] for g in sorted(result.generators)]
    # X and Y have quasiorder >= k-1, so Psi_j is only needed up to N-k+1+r_j
    psi = coordinate_change(k, gens, [N - k + 1 + rj for rj in w.r])
    failures = []
    for i in range(k + 1):
        bound = N + w.r[i]
        lhs = Y(psi[i].truncate(bound)).truncate(bound)
        rhs = sys.X[i].truncate(bound).substitute(psi, bound)
        diff = lhs - rhs
        for m, c in diff.terms.items():
            failures.append((w.degree(m) - w.r[i], i, m))
    if failures:
        return ConjugacyCertificate(False, N, min(failures, key=lambda t: (t[0], t[1], tuple(-a for a in t[2]))))
    return ConjugacyCertificate(True, N, None)


def resonant_total(result: NormalizationResult) -> VectorField:
    acc = VectorField.zero(result.k)
    for R in result.resonant_parts.values():
        acc = acc + R
    return acc

