"""Seeded batch run of the algebraic property checks.

Used by ``aknormal selftest``. The report is a plain dict with deterministic
content, so that two runs with the same arguments serialize identically.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .aksys import AkSystem, explicit_dstar_good, random_good_perturbation, verify_kernel_trivial
from .grading import enumerate_good_basis, enumerate_vf_basis, format_element
from .homology import verify_adjointness, verify_decomposition, verify_lemma_kernel
from .normalize import homological_solve, normalize, verify_conjugacy
from .polyvf import VectorField, lie_bracket
from .serialize import vectorfield_to_json


def random_field(k: int, gamma: int, rng: random.Random, density: float = 0.6) -> VectorField:
    """Random rational element of the degree-``gamma`` piece (may be zero if empty)."""
    basis = enumerate_vf_basis(k, gamma)
    coords = [
        Fraction(rng.randint(-6, 6), rng.randint(1, 4)) if rng.random() < density else 0
        for _ in basis.elements
    ]
    return VectorField.from_coordinates(k, basis.elements, coords)


def normalization_order(k: int, max_degree: int) -> int:
    return max(k, max_degree - 2 * (k - 2))


class _Tally:
    def __init__(self, name: str, k: int):
        self.name = name
        self.k = k
        self.passed = 0
        self.failed = 0
        self.first_failure = None

    def record(self, ok: bool, detail=None) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.first_failure is None:
                self.first_failure = detail

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "k": self.k,
            "passed": self.passed,
            "failed": self.failed,
            "first_failure": self.first_failure,
        }


def minimal_resonant_witness(max_k: int, max_degree: int):
    """Smallest single good basis element whose resonant part is nonzero."""
    for k in range(2, max_k + 1):
        for beta in range(k, max_degree + 1):
            basis = enumerate_good_basis(k, beta)
            for e in basis.elements:
                P = VectorField.basis_element(k, *e)
                _, R = homological_solve(k, beta, P)
                if R:
                    return {
                        "k": k,
                        "degree": beta,
                        "perturbation": format_element(e, k),
                        "resonant_part": vectorfield_to_json(R),
                        "resonant_part_text": str(R),
                    }
    return None


def run_selftest(max_k: int = 4, max_degree: int = 10, seed: int = 0, pairs: int = 8, runs: int = 3) -> dict:
    if max_k < 2:
        raise ValueError("max_k must be >= 2")
    rng = random.Random(seed)
    tallies: list[_Tally] = []
    for k in range(2, max_k + 1):
        bracket = _Tally("bracket_identities", k)
        adj = _Tally("adjoint_identity", k)
        lemma = _Tally("kernel_box_equals_kernel_dstar", k)
        dec = _Tally("image_kernel_decomposition", k)
        blocks = _Tally("block_dstar_cross_check", k)
        kern = _Tally("good_kernel_trivial", k)
        for gamma in range(1, max_degree - k + 2):
            X = random_field(k, gamma, rng)
            Y = random_field(k, 1, rng)
            Z = random_field(k, 2, rng)
            jac = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y))
            ok = (lie_bracket(X, Y) + lie_bracket(Y, X)).is_zero() and jac.is_zero()
            bracket.record(ok, {"gamma": gamma})
        for beta in range(k, max_degree + 1):
            gamma = beta - k + 1
            prs = [(random_field(k, gamma, rng), random_field(k, beta, rng)) for _ in range(pairs)]
            bad = verify_adjointness(k, beta, prs)
            adj.record(not bad, {"beta": beta, "count": len(bad)})
            rep = verify_lemma_kernel(k, beta)
            lemma.record(rep.ok, {"beta": beta, "dim_ker_box": rep.dim_ker_box, "dim_ker_dstar": rep.dim_ker_dstar})
            try:
                explicit_dstar_good(k, beta)
                explicit_dstar_good(k, beta, with_eps=True)
                blocks.record(True)
            except RuntimeError as exc:
                blocks.record(False, {"beta": beta, "error": str(exc)})
        for gamma in range(1, max_degree - k + 2):
            d = verify_decomposition(k, gamma)
            dec.record(d.ok, {"gamma": gamma, "dim": d.dim_space, "image": d.dim_image_dstar, "kernel": d.dim_kernel_d})
        for rep in verify_kernel_trivial(k, k, max_degree):
            kern.record(rep.ok, {"beta": rep.beta, "dim_good_kernel": rep.dim_good_kernel, "witnesses": rep.witnesses})
        tallies += [bracket, adj, lemma, dec, blocks, kern]

        N = normalization_order(k, max_degree)
        conj_nf = _Tally("conjugacy_to_normal_form", k)
        resonant = _Tally("resonant_parts_zero", k)
        conj_F = _Tally("conjugacy_to_principal_part", k)
        for _ in range(runs):
            s = rng.randrange(2**31)
            sys = AkSystem.from_perturbation(k, random_good_perturbation(k, N, s))
            res = normalize(sys, N)
            c_nf = verify_conjugacy(sys, res, res.normal_form)
            conj_nf.record(c_nf.holds, {"seed": s, "N": N, "first_failure": _failure_json(c_nf.first_failure)})
            degs = res.nonzero_resonant_degrees()
            resonant.record(not degs, {"seed": s, "N": N, "nonzero_degrees": degs})
            c_F = verify_conjugacy(sys, res)
            conj_F.record(c_F.holds, {"seed": s, "N": N, "first_failure": _failure_json(c_F.first_failure)})
        tallies += [conj_nf, resonant, conj_F]

    props = [t.as_dict() for t in tallies]
    ok = all(t.failed == 0 for t in tallies)
    report = {
        "parameters": {"max_k": max_k, "max_degree": max_degree, "seed": seed, "pairs": pairs, "runs": runs},
        "properties": props,
        "ok": ok,
        "first_violation": next((p for p in props if p["failed"]), None),
    }
    if any(t.name == "resonant_parts_zero" and t.failed for t in tallies):
        report["reproduction"] = minimal_resonant_witness(max_k, max_degree)
    return report


def _failure_json(f):
    if f is None:
        return None
    degree, component, m = f
    return {"degree": degree, "component": component, "exponents": list(m)}


__all__ = ["run_selftest", "random_field", "minimal_resonant_witness", "normalization_order"]
