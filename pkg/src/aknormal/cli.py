"""Command-line interface.

Exit codes: 0 success, 1 mathematical or certificate failure, 2 usage or
parse failure.
"""
from __future__ import annotations

import argparse
import random
import sys

from . import __version__
from .aksys import (
    AkSystem,
    ValidationError,
    dstar_blocks,
    explicit_dstar_good,
    validate_ak_sfs,
    verify_kernel_trivial,
)
from .exactalg import QMatrix
from .grading import (
    enumerate_good_basis,
    enumerate_poly_basis,
    enumerate_vf_basis,
    format_element,
    format_monomial,
    weights,
)
from .homology import matrix_of_box, matrix_of_d, matrix_of_dstar, verify_adjointness
from .normalize import normalize, verify_conjugacy
from .selftest import random_field, run_selftest
from .serialize import (
    SCHEMA_VERSION,
    ParseError,
    dumps,
    format_rational,
    load_system_file,
    vectorfield_to_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _degree_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B or A, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _check_k(k: int) -> None:
    if k < 2:
        raise UsageError(f"k must be >= 2 (got {k})")


def _report(command: str, inputs: dict, results: dict, seed) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "aknormal",
        "version": __version__,
        "command": command,
        "inputs": inputs,
        "seed": seed,
        "results": results,
    }


def _matrix_json(M: QMatrix) -> list:
    return [[format_rational(x) for x in M.row(i)] for i in range(M.rows)]


def _matrix_text(M: QMatrix, row_labels, col_labels) -> str:
    cells = [[str(x) for x in M.row(i)] for i in range(M.rows)]
    width = max([len(s) for r in cells for s in r] + [1])
    lines = ["columns:"]
    lines += [f"  [{j}] {c}" for j, c in enumerate(col_labels)]
    lines.append("rows:")
    for i, lab in enumerate(row_labels):
        lines.append("  " + " ".join(s.rjust(width) for s in cells[i]) + f"   | {lab}")
    return "\n".join(lines)


# --- subcommands --------------------------------------------------------------

def cmd_basis(args) -> tuple[int, dict, str]:
    k = args.k
    _check_k(k)
    w = weights(k)
    if args.space == "poly":
        if args.degree < 0:
            raise UsageError("polynomial degree must be >= 0")
        b = enumerate_poly_basis(k, args.degree)
        items = [{"exponents": list(m), "gram": format_rational(g)} for m, g in zip(b.monomials, b.gram)]
        text = [f"{format_monomial(m)}    gram {g}" for m, g in zip(b.monomials, b.gram)]
    else:
        if args.space == "good":
            if args.degree <= k - 1:
                raise UsageError(f"good degrees start at k = {k}")
            b = enumerate_good_basis(k, args.degree)
        else:
            b = enumerate_vf_basis(k, args.degree)
        items = [
            {"component": i, "exponents": list(m), "gram": format_rational(g)}
            for (i, m), g in zip(b.elements, b.gram)
        ]
        text = [f"{format_element(e, k)}    gram {g}" for e, g in zip(b.elements, b.gram)]
    results = {"weights": list(w.r), "dimension": len(items), "basis": items}
    header = f"k={k} degree={args.degree} space={args.space} weights={list(w.r)} dim={len(items)}"
    return EXIT_OK, results, "\n".join([header] + text)


def cmd_operator(args) -> tuple[int, dict, str]:
    k = args.k
    _check_k(k)
    if args.op == "d":
        if args.gamma is None or args.beta is not None:
            raise UsageError("--op d takes --gamma (domain degree)")
        op = matrix_of_d(k, args.gamma)
        beta = args.gamma + k - 1
    else:
        if args.beta is None or args.gamma is not None:
            raise UsageError(f"--op {args.op} takes --beta (domain degree)")
        if args.beta < k:
            raise UsageError(f"--op {args.op} needs beta >= k = {k}")
        beta = args.beta
        op = matrix_of_dstar(k, beta) if args.op == "dstar" else matrix_of_box(k, beta)
    rows = [format_element(e, k) for e in op.codomain.elements]
    cols = [format_element(e, k) for e in op.domain.elements]
    results = {
        "op": args.op,
        "shape": list(op.matrix.shape),
        "rows": [[i, list(m)] for i, m in op.codomain.elements],
        "columns": [[i, list(m)] for i, m in op.domain.elements],
        "matrix": _matrix_json(op.matrix),
    }
    text = [f"k={k} op={args.op} shape={op.matrix.shape[0]}x{op.matrix.shape[1]}"]
    if args.op == "box":
        G = QMatrix.diagonal(op.domain.gram)
        GB = G @ op.matrix
        results["self_adjoint"] = GB.transpose() == GB
        text.append(f"self-adjoint w.r.t. Gram form: {results['self_adjoint']}")
    text.append(_matrix_text(op.matrix, rows, cols))
    code = EXIT_OK
    if args.check:
        check = {"beta": beta}
        if beta >= k:
            try:
                explicit_dstar_good(k, beta)
                explicit_dstar_good(k, beta, with_eps=True)
                check["block_dstar_matches"] = True
            except RuntimeError as exc:
                check["block_dstar_matches"] = False
                check["error"] = str(exc)
            check["blocks"] = {f"{i},{j}": lab for (i, j), (lab, _) in sorted(dstar_blocks(k, beta, True).items())}
            rng = random.Random(args.seed)
            pairs = [(random_field(k, beta - k + 1, rng), random_field(k, beta, rng)) for _ in range(20)]
            check["adjoint_identity"] = not verify_adjointness(k, beta, pairs)
        else:
            check["block_dstar_matches"] = True
            check["adjoint_identity"] = True
            check["note"] = "codomain degree below k; no d* cross-check applies"
        results["check"] = check
        passed = check["block_dstar_matches"] and check["adjoint_identity"]
        text.append(f"check: block d* {'matches' if check['block_dstar_matches'] else 'MISMATCH'}, "
                    f"adjoint identity {'holds' if check['adjoint_identity'] else 'FAILS'}")
        if not passed:
            code = EXIT_FAIL
    return code, results, "\n".join(text)


def cmd_verify(args) -> tuple[int, dict, str]:
    k = args.k
    _check_k(k)
    lo, hi = args.beta
    if lo < k:
        raise UsageError(f"beta range must start at >= k = {k}")
    reports = verify_kernel_trivial(k, lo, hi)
    rows = []
    text = [f"k={k}  beta  dim H  dim good  dim ker d*  dim good ker  P1=0  Pk=0  eps-slices"]
    for r in reports:
        rows.append({
            "beta": r.beta,
            "dim_space": r.dim_space,
            "dim_good": r.dim_good,
            "dim_kernel_dstar": r.dim_full_kernel,
            "dim_good_kernel": r.dim_good_kernel,
            "p1_forced_zero": r.p1_forced_zero,
            "pk_forced_zero": r.pk_forced_zero,
            "eps_slices_injective": r.slices_ok,
            "witnesses": r.witnesses,
        })
        text.append(
            f"      {r.beta:4d}  {r.dim_space:5d}  {r.dim_good:8d}  {r.dim_full_kernel:10d}  "
            f"{r.dim_good_kernel:12d}  {str(r.p1_forced_zero):5s} {str(r.pk_forced_zero):5s} {r.slices_ok}"
        )
        for wv in r.witnesses:
            text.append(f"        witness: {wv}")
    ok = all(r.ok for r in reports)
    text.append("all good kernels trivial" if ok else "NONTRIVIAL good kernel found")
    return (EXIT_OK if ok else EXIT_FAIL), {"table": rows, "all_trivial": ok}, "\n".join(text)


def cmd_normalize(args) -> tuple[int, dict, str]:
    if args.order is None:
        raise UsageError("--order N is required")
    try:
        X = load_system_file(args.input)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    try:
        sys_ = validate_ak_sfs(X, X.k)
    except ValidationError as exc:
        raise UsageError("input is not an A_k slow-fast system: " + "; ".join(exc.violations)) from None
    N = args.order
    if N < X.k:
        raise UsageError(f"--order must be >= k = {X.k}")
    res = normalize(sys_, N)
    cert = verify_conjugacy(sys_, res)
    cert_nf = verify_conjugacy(sys_, res, res.normal_form)

    def cert_json(c):
        f = c.first_failure
        return {
            "holds": c.holds,
            "checked_order": c.checked_order,
            "first_failure": None if f is None else {"degree": f[0], "component": f[1], "exponents": list(f[2])},
        }

    results = {
        "k": X.k,
        "order": N,
        "generators": {str(g): vectorfield_to_json(U) for g, U in sorted(res.generators.items())},
        "resonant_parts": {str(g): vectorfield_to_json(R) for g, R in sorted(res.resonant_parts.items())},
        "nonzero_resonant_degrees": res.nonzero_resonant_degrees(),
        "goodness_log": {str(g): v for g, v in sorted(res.goodness_log.items())},
        "normal_form": vectorfield_to_json(res.normal_form),
        "certificate": cert_json(cert),
        "normal_form_certificate": cert_json(cert_nf),
    }
    text = [f"k={X.k} N={N}"]
    for g in sorted(res.generators):
        U, R = res.generators[g], res.resonant_parts[g]
        text.append(f"degree {g}: generator {U}")
        if R:
            text.append(f"           RESONANT {R}")
        if res.goodness_log[g]:
            text.append(f"           goodness: {'; '.join(res.goodness_log[g])}")
    text.append(f"conjugate to F through degree {N}: {cert.holds}"
                + ("" if cert.holds else f" (first failure {cert.first_failure})"))
    text.append(f"conjugate to F + resonant parts through degree {N}: {cert_nf.holds}")
    ok = cert.holds and res.resonant_zero
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(_report("normalize", {"input": str(args.input), "order": N}, results, args.seed)))
    return (EXIT_OK if ok else EXIT_FAIL), results, "\n".join(text)


def cmd_selftest(args) -> tuple[int, dict, str]:
    if args.max_k < 2:
        raise UsageError("--max-k must be >= 2")
    seed = 0 if args.seed is None else args.seed
    rep = run_selftest(args.max_k, args.max_degree, seed, runs=args.runs)
    text = []
    for p in rep["properties"]:
        status = "ok  " if not p["failed"] else "FAIL"
        text.append(f"{status} k={p['k']} {p['name']}: {p['passed']} passed, {p['failed']} failed")
    if rep.get("reproduction"):
        r = rep["reproduction"]
        text.append(f"minimal reproduction: k={r['k']} degree={r['degree']} P={r['perturbation']} "
                    f"-> resonant part {r['resonant_part_text']}")
    return (EXIT_OK if rep["ok"] else EXIT_FAIL), rep, "\n".join(text)


# --- parser -------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit the JSON report")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="print nothing; exit code only")

    parser = _Parser(prog="aknormal", description="Formal normal forms of A_k slow-fast systems, in exact arithmetic.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--json", action="store_true")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("basis", parents=[common], help="graded monomial bases and Gram weights")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--space", choices=["poly", "vf", "good"], default="poly")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("operator", parents=[common], help="matrices of d, d* and box")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--op", choices=["d", "dstar", "box"], required=True)
    p.add_argument("--gamma", type=int, help="domain degree of d")
    p.add_argument("--beta", type=int, help="domain degree of d* / box")
    p.add_argument("--check", action="store_true", help="cross-check d* against its block form")
    p.set_defaults(func=cmd_operator)

    p = sub.add_parser("verify", parents=[common], help="kernel of d* on good perturbations, per degree")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--beta", type=_degree_range, required=True, metavar="A..B")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("normalize", parents=[common], help="normalize a system file up to order N")
    p.add_argument("input")
    p.add_argument("--order", type=int, required=True, metavar="N")
    p.add_argument("--output", metavar="PATH")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("selftest", parents=[common], help="seeded run of all property checks")
    p.add_argument("--max-k", type=int, default=4)
    p.add_argument("--max-degree", type=int, default=10)
    p.add_argument("--runs", type=int, default=3, help="random normalizations per k")
    p.set_defaults(func=cmd_selftest)
    return parser


def _inputs(args) -> dict:
    skip = {"func", "json", "quiet", "seed", "command"}
    out = {}
    for key, val in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = list(val) if isinstance(val, tuple) else val
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, results, text = args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"aknormal {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not args.quiet:
        if args.json:
            sys.stdout.write(dumps(_report(args.command, _inputs(args), results, args.seed)))
        else:
            print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
