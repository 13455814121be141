"""Compare the compiled and pure-Python kernels.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5]

Times the two raw kernels on inputs drawn from real workloads, then one
end-to-end normalization, once per backend. Each backend runs in a fresh
subprocess so the import-time selection is honoured.
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, random, sys, timeit
from fractions import Fraction
import aknormal
from aknormal import _backend
from aknormal.homology import matrix_of_d
from aknormal.grading import weights
from aknormal.aksys import AkSystem, random_good_perturbation
from aknormal.normalize import normalize, _homological
from aknormal.polyvf import Polynomial

repeat = int(sys.argv[1])
out = {"backend": aknormal.BACKEND}

# rref: integer-scaled matrix of d at a mid-size degree
M = matrix_of_d(3, 8).matrix
rows0 = [[int(x) for x in M.row(i)] for i in range(M.rows)]
def run_rref():
    _backend.rref_int([list(r) for r in rows0], M.cols)
out["rref_int(d, k=3, gamma=8) [%dx%d]" % (M.rows, M.cols)] = min(timeit.repeat(run_rref, number=20, repeat=repeat)) / 20

# mul_terms: products of dense-ish random polynomials
rng = random.Random(1)
w = weights(3).r
def rand_poly():
    return {tuple(rng.randint(0, 3) for _ in range(4)): Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5)) for _ in range(60)}
pairs = [(rand_poly(), rand_poly()) for _ in range(10)]
def run_mul():
    for a, b in pairs:
        _backend.mul_terms(a, b, w, 18)
out["mul_terms(60x60 terms, truncated)"] = min(timeit.repeat(run_mul, number=5, repeat=repeat)) / 50

sys_ = AkSystem.from_perturbation(3, random_good_perturbation(3, 10, seed=7))
for g in range(3, 11):
    _homological(3, g)  # cache the linear algebra; time only the flow
def run_norm():
    normalize(sys_, 10)
out["normalize(k=3, N=10), matrices cached"] = min(timeit.repeat(run_norm, number=1, repeat=repeat))

def run_cold():
    _homological.cache_clear()
    matrix_of_d.cache_clear()
    normalize(sys_, 10)
out["normalize(k=3, N=10), cold"] = min(timeit.repeat(run_cold, number=1, repeat=repeat))
print(json.dumps(out))
"""


def run(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if pure:
        env["AKNORMAL_PURE_PYTHON"] = "1"
    else:
        env.pop("AKNORMAL_PURE_PYTHON", None)
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    comp = run(False, args.repeat)
    py = run(True, args.repeat)
    if comp["backend"] != "cython":
        print("compiled kernels not available; build with `pip install -e . --no-build-isolation`")
    print(f"{'benchmark':45s} {'python [s]':>12s} {comp['backend'] + ' [s]':>12s} {'speedup':>8s}")
    for key in py:
        if key == "backend":
            continue
        a, b = py[key], comp[key]
        print(f"{key:45s} {a:12.5f} {b:12.5f} {a / b:7.2f}x")


if __name__ == "__main__":
    main()
