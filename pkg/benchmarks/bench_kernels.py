"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Micro benchmarks call both kernel modules directly on the same inputs; the
end-to-end rows run a real workload in a subprocess per backend.
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from gmpy2 import mpq

from gmcd import _pykernels

try:
    from gmcd import _ckernels
except ImportError:
    _ckernels = None


def random_terms(rng, n_terms, n_vars, max_exp):
    out = {}
    while len(out) < n_terms:
        e = tuple(rng.randint(0, max_exp) for _ in range(n_vars))
        out[e] = mpq(rng.randint(-999, 999), rng.randint(1, 99))
    return out


def micro(repeat):
    rng = random.Random(7)
    a = random_terms(rng, 120, 8, 4)
    b = random_terms(rng, 120, 8, 4)
    vals = [mpq(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(8)]
    shift = (1, 0, 2, 0, 0, 1, 0, 0)
    cases = {
        "mul_terms 120x120": lambda k: k.mul_terms(a, b),
        "add_terms 120+120": lambda k: k.add_terms(a, b, mpq(3, 2)),
        "addmul_inplace": lambda k: k.addmul_inplace(dict(a), b, mpq(-1, 3), shift),
        "eval_terms": lambda k: k.eval_terms(a, vals),
    }
    rows = []
    for name, fn in cases.items():
        tp = min(timeit.repeat(lambda: fn(_pykernels), number=20, repeat=repeat)) / 20
        tc = min(timeit.repeat(lambda: fn(_ckernels), number=20, repeat=repeat)) / 20 if _ckernels else None
        rows.append((name, tp, tc))
    return rows


WORKLOAD = """
import time
from gmcd.moduli import elliptic_chart, elliptic_solve, ELLIPTIC_ELEMENTS
from gmcd.tame import clingher_doran, discriminant_symbolic, elliptic
from gmcd import BACKEND
t0 = time.perf_counter()
for g in ELLIPTIC_ELEMENTS.values():
    elliptic_solve(g, elliptic_chart())
t1 = time.perf_counter()
discriminant_symbolic(clingher_doran(), term_budget=None)
t2 = time.perf_counter()
print(BACKEND, t1 - t0, t2 - t1)
"""


def end_to_end():
    rows = {}
    for pure in ("1", "0"):
        env = dict(os.environ, GMCD_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True,
                             text=True, check=True).stdout.split()
        rows[out[0]] = (float(out[1]), float(out[2]))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args()
    print(f"{'kernel':24s} {'python (ms)':>12s} {'cython (ms)':>12s} {'speedup':>8s}")
    for name, tp, tc in micro(args.repeat):
        if tc is None:
            print(f"{name:24s} {tp * 1e3:12.3f} {'n/a':>12s}")
        else:
            print(f"{name:24s} {tp * 1e3:12.3f} {tc * 1e3:12.3f} {tp / tc:7.2f}x")
    if not args.skip_e2e:
        rows = end_to_end()
        for i, label in enumerate(("elliptic vf solve", "symbolic det(T_f)")):
            vals = {k: v[i] for k, v in rows.items()}
            line = "  ".join(f"{k}: {v:.3f}s" for k, v in vals.items())
            print(f"{label:24s} {line}")


if __name__ == "__main__":
    main()
