"""Compare the compiled and pure-Python elimination kernels.

Workloads are the matrices the package eliminates: the reduced-coproduct
matrices whose kernels are the primitives of the one-generator algebra, and
the b' boundary matrices of the homology module. Dense random matrices are
left out on purpose: their fraction-free entries outgrow 128 bits, so the
compiled kernel hands them back to Python and both columns time the same code.

    python benchmarks/bench_elim.py [--degree 6] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

from cofree2as import linalg
from cofree2as.bialgebra import DELTA, _reduced_basis
from cofree2as.free2as import degree_basis
from cofree2as.homology import build_bprime


def primitive_matrix(n: int):
    basis = degree_basis(n)
    rows, _ = linalg.sparse_to_dense([_reduced_basis(DELTA, b) for b in basis])
    return rows, len(basis)


def boundary_matrix(product: str, d: int, n: int):
    m = build_bprime(product, d).boundaries[n]
    return m, len(m[0])


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--degree", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    workloads = [(f"primitives degree {d}", primitive_matrix(d)) for d in range(4, args.degree + 1)]
    workloads += [(f"b' {p} d=5 n=2", boundary_matrix(p, 5, 2)) for p in ("star", "dot")]
    backends = ["python"] + (["cython"] if linalg.BACKEND == "cython" else [])
    if len(backends) == 1:
        print("compiled kernel not built; timing the pure-Python kernel only")
    print(f"{'workload':<24}{'rows':>6}{'cols':>6}{'rank':>6}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, (rows, ncols) in workloads:
        results = {b: linalg.rref_int(rows, ncols, backend=b) for b in backends}
        if len({repr(r) for r in results.values()}) != 1:
            raise SystemExit(f"{name}: kernels disagree")
        times = {b: best_time(lambda b=b: linalg.rref_int(rows, ncols, backend=b), args.repeat) for b in backends}
        rank = len(results["python"][1])
        speed = f"{times['python'] / times['cython']:>9.1f}x" if "cython" in times else f"{'-':>10}"
        print(f"{name:<24}{len(rows):>6}{ncols:>6}{rank:>6}" + "".join(f"{times[b]:>11.3f}s" for b in backends) + speed)


if __name__ == "__main__":
    main()
