"""Timing harness for the two kernel hot spots: cyclic Jacobi
diagonalization and the modified Bessel table. Compares the numba fast path
against the pure-numpy fallback and reports the speedup.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --dims 40,120,400 --repeats 7
"""

import argparse
import time

import numpy as np

from steklab._kernels import (
    HAS_NUMBA,
    bessel_table_numba,
    bessel_table_numpy,
    jacobi_eigh_numba,
    jacobi_eigh_numpy,
)


def _best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_jacobi(dims, repeats, rng):
    rows = []
    for d in dims:
        m = rng.standard_normal((d, d))
        a = 0.5 * (m + m.T)
        w_np, _, _ = jacobi_eigh_numpy(a)
        w_nb, _, _ = jacobi_eigh_numba(a)
        drift = float(np.max(np.abs(w_np - w_nb)))
        t_np = _best_of(lambda: jacobi_eigh_numpy(a), repeats)
        t_nb = _best_of(lambda: jacobi_eigh_numba(a), repeats)
        rows.append((f"jacobi d={d}", t_np, t_nb, drift))
    return rows


def bench_bessel(sizes, kmax, repeats, rng):
    rows = []
    for n in sizes:
        xs = 30.0 * rng.random(n)
        t_np = _best_of(lambda: bessel_table_numpy(xs, kmax), repeats)
        t_nb = _best_of(lambda: bessel_table_numba(xs, kmax), repeats)
        drift = float(
            np.max(np.abs(bessel_table_numpy(xs, kmax) - bessel_table_numba(xs, kmax)))
        )
        rows.append((f"bessel n={n} k<={kmax}", t_np, t_nb, drift))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", default="40,120,200,400")
    ap.add_argument("--sizes", default="512,4096,16384")
    ap.add_argument("--kmax", type=int, default=40)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    dims = [int(s) for s in args.dims.split(",")]
    sizes = [int(s) for s in args.sizes.split(",")]

    if not HAS_NUMBA:
        print("numba not installed; the numba columns fall back to numpy")
    # trigger JIT compilation outside the timed region
    jacobi_eigh_numba(np.eye(3))
    bessel_table_numba(np.array([1.0]), 4)

    rows = bench_jacobi(dims, args.repeats, rng)
    rows += bench_bessel(sizes, args.kmax, args.repeats, rng)

    print(f"{'case':24s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s} {'max diff':>10s}")
    for name, t_np, t_nb, drift in rows:
        speed = t_np / t_nb if t_nb > 0 else float("inf")
        print(f"{name:24s} {1e3 * t_np:10.2f} {1e3 * t_nb:10.2f} {speed:8.1f} {drift:10.1e}")


if __name__ == "__main__":
    main()
