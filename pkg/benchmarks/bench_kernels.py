"""Compare the numba kernels with the numpy/scipy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Both paths are called directly, so the result does not depend on
CCBLOCKADE_NUMBA. Timings are best-of-N wall clock after one warm-up call
(which also triggers numba compilation).
"""

import argparse
import time

import numpy as np

from ccblockade import _kernels
from ccblockade.fock import Truncation
from ccblockade.lindblad import collapse_operators
from ccblockade.model import SystemParams, build_hamiltonian


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_liouvillian(repeat):
    p = SystemParams.symmetric(-64.0388, 25.0, 50.0, 0.1, nbar_b=0.05)
    rows = []
    for n in (3, 5, 8):
        t = Truncation(n, n)
        h = build_hamiltonian(p, t)
        jumps = collapse_operators(p, t)
        ref = _kernels.liouvillian_scipy(h, jumps)
        fast = _kernels.liouvillian_numba(h, jumps)
        diff = abs(ref - fast).max()
        t_np = best_of(lambda: _kernels.liouvillian_scipy(h, jumps), repeat)
        t_nb = best_of(lambda: _kernels.liouvillian_numba(h, jumps), repeat)
        rows.append((f"liouvillian ({n},{n})", t_np, t_nb, diff))
    return rows


def bench_conic(repeat):
    rows = []
    for samples in (20_000, 200_000):
        deltas = np.linspace(-250.0, 250.0, samples)
        _, r_np = _kernels.conic_scan_numpy(50.0, 1.0, deltas, 1)
        _, r_nb = _kernels.conic_scan_numba(50.0, 1.0, deltas, 1)
        diff = np.max(np.abs(r_np - r_nb) / np.maximum(1.0, np.abs(r_np)))
        t_np = best_of(lambda: _kernels.conic_scan_numpy(50.0, 1.0, deltas, 1), repeat)
        t_nb = best_of(lambda: _kernels.conic_scan_numba(50.0, 1.0, deltas, 1), repeat)
        rows.append((f"conic scan {samples}", t_np, t_nb, diff))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")
    print(f"{'kernel':<24}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}{'max diff':>12}")
    for name, t_np, t_nb, diff in bench_liouvillian(args.repeat) + bench_conic(args.repeat):
        print(f"{name:<24}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.1f}{diff:>12.1e}")


if __name__ == "__main__":
    main()
