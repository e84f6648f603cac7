"""Compare the compiled kernel extension against the pure-numpy fallback.

Run:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from curvedist import _fastkernels, _purekernels
from curvedist.polycore import BiPoly


def _time(fn, *args, repeat=5, inner=1):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / inner)
    return best


def bench_aberth(rng):
    print("aberth (simultaneous root iteration)")
    for deg in (8, 16, 32, 64):
        c = (rng.standard_normal(deg + 1)
             + 1j * rng.standard_normal(deg + 1)).astype(np.complex128)
        tf = _time(_fastkernels.aberth, c)
        tp = _time(_purekernels.aberth, c)
        print(f"  deg {deg:3d}: compiled {tf*1e6:9.1f} us   "
              f"pure {tp*1e6:9.1f} us   speedup {tp/tf:5.1f}x")


def bench_line_coeffs(rng):
    print("line_coeffs (restriction of f to a moving line)")
    for deg in (4, 8, 12):
        grid = rng.standard_normal((deg + 1, deg + 1))
        for i in range(deg + 1):
            for j in range(deg + 1):
                if i + j > deg:
                    grid[i, j] = 0.0
        f = BiPoly(grid.astype(np.complex128), trim=False)
        stack = f._partial_stack()
        args = (stack, f.c.shape[0], f.c.shape[1],
                0.3 + 0j, -0.7 + 0j, 0.6 + 0j, 0.8 + 0j, f.total_degree)
        tf = _time(_fastkernels.line_coeffs, *args, inner=20)
        tp = _time(_purekernels.line_coeffs, *args, inner=20)
        print(f"  deg {deg:3d}: compiled {tf*1e6:9.1f} us   "
              f"pure {tp*1e6:9.1f} us   speedup {tp/tf:5.1f}x")


def bench_polyval(rng):
    print("polyval (Horner evaluation)")
    for deg in (16, 64, 256):
        c = (rng.standard_normal(deg + 1)
             + 1j * rng.standard_normal(deg + 1)).astype(np.complex128)
        z = 0.8 - 0.4j
        tf = _time(_fastkernels.polyval, c, z, inner=100)
        tp = _time(_purekernels.polyval, c, z, inner=100)
        print(f"  deg {deg:3d}: compiled {tf*1e6:9.1f} us   "
              f"pure {tp*1e6:9.1f} us   speedup {tp/tf:5.1f}x")


if __name__ == "__main__":
    rng = np.random.default_rng(0)
    bench_aberth(rng)
    bench_line_coeffs(rng)
    bench_polyval(rng)
