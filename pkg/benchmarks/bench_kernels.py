"""Compare the numba and pure-numpy hot-kernel paths.

Usage: python3 benchmarks/bench_kernels.py [--n 512] [--repeat 20]

Prints per-kernel timings for both paths plus the max relative disagreement.
Run with VORTEXLAB_NO_NUMBA=1 to confirm the fallback binding.
"""

import argparse
import time

import numpy as np

from vortexlab import kernels
from vortexlab._accel import NUMBA_ENABLED


def timeit(fn, args, repeat):
    fn(*args)  # warm up (and trigger jit compilation on the numba path)
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def rel_diff(a, b):
    a, b = np.asarray(a), np.asarray(b)
    scale = max(np.max(np.abs(a)), 1e-300)
    return np.max(np.abs(a - b)) / scale


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=512)
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    n = args.n
    a = rng.standard_normal((n, n))
    comps = rng.standard_normal((3, n, n))
    r2 = np.abs(rng.standard_normal((n, n)))
    dx = rng.standard_normal((n, n))
    dy = rng.standard_normal((n, n))

    cases = [
        ("abs_pow_sum(p=1.5)", kernels.abs_pow_sum_numpy,
         kernels.abs_pow_sum_numba, (a, 1.5)),
        ("magnitude", kernels.magnitude_numpy,
         kernels.magnitude_numba, (comps,)),
        ("oseen_vorticity", kernels.oseen_vorticity_numpy,
         kernels.oseen_vorticity_numba, (r2, 0.01, 1.0)),
        ("oseen_velocity", kernels.oseen_velocity_numpy,
         kernels.oseen_velocity_numba, (dx, dy, 0.01, 1.0)),
    ]

    print(f"grid {n}x{n}, best of {args.repeat}; numba enabled: {NUMBA_ENABLED}")
    print(f"{'kernel':<22} {'numpy':>10} {'numba':>10} {'speedup':>8} {'rel diff':>10}")
    for name, f_np, f_nb, call_args in cases:
        t_np = timeit(f_np, call_args, args.repeat)
        t_nb = timeit(f_nb, call_args, args.repeat)
        d = rel_diff(f_np(*call_args), f_nb(*call_args))
        print(f"{name:<22} {t_np * 1e3:>8.3f}ms {t_nb * 1e3:>8.3f}ms "
              f"{t_np / t_nb:>7.2f}x {d:>10.2e}")


if __name__ == "__main__":
    main()
