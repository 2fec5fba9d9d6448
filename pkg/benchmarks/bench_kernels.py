"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--points 2000] [--repeat 3]
"""

import argparse
import random
import time

from bcshubbard import _backend, critical_temperature, free_energy


def _points(n, seed=1):
    rng = random.Random(seed)
    return [(rng.uniform(0.5, 50), rng.uniform(-2, 2), rng.uniform(-2, 2),
             rng.uniform(0.5, 6), rng.uniform(-1, 1)) for _ in range(n)]


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    pts = _points(args.points)
    lams = (0.0, 0.45, 0.575)
    saved = free_energy._k
    timings = {}
    try:
        for name, k in _backend.KERNELS.items():
            free_energy._k = k

            def solve():
                for b, mu, lam, gam, h in pts:
                    k.solve_core(b, mu, lam, gam, h, 1e-12, free_energy.MERGE_TOL)

            def theta():
                for lam in lams:
                    critical_temperature(1.0, lam, 2.6, 0.0)

            timings[name] = (_best(solve, args.repeat), _best(theta, args.repeat))
    finally:
        free_energy._k = saved
    print(f"{'backend':<8} {'solve_core':>12} {'per point':>12} {'theta_c x3':>12}")
    for name, (ts, tc) in timings.items():
        print(f"{name:<8} {ts:>11.3f}s {1e6 * ts / len(pts):>10.1f}us {tc:>11.3f}s")
    if "cython" in timings:
        py, cy = timings["python"], timings["cython"]
        print(f"speedup  {py[0] / cy[0]:>11.1f}x {'':>12} {py[1] / cy[1]:>11.1f}x")
    else:
        print("compiled kernels unavailable; only the fallback was timed")


if __name__ == "__main__":
    main()
