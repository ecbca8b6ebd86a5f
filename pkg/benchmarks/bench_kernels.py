"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from gafcells import _kernels_py

try:
    from gafcells import _kernels
except ImportError:
    _kernels = None


def _cases(rng):
    xs, ys = rng.uniform(0, 5, 200_000), rng.uniform(0, 2, 200_000)
    cx, cy = np.arange(5.0), np.zeros(5)
    p = np.ascontiguousarray(rng.uniform(0, 1, (2000, 2)))
    q = np.ascontiguousarray(rng.uniform(1, 2, (2000, 2)))
    n, n_cells = 50_000, 100
    cell = rng.integers(0, n_cells, n).astype(np.int64)
    energy = rng.uniform(0.5, 2.0, n)
    watched = np.ones(n_cells, dtype=np.uint8)

    def rounds(k):
        ac = np.zeros(200, dtype=np.int64)
        co = np.zeros(200)
        k.run_rounds(cell, energy.copy(), n_cells, watched, 0.01, 0.0, 200, ac, co)

    return {
        "disc_coverage 2e5 pts x 5 discs": lambda k: k.disc_coverage(xs, ys, cx, cy, 1.0),
        "max_cross_distance 2000 x 2000": lambda k: k.max_cross_distance(p, q),
        "run_rounds 5e4 nodes x 200 rounds": rounds,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    cases = _cases(np.random.default_rng(0))
    if _kernels is None:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':40s} {'cython s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for name, fn in cases.items():
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:40s} {'-':>10s} {t_py:10.4f} {'-':>8s}")
            continue
        t_c = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        print(f"{name:40s} {t_c:10.4f} {t_py:10.4f} {t_py / t_c:8.1f}")


if __name__ == "__main__":
    main()
