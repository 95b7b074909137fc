"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--n 3200] [--repeat 3]
"""
import argparse
import timeit

import numpy as np

from npcfactors import _fallback

try:
    from npcfactors import _kernels as compiled
except ImportError:
    compiled = None


def cases(n):
    z = np.random.default_rng(0).standard_normal((n, n))
    v = np.random.default_rng(1).standard_normal((n, 2))
    ctr = np.zeros((n * n // 4, 4), dtype=np.uint64)
    ctr[:, 0] = np.arange(ctr.shape[0], dtype=np.uint64)
    key = np.array([2, 7], dtype=np.uint64)
    return {
        f"philox4x64 ({ctr.shape[0]} blocks)": lambda m: m.philox4x64(ctr, key),
        f"gaussian_grid {n}x{n}": lambda m: m.gaussian_grid(2, 7, 0, n, n),
        f"uniform_grid {n}x2": lambda m: m.uniform_grid(2, 7, n, 2),
        f"ar1_filter {n}x{n}": lambda m: m.ar1_filter(z, 0.5, 1.0),
        f"kms_matvec n={n}, 2 columns": lambda m: m.kms_matvec(v, 0.5, 1.0),
    }


def best_time(func, module, repeat):
    return min(timeit.repeat(lambda: func(module), number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=3200)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if compiled is None:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':36s} {'python [s]':>11s} {'compiled [s]':>13s} {'speedup':>8s}")
    for name, func in cases(args.n).items():
        t_py = best_time(func, _fallback, args.repeat)
        if compiled is None:
            print(f"{name:36s} {t_py:11.4f}")
            continue
        t_c = best_time(func, compiled, args.repeat)
        print(f"{name:36s} {t_py:11.4f} {t_c:13.4f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
