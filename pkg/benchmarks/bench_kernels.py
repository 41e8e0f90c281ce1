"""Compare the compiled and numpy batch-rank kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--seed 0]

Workloads mirror what the code analysis sends through batch_rank: stacks
of codeword matrices of a few fixed shapes over small primes.
"""
import argparse
import timeit

import numpy as np

from scatterlab import _kernels_py

try:
    from scatterlab import _kernels as compiled
except ImportError:
    compiled = None

WORKLOADS = [
    # (p, batch, rows, cols)
    (2, 4096, 4, 4),
    (3, 6561, 4, 2),
    (2, 32768, 6, 6),
    (3, 20000, 8, 8),
    (7, 10000, 6, 6),
    (3, 2000, 16, 16),
]


def bench(fn, mats, p, repeat):
    return min(timeit.repeat(lambda: fn(mats, p), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    gen = np.random.default_rng(args.seed)

    print(f"{'p':>3} {'shape':>16} {'numpy ms':>10} {'cython ms':>10} {'speedup':>8}")
    for p, b, r, c in WORKLOADS:
        mats = gen.integers(0, p, size=(b, r, c), dtype=np.int64)
        mats[::3, -1] = mats[::3, 0]  # a share of rank-deficient inputs
        ref = _kernels_py.batch_rank(mats, p)
        t_py = bench(_kernels_py.batch_rank, mats, p, args.repeat)
        if compiled is None:
            print(f"{p:>3} {str((b, r, c)):>16} {1e3 * t_py:>10.1f} {'n/a':>10} {'':>8}")
            continue
        if not (compiled.batch_rank(mats, p) == ref).all():
            raise SystemExit(f"backends disagree for p={p}, shape={(b, r, c)}")
        t_cy = bench(compiled.batch_rank, mats, p, args.repeat)
        print(f"{p:>3} {str((b, r, c)):>16} {1e3 * t_py:>10.1f} {1e3 * t_cy:>10.1f} {t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
