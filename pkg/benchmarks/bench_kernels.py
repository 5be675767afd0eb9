"""Time the compiled and numpy kernel backends on identical inputs.

    python benchmarks/bench_kernels.py [--size N] [--repeat R] [--csv PATH]

Prints one row per (kernel, backend) with the best-of-R wall time and the
speedup of the compiled core over the numpy fallback.
"""
import argparse
import csv
import sys
import timeit

import numpy as np

from gidlab import kernels, rng as rngmod


def cases(size):
    rng = np.random.default_rng(0)
    x = rng.exponential(size=size)
    grid = np.geomspace(0.1, 10.0, 16)
    a = np.sort(rng.exponential(size=size))
    b = np.sort(rng.exponential(size=size) * 1.01)
    counts = rng.geometric(0.2, size=size // 5).astype(np.int64)
    values = rng.random(int(counts.sum()))
    m = max(size // 100, 1)
    return {
        "empirical_lt": lambda k: k.empirical_lt(x, grid),
        "ks_statistic": lambda k: k.ks_statistic(a, b),
        "segment_sums": lambda k: k.segment_sums(values, counts),
        "geometric_stable_sums": lambda k: k.geometric_stable_sums(rngmod.substream(1, 0), m, 0.01, 0.6, 0.01 ** (1 / 0.6)),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--size", type=int, default=1_000_000, help="input length (default 1e6)")
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions; best is reported")
    ap.add_argument("--csv", default=None, help="also write results to this CSV file")
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled core not built; timing the numpy fallback only", file=sys.stderr)
    rows = []
    for name, fn in cases(args.size).items():
        best = {}
        for backend, impl in backends.items():
            fn(impl)  # warm-up
            best[backend] = min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat))
        for backend, t in best.items():
            speedup = best["numpy"] / t if backend != "numpy" else 1.0
            rows.append((name, backend, t, speedup))
            print(f"{name:<24}{backend:<8}{t * 1e3:>10.2f} ms{speedup:>8.1f}x")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["kernel", "backend", "seconds", "speedup_vs_numpy"])
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
