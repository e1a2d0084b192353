"""Head-to-head benchmark of the two weighted-selection backends.

Runs the compiled median-of-medians kernel against the numpy
argsort+cumsum path on identical inputs, checks they agree exactly, and
prints a timing table.  Usage:

    python3 benchmarks/kernel_bench.py --sizes 1e4,1e5,1e6 --repeats 5
"""

import argparse
import time

import numpy as np

from onecenter.selection import _select_sorted

try:
    from onecenter._kernels import weighted_select as kernel_select
except ImportError:
    kernel_select = None


def time_one(fn, values, weights, target, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(values, weights, target)
        best = min(best, time.perf_counter() - t0)
    return result, best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="1e4,1e5,1e6,4e6")
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    sizes = [int(float(t)) for t in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)

    if kernel_select is None:
        print("compiled kernel not available; showing numpy path only")

    print(f"{'n':>10}  {'numpy (ms)':>12}  {'cython (ms)':>12}  {'speedup':>8}")
    for n in sizes:
        values = rng.standard_normal(n)
        weights = rng.integers(1, 1024, size=n).astype(np.float64) / 1024.0
        target = 0.5 * float(np.sum(weights))
        ref, t_numpy = time_one(_select_sorted, values, weights, target, args.repeats)
        if kernel_select is None:
            print(f"{n:>10}  {t_numpy * 1e3:>12.3f}  {'-':>12}  {'-':>8}")
            continue
        got, t_kernel = time_one(kernel_select, values, weights, target, args.repeats)
        if got != ref:
            raise SystemExit(f"backend mismatch at n={n}: kernel {got!r} vs numpy {ref!r}")
        print(f"{n:>10}  {t_numpy * 1e3:>12.3f}  {t_kernel * 1e3:>12.3f}  {t_numpy / t_kernel:>8.2f}")


if __name__ == "__main__":
    main()
