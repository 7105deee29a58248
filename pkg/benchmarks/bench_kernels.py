"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--n 1000000] [--repeat 5]

Prints best-of-N wall time per kernel and backend, plus the speedup and the
largest absolute difference between backends.
"""

import argparse
import time

import numpy as np

from obmlc import kernels


def cases(n, rng):
    w = rng.standard_normal(n) * np.sqrt(0.5)
    x, y = rng.standard_normal(n) * np.sqrt(0.5), rng.standard_normal(n) * np.sqrt(0.5)
    z = rng.standard_normal(n) * 1.5
    return {
        "ob_integrand": lambda m: m.ob_integrand(w, 2.0),
        "bpsk_integrand": lambda m: m.bpsk_integrand(w, 1.5),
        "lq_integrand": lambda m: m.lq_integrand(x, y, 2.0),
        "llr_ob": lambda m: m.llr_ob(z, np.sqrt(2.0), 0.7),
        "llr_cb": lambda m: m.llr_cb(z, np.sqrt(2.0), 0.7),
    }


def best_time(fn, repeat):
    fn()  # warm-up
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = kernels.backends()
    names = sorted(backends)
    print(f"n = {args.n}, best of {args.repeat}; backends: {', '.join(names)}")
    if "cython" not in backends:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'kernel':<16}" + "".join(f"{n + ' (ms)':>16}" for n in names) + f"{'speedup':>10}{'max |diff|':>14}")
    for label, fn in cases(args.n, np.random.default_rng(0)).items():
        times = {n: best_time(lambda: fn(backends[n]), args.repeat) for n in names}
        row = f"{label:<16}" + "".join(f"{1e3 * times[n]:>16.2f}" for n in names)
        if len(names) == 2:
            diff = np.max(np.abs(fn(backends["cython"]) - fn(backends["python"])))
            row += f"{times['python'] / times['cython']:>9.2f}x{diff:>14.2e}"
        print(row)


if __name__ == "__main__":
    main()
