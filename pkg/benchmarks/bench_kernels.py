"""Timing comparison of the compiled and pure kernel backends.

Runs the three primitives on representative inputs and prints the
median per-call time for each backend plus the speedup.  Usage:

    python benchmarks/bench_kernels.py [--repeats 7] [--number 200]
"""

import argparse
import statistics
import timeit

import numpy as np

from periodlab import kernels
from periodlab.special_functions import bernoulli_float, gamma


def build_cases():
    bern = bernoulli_float(8)
    nodes, wts = np.polynomial.legendre.leggauss(24)
    edges = np.linspace(0.0, 12.0, 25)
    nu = 9.5337j
    g0p = 1.0 / gamma(1.0 + nu)
    g0m = 1.0 / gamma(1.0 - nu)
    return [
        ("hurwitz_em", lambda: kernels.hurwitz_em(2.5 + 0.3j, 0.8, 14, bern)),
        ("bessel_series", lambda: kernels.bessel_series(nu, 0.9, g0p, g0m,
                                                        400)),
        ("bessel_cosh_quad", lambda: kernels.bessel_cosh_quad(nu, 1.5, edges,
                                                              nodes, wts)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--number", type=int, default=200)
    args = parser.parse_args()

    cases = build_cases()
    print(f"{'kernel':<18} {'pure (us)':>12} {'compiled (us)':>14} "
          f"{'speedup':>8}")
    for name, fn in cases:
        per_call = {}
        for backend in kernels.available_backends():
            kernels.use_backend(backend)
            times = timeit.repeat(fn, number=args.number,
                                  repeat=args.repeats)
            per_call[backend] = 1e6 * statistics.median(times) / args.number
        pure = per_call["pure"]
        compiled = per_call.get("compiled")
        if compiled is None:
            print(f"{name:<18} {pure:>12.2f} {'n/a':>14} {'n/a':>8}")
        else:
            print(f"{name:<18} {pure:>12.2f} {compiled:>14.2f} "
                  f"{pure / compiled:>8.2f}")


if __name__ == "__main__":
    main()
