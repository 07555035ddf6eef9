"""Timing comparison of the compiled and pure-python kernel backends.

Runs each kernel on identical inputs through both backends, checks the
outputs agree bit for bit, and prints a wall-clock table.  Usage:

    python3 benchmarks/compare_backends.py [--limit 10000000] [--repeat 3]

The compiled backend is required here (the point is the comparison); an
environment without it should run the test suite instead.
"""

import argparse
import time

import numpy as np

from tauchar._kernels import load_backend


def best_of(repeat, fn, *args, **kw):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args, **kw)
        best = min(best, time.perf_counter() - t0)
    return best, out


def check_equal(name, a, b):
    if isinstance(a, dict):
        for key in a:
            if not np.array_equal(a[key], b[key]):
                raise SystemExit(f"backend mismatch in {name}[{key}]")
    elif isinstance(a, np.ndarray):
        if not np.array_equal(a, b):
            raise SystemExit(f"backend mismatch in {name}")
    elif a != b:
        raise SystemExit(f"backend mismatch in {name}: {a} != {b}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--limit", type=int, default=10**7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cback = load_backend("c")
    pyback = load_backend("python")
    limit = args.limit

    rng = np.random.default_rng(1)
    char_table = rng.integers(-1, 2, size=limit + 1).astype(np.int8)
    char_table[0] = 0
    block_primes = cback.primes_up_to(int((2 * limit) ** 0.5) + 1)

    jobs = [
        ("primes_up_to", (limit,), {}, "primes_up_to"),
        (
            "full_tables(tau,mu,liou)",
            (limit,),
            dict(want_tau=True, want_mu=True, want_liou=True),
            "full_tables",
        ),
        (
            "factor_block [x, x+10^6)",
            (limit, limit + 10**6, block_primes),
            dict(want_tau=True, want_mu=True, want_liou=True),
            "factor_block",
        ),
        ("weighted_floor_sum", (char_table, limit), {}, "weighted_floor_sum"),
    ]

    print(f"limit = {limit:.2e}, best of {args.repeat}")
    print(f"{'kernel':<28} {'compiled':>10} {'python':>10} {'speedup':>8}")
    for label, a, kw, attr in jobs:
        tc, out_c = best_of(args.repeat, getattr(cback, attr), *a, **kw)
        tp, out_p = best_of(args.repeat, getattr(pyback, attr), *a, **kw)
        check_equal(label, out_c, out_p)
        print(f"{label:<28} {tc:>9.3f}s {tp:>9.3f}s {tp / tc:>7.1f}x")
    print("outputs agree across backends")


if __name__ == "__main__":
    main()
