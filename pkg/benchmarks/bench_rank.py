"""Compare the numba and numpy kernels on banded rank and Walsh-Hadamard work.

    python benchmarks/bench_rank.py [--level 10] [--repeat 3]

Both backends are called directly, so LAMPLIGHTER_BACKEND does not matter here.
The first numba call per signature includes JIT compilation and is excluded.
"""

import argparse
import random
import time

import numpy as np

from lamplighter import kernels, linalg
from lamplighter.periodic import PeriodicOperator, identity, prufer_E, truncate
from lamplighter.sampling import random_cyclo


def banded_operator(seed: int, bandwidth: int = 4, level: int = 4) -> PeriodicOperator:
    rng = random.Random(seed)
    entries = {(r, d): random_cyclo(rng, level) for r in range(4) for d in range(-bandwidth, bandwidth + 1)}
    return PeriodicOperator(2, entries)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return result, min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--level", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    full = banded_operator(0)
    cases = {
        "full rank": full,
        "rank 1/2": (identity() + prufer_E(1, 1)) / 2 * full,
    }
    print(f"{'case':<12} {'backend':<7} {'rank':>6} {'primes':>7} {'seconds':>9}")
    for name, A in cases.items():
        X = truncate(A, args.level)
        entries = X.nonzero()
        for backend in ("numba", "numpy"):
            linalg.modular_rank(entries[:64], 64, 64, backend=backend)  # warm up
            cert, secs = best_of(
                lambda: linalg.modular_rank(entries, X.size, X.size, backend=backend), args.repeat
            )
            print(f"{name:<12} {backend:<7} {cert.rank:>6} {cert.primes_used:>7} {secs:>9.3f}")

    rng = np.random.default_rng(0)
    a = rng.integers(-1000, 1000, size=(1 << 16, 8))
    for backend in ("numba", "numpy"):
        kernels.fwht(a[:4], backend)
        _, secs = best_of(lambda: kernels.fwht(a, backend), args.repeat)
        print(f"{'fwht 2^16x8':<12} {backend:<7} {'':>6} {'':>7} {secs:>9.3f}")


if __name__ == "__main__":
    main()
