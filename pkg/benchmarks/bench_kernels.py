"""Time the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--sizes 128 512 1024] [--repeat 5]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from scheme_lab import _kernels_py

try:
    from scheme_lab import _kernels as _compiled
except ImportError:
    _compiled = None


def random_scheme_like(n: int, classes: int, rng: np.random.Generator):
    labels = rng.integers(0, classes + 1, size=(n, n))
    labels = np.triu(labels, 1)
    labels = labels + labels.T
    a = (labels == 1).astype(np.int64)
    b = (labels == 2).astype(np.int64)
    return a, b, labels


def bench(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[128, 512, 1024])
    ap.add_argument("--classes", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    backends = {"numpy": _kernels_py}
    if _compiled is not None:
        backends["cython"] = _compiled
    else:
        print("compiled extension not built; timing numpy only")

    print(f"{'kernel':<20}{'n':>6}" + "".join(f"{name:>12}" for name in backends))
    for n in args.sizes:
        a, b, labels = random_scheme_like(n, args.classes, rng)
        counts = _kernels_py.zero_one_product(a, b)
        for name, impl in backends.items():
            assert np.array_equal(impl.zero_one_product(a, b), counts), name
        row = [bench(lambda impl=impl: impl.zero_one_product(a, b), args.repeat) for impl in backends.values()]
        print(f"{'zero_one_product':<20}{n:>6}" + "".join(f"{t * 1e3:>10.2f}ms" for t in row))
        # constant on every relation, so the scan cannot stop early
        constant = labels * 3 + 1
        row = [bench(lambda impl=impl: impl.relation_constants(constant, labels, args.classes + 1), args.repeat)
               for impl in backends.values()]
        print(f"{'relation_constants':<20}{n:>6}" + "".join(f"{t * 1e3:>10.2f}ms" for t in row))


if __name__ == "__main__":
    main()
