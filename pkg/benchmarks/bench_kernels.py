"""Compare the compiled kernels with their pure-Python twins.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 3] [--seed 0]

Times the discrete Frechet table and a full Kantorovich solve (whose inner
loop is the Dijkstra kernel) under both backends and checks that the two
backends return identical results.
"""

from __future__ import annotations

import argparse
import time

import numpy as np
from scipy.spatial.distance import cdist

from polycurrents import AtomicMeasure, EmbeddedSpace, kantorovich, kernels
from polycurrents import _fallback

try:
    from polycurrents import _kernels
except ImportError:  # extension not built
    _kernels = None


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def with_backend(module, fn):
    saved = kernels.frechet, kernels.dijkstra
    kernels.frechet, kernels.dijkstra = module.frechet, module.dijkstra
    try:
        return fn()
    finally:
        kernels.frechet, kernels.dijkstra = saved


def frechet_case(rng, n):
    P = np.cumsum(rng.normal(size=(n, 2)), axis=0)
    Q = np.cumsum(rng.normal(size=(n, 2)), axis=0)
    table = np.ascontiguousarray(cdist(P, Q))
    return f"frechet {n}x{n}", lambda: kernels.frechet(table)


def transport_case(rng, m):
    space = EmbeddedSpace(rng.uniform(0, 10, size=(2 * m, 2)))
    a = rng.uniform(0.5, 2.0, size=m)
    b = rng.uniform(0.5, 2.0, size=m)
    b *= a.sum() / b.sum()
    plus = AtomicMeasure(zip(range(m), a.tolist()))
    minus = AtomicMeasure(zip(range(m, 2 * m), b.tolist()))
    minus = minus + AtomicMeasure.dirac(2 * m - 1, plus.total() - minus.total())
    return f"kantorovich {m}x{m}", lambda: kantorovich(plus, minus, space).w1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if _kernels is None:
        print("compiled extension not available; nothing to compare")
        return 1

    rng = np.random.default_rng(args.seed)
    cases = [frechet_case(rng, n) for n in (100, 400, 1000)]
    cases += [transport_case(rng, m) for m in (20, 50, 100)]
    print(f"{'case':<20}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for name, fn in cases:
        tp, vp = with_backend(_fallback, lambda: best_of(fn, args.repeat))
        tc, vc = with_backend(_kernels, lambda: best_of(fn, args.repeat))
        if vp != vc:
            raise SystemExit(f"{name}: backends disagree ({vp!r} vs {vc!r})")
        print(f"{name:<20}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
