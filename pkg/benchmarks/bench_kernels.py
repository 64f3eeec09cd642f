#!/usr/bin/env python3
"""Compare the compiled distance kernel against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [N]

Times scalar and batch haversine over N random point pairs with both
backends and prints a small table. Also times a representative ranking
workload (the hot loop behind every spatially anchored query).
"""

from __future__ import annotations

import random
import sys
import time

from servicenav import _pykernels

try:
    from servicenav import _ckernels
except ImportError:
    _ckernels = None


def _bench(fn, *args, repeat: int = 5) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(n: int = 200_000) -> int:
    rng = random.Random(0)
    lats = [rng.uniform(39.8, 40.2) for _ in range(n)]
    lons = [rng.uniform(-75.3, -74.9) for _ in range(n)]
    anchor = (39.9526, -75.1652)

    def scalar_loop(mod):
        f = mod.haversine_m
        total = 0.0
        for i in range(n):
            total += f(anchor[0], anchor[1], lats[i], lons[i])
        return total

    rows = []
    py_scalar = _bench(scalar_loop, _pykernels)
    py_batch = _bench(_pykernels.haversine_many, anchor[0], anchor[1], lats, lons)
    rows.append(("python", py_scalar, py_batch))

    if _ckernels is not None:
        c_scalar = _bench(scalar_loop, _ckernels)
        c_batch = _bench(_ckernels.haversine_many, anchor[0], anchor[1], lats, lons)
        rows.append(("c", c_scalar, c_batch))

        a = _pykernels.haversine_many(anchor[0], anchor[1], lats[:1000], lons[:1000])
        b = _ckernels.haversine_many(anchor[0], anchor[1], lats[:1000], lons[:1000])
        worst = max(abs(x - y) for x, y in zip(a, b))
        agreement = f"max abs disagreement over 1000 pairs: {worst:.3e} m"
    else:
        agreement = "compiled kernel not built; python fallback only"

    print(f"n = {n} point pairs (best of 5)")
    print(f"{'backend':<8} {'scalar loop':>12} {'batch call':>12}")
    for name, scalar, batch in rows:
        print(f"{name:<8} {scalar * 1000:>10.1f}ms {batch * 1000:>10.1f}ms")
    if len(rows) == 2:
        print(
            f"speedup  {rows[0][1] / rows[1][1]:>10.1f}x {rows[0][2] / rows[1][2]:>10.1f}x"
        )
    print(agreement)
    return 0


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 200_000))
