"""Kernelization timings for the linear-scaling check, printed as JSON.

Run as a separate process so the measurement does not inherit the heap
left behind by other tests.
"""

from __future__ import annotations

import gc
import json
import sys
import time

from bisplit.generate import random_bipartite
from bisplit.kernel import kernelize


def measure(sizes: list[int]) -> dict[str, float]:
    kernelize(random_bipartite(1000, 1000, 0), 3)  # warm up imports and caches
    out = {}
    for m in sizes:
        g = random_bipartite(m, m, seed=1)
        for k in (3, m):
            best = float("inf")
            for _ in range(7 if m < 10**6 else 5):  # minimum over runs filters scheduler noise
                gc.collect()
                t0 = time.perf_counter()
                kernelize(g, k)
                best = min(best, time.perf_counter() - t0)
            out[f"{m} {'3' if k == 3 else 'm'}"] = best
        del g
    return out


if __name__ == "__main__":
    json.dump(measure([int(a) for a in sys.argv[1:]]), sys.stdout)
