"""Time the compiled distance kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--n 200000] [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from fraczeta import kernels


def _cases(n: int, rng: np.random.Generator):
    x = rng.uniform(-0.25, 1.25, n)
    px, py = rng.uniform(-0.3, 1.3, n), rng.uniform(-0.3, 0.3, n)
    hx, hy, ht = rng.uniform(-0.25, 0.25, n), rng.uniform(-0.25, 0.25, n), rng.uniform(-0.1, 1.1, n)
    bits = rng.integers(0, 1 << 16, n, dtype=np.uint64)
    h = rng.uniform(0, 1, n)
    small = max(n // 20, 1)
    return {
        "cantor_distance": lambda k: k.cantor_distance(x, 26),
        "segment2_distance": lambda k: k.segment2_distance(px, py, 0.0, 0.0, 1.0, 0.0),
        "heisenberg_axis_distance": lambda k: k.heisenberg_axis_distance(hx, hy, ht, 0.0, 1.0),
        "laakso_distance": lambda k: k.laakso_distance(bits, h, 0, 0.25, 16),
        "laakso_fiber_distance": lambda k: k.laakso_fiber_distance(bits[:small], h[:small], 16, 24),
    }


def bench(n: int, repeat: int) -> list[tuple[str, float, float]]:
    if kernels.compiled is None:
        raise SystemExit("compiled kernels are not built; reinstall without FRACZETA_NO_EXT")
    rng = np.random.default_rng(0)
    rows = []
    for name, call in _cases(n, rng).items():
        times = {}
        for label, mod in (("compiled", kernels.compiled), ("pure", kernels.pure)):
            best = float("inf")
            out = None
            for _ in range(repeat):
                t0 = time.perf_counter()
                out = call(mod)
                best = min(best, time.perf_counter() - t0)
            times[label] = (best, out)
        a, b = times["compiled"][1], times["pure"][1]
        # the two backends must agree before their timings mean anything
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)
        rows.append((name, times["compiled"][0], times["pure"][0]))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'kernel':28s} {'compiled [ms]':>14s} {'numpy [ms]':>12s} {'speedup':>8s}")
    for name, tc, tp in bench(args.n, args.repeat):
        print(f"{name:28s} {tc * 1e3:14.2f} {tp * 1e3:12.2f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
