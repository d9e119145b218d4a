"""Benchmark the compiled longest-path kernels against the pure-Python fallback.

Usage:
    python3 benchmarks/bench_kernels.py [--sizes 6,8,10] [--trials 10] [--seed 0]

Both backends must return identical results; the table reports per-instance
means for the subset DP and the exhaustive enumeration.  The fallback is
usable but slow on enumeration-heavy instances, so sizes above 10 take a
while without the extension.
"""

from __future__ import annotations

import argparse
import random
import time

from arcgallai import _core_py
from arcgallai.family import build_graph, generate

try:
    from arcgallai import _core
except ImportError:
    _core = None


def bench(kernel, graphs, cap):
    t0 = time.perf_counter()
    dp = [kernel.longest_path_length(list(g.adj), g.n) for g in graphs]
    t_dp = time.perf_counter() - t0
    t0 = time.perf_counter()
    enum = [kernel.enumerate_longest(list(g.adj), g.n, cap) for g in graphs]
    t_enum = time.perf_counter() - t0
    return dp, enum, t_dp, t_enum


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="6,8,10")
    parser.add_argument("--trials", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--cap", type=int, default=10_000)
    args = parser.parse_args()

    if _core is None:
        print("compiled kernel not built; benchmarking the fallback only")
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = random.Random(args.seed)
    header = f"{'m':>3} {'instances':>9} {'dp pure':>10} {'enum pure':>10}"
    if _core is not None:
        header += f" {'dp cython':>10} {'enum cython':>11} {'speedup':>8}"
    print(header)
    for m in sizes:
        graphs = [
            build_graph(generate(m, 4 * m, seed=rng.getrandbits(40)))
            for _ in range(args.trials)
        ]
        dp_p, enum_p, t_dp_p, t_en_p = bench(_core_py, graphs, args.cap)
        row = (
            f"{m:>3} {len(graphs):>9} {t_dp_p / len(graphs) * 1e3:>9.2f}ms"
            f" {t_en_p / len(graphs) * 1e3:>9.2f}ms"
        )
        if _core is not None:
            dp_c, enum_c, t_dp_c, t_en_c = bench(_core, graphs, args.cap)
            assert dp_c == dp_p
            for a, b in zip(enum_c, enum_p):
                assert a[:5] == b[:5], "kernel outputs diverge"
            speedup = (t_dp_p + t_en_p) / max(t_dp_c + t_en_c, 1e-9)
            row += (
                f" {t_dp_c / len(graphs) * 1e3:>9.2f}ms"
                f" {t_en_c / len(graphs) * 1e3:>10.2f}ms {speedup:>7.1f}x"
            )
        print(row)


if __name__ == "__main__":
    main()
