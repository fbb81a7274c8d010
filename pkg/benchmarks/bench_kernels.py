"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from diffam import kernels
from diffam.junta import build_a_p, full_star
from diffam.search import intersection_graph


def _best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    star = full_star(16, 5)
    wide = full_star(30, 3)
    ak = build_a_p(13, 5, 5)
    rng = np.random.default_rng(0)
    hs = rng.integers(0, 1 << 30, 20_000).astype(np.uint64)
    graph = intersection_graph(7, 3)
    return [
        ("diff_size  star(16,5)", lambda m: m.diff_size(star.masks, 16)),
        ("diff_size  star(30,3)", lambda m: m.diff_size(wide.masks, 30)),
        ("symdiff    A_5(13,5)", lambda m: m.symdiff_masks(ak.masks, 13)),
        ("all_inter  star(16,5)", lambda m: m.all_intersect(star.masks)),
        ("disjoint   star(30,3) x 20k", lambda m: m.count_disjoint(wide.masks, hs)),
        ("cliques    graph C([7],3)", lambda m: m.maximal_cliques(graph.adjacency, 10**6)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.backends()
    names = sorted(backends)
    print(f"{'kernel':32s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in cases():
        times = {n: _best_of(lambda: fn(backends[n]), args.repeat) for n in names}
        row = f"{label:32s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in names)
        if "cython" in times:
            row += f"{times['python'] / times['cython']:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
