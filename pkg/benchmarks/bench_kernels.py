"""Benchmark the sublevel-oracle kernels: numba vs pure numpy.

Runs the same enumeration + merge-forest workload through both backends
(results are asserted identical) and prints wall-clock timings.  A numba
warm-up call is excluded from the timing.

    python benchmarks/bench_kernels.py [--repeats 3]
"""

import argparse
import statistics
import time

from gradedroots import _kernels, oracle, spinc
from gradedroots.plumbing import build_graph, canonical_class


def workloads():
    e8 = build_graph([(i, -2) for i in range(8)],
                     [(i, i + 1) for i in range(6)] + [(2, 7)])
    yield "E8 canonical, level 2", e8, canonical_class(e8), 2
    star = build_graph([(0, -2), (1, -2), (2, -3), (3, -3), (4, -5), (5, -5)],
                       [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5)])
    orb = spinc.enumerate_spinc(star)[1]
    yield "6-vertex star, orbit 1, level 5", star, orb.k_r, 5
    chain = build_graph([(i, -2 - (i % 3)) for i in range(6)],
                        [(i, i + 1) for i in range(5)])
    yield "6-chain canonical, level 4", chain, canonical_class(chain), 4


def run(backend, graph, k, level):
    t0 = time.perf_counter()
    root = oracle.root_oracle(graph, k, level, backend=backend)
    lev = oracle.enumerate_sublevel(graph, k, level, backend=backend)
    return time.perf_counter() - t0, (root.canonical_key(), lev.n_points,
                                      lev.labels.tolist())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    backends = ["numpy"]
    if _kernels.HAVE_NUMBA:
        backends.insert(0, "numba")
        # warm-up to exclude JIT compilation from the numbers
        g = build_graph([(0, -2)], [])
        oracle.root_oracle(g, canonical_class(g), 1, backend="numba")
    else:
        print("numba unavailable; timing the numpy path only")

    print(f"{'workload':40s} " + " ".join(f"{b:>12s}" for b in backends))
    for name, graph, k, level in workloads():
        times = {}
        results = {}
        for b in backends:
            samples = []
            for _ in range(args.repeats):
                dt, res = run(b, graph, k, level)
                samples.append(dt)
                results[b] = res
            times[b] = statistics.median(samples)
        assert len({str(r) for r in results.values()}) == 1, \
            f"backend results differ on {name}"
        row = " ".join(f"{times[b] * 1e3:10.2f}ms" for b in backends)
        extra = ""
        if len(backends) == 2:
            extra = f"   speedup x{times['numpy'] / times['numba']:.1f}"
        print(f"{name:40s} {row}{extra}")


if __name__ == "__main__":
    main()
