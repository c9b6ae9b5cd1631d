"""Compiled versus pure-numpy kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--samples 40]

Times the simplex on random problems of several sizes and the facet
enumeration of the ZZ sign polytopes, once per available backend.
"""
import argparse
import math
import time

import numpy as np

from daqc import kernels
from daqc.experiments import Distribution, instance_rng, sample
from daqc.polytope import facet_enumeration
from daqc.lp import solve_min_time
from daqc.signs import build_sign_matrix

LP_CASES = [("zz", 6), ("zz", 8), ("zz", 10), ("general", 3), ("general", 4), ("general", 5)]
DD_CASES = [4, 5, 6]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def lp_workload(model, n, samples):
    M = build_sign_matrix(n, model, cap=None)
    problems = [
        sample(Distribution(kind, math.sqrt(M.d)), M.d, instance_rng(0, model, n, kind, s))
        for kind in ("uniform_sphere", "sparse_axes") for s in range(samples // 2)
    ]
    return lambda: [solve_min_time(M, b) for b in problems]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--samples", type=int, default=40)
    args = parser.parse_args(argv)

    backends = kernels.available()
    print(f"backends: {', '.join(backends)}")
    header = f"{'workload':<26}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)

    rows = [(f"simplex {m} n={n} x{args.samples}", lp_workload(m, n, args.samples)) for m, n in LP_CASES]
    rows += [(f"facets zz n={n}", lambda n=n: facet_enumeration(build_sign_matrix(n, "zz"))) for n in DD_CASES]
    for label, fn in rows:
        timings = []
        for name in backends:
            previous = kernels.use_backend(name)
            try:
                fn()  # warm caches
                timings.append(best_of(fn, args.repeat))
            finally:
                kernels.use_backend(previous)
        line = f"{label:<26}" + "".join(f"{t * 1e3:>10.1f}ms" for t in timings)
        if len(timings) > 1:
            line += f"{timings[1] / timings[0]:>9.1f}x"
        print(line, flush=True)


if __name__ == "__main__":
    main()
