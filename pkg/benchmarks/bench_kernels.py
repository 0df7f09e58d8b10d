"""Compiled vs numpy kernels, and where one solver iteration actually spends its time.

    python benchmarks/bench_kernels.py               # kernels + per-step profile at n=500
    python benchmarks/bench_kernels.py --n 2000      # uci_digit-sized step profile
"""
import argparse
import time

import numpy as np

from umccev import kernels, solver
from umccev.datasets import MultiViewDataset


def best_of(fn, repeat=5):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kernels(sizes, rng):
    names = kernels.available_backends()
    print(f"backends: {names} (active: {kernels.BACKEND})")
    print(f"{'kernel':<28}{'n':>6}" + "".join(f"{b:>12}" for b in names))
    for n in sizes:
        V = np.ascontiguousarray(rng.normal(size=(n, n)))
        x = rng.normal(size=n * n)
        P = np.ascontiguousarray(rng.normal(size=(n, 64)))
        cases = {
            "project_rows_capped_simplex": lambda m: m.project_rows_capped_simplex(V),
            "firm_threshold_array": lambda m: m.firm_threshold_array(x, 0.5, 1.0),
            "pairwise_sq_dists": lambda m: m.pairwise_sq_dists(P),
        }
        for label, call in cases.items():
            cells = [best_of(lambda: call(kernels.get_backend(b))) for b in names]
            print(f"{label:<28}{n:>6}" + "".join(f"{t * 1e3:>10.2f}ms" for t in cells))


def profile_iteration(n, dims, rng):
    views = [rng.normal(size=(m, n)) for m in dims]
    data = MultiViewDataset(views, 10)
    cfg = solver.SolverConfig()
    t0 = time.perf_counter()
    prob = solver.Problem(data)
    state = solver.initialize(prob, cfg)
    setup = time.perf_counter() - t0

    spent = {}
    last = [time.perf_counter()]

    def tick(state, step, v):
        now = time.perf_counter()
        spent[step] = spent.get(step, 0.0) + now - last[0]
        last[0] = now

    last[0] = time.perf_counter()
    solver.iterate(prob, state, cfg, callback=tick)
    total = sum(spent.values())
    print(f"\none iteration at n={n}, view dims {dims}: {total:.2f}s (setup {setup:.2f}s)")
    for step, t in sorted(spent.items(), key=lambda kv: -kv[1]):
        print(f"  {step:<12}{t:8.3f}s  {100 * t / total:5.1f}%")
    print(f"  extrapolated 100 iterations: {100 * total / 60:.1f} min")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", default="100,400,1000")
    ap.add_argument("--n", type=int, default=500, help="sample count for the iteration profile")
    ap.add_argument("--dims", default="76,216,64", help="per-view feature dims for the profile")
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    bench_kernels([int(s) for s in args.sizes.split(",")], rng)
    profile_iteration(args.n, tuple(int(d) for d in args.dims.split(",")), rng)


if __name__ == "__main__":
    main()
