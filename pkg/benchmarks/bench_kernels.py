"""Benchmark the compiled kernel core against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeats 7]

Times the hot per-iteration operations at the two scales the solvers
actually run (sparse: n=200, d=50; low-rank: n=1200, d1*d2=1600) plus
the elementwise loss kernels on a long residual vector.
"""

import argparse
import timeit

import numpy as np

from robustreg._kernels import _fallback

try:
    from robustreg._kernels import _core
except ImportError:
    _core = None


def time_call(fn, repeats):
    timer = timeit.Timer(fn)
    number = max(1, timer.autorange()[0] // 4)
    return min(timer.repeat(repeats, number)) / number


def workloads(rng):
    sparse_design = rng.normal(size=(200, 50))
    sparse_coef = rng.normal(size=50)
    sparse_y = rng.normal(size=200)
    mat_design = rng.normal(size=(1200, 1600))
    mat_coef = rng.normal(size=1600)
    mat_y = rng.normal(size=1200)
    resid = rng.normal(size=1_000_000)
    vec = rng.normal(size=5000)
    return [
        ("subgradient_core sparse (200x50, absolute)",
         lambda impl: impl.subgradient_core(sparse_design, sparse_coef,
                                            sparse_y, 0, 0.0)),
        ("subgradient_core lowrank (1200x1600, absolute)",
         lambda impl: impl.subgradient_core(mat_design, mat_coef,
                                            mat_y, 0, 0.0)),
        ("subgradient_core lowrank (1200x1600, huber)",
         lambda impl: impl.subgradient_core(mat_design, mat_coef,
                                            mat_y, 1, 0.5)),
        ("objective_from_residuals (1e6, huber)",
         lambda impl: impl.objective_from_residuals(resid, 1, 0.5)),
        ("loss_subgrads (1e6, quantile)",
         lambda impl: impl.loss_subgrads(resid, 2, 0.3)),
        ("top_k_abs_indices (5000, k=50)",
         lambda impl: impl.top_k_abs_indices(vec, 50)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    rows = []
    for name, call in workloads(rng):
        t_py = time_call(lambda: call(_fallback), args.repeats)
        if _core is not None:
            t_cy = time_call(lambda: call(_core), args.repeats)
            rows.append((name, t_py, t_cy, t_py / t_cy))
        else:
            rows.append((name, t_py, None, None))

    width = max(len(r[0]) for r in rows)
    header = f"{'workload':<{width}}  {'numpy':>10}  {'cython':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, t_py, t_cy, speedup in rows:
        py = f"{t_py * 1e6:9.1f}u"
        cy = "       n/a" if t_cy is None else f"{t_cy * 1e6:9.1f}u"
        sp = "     n/a" if speedup is None else f"{speedup:7.2f}x"
        print(f"{name:<{width}}  {py}  {cy}  {sp}")
    if _core is None:
        print("\ncompiled core not built; showing fallback only")


if __name__ == "__main__":
    main()
