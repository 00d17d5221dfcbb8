#!/usr/bin/env python3
"""Benchmark the compiled series core against the pure-Python fallback.

Times the four hot loops (Gauss series, the two Appell shells, the
four-variable shells) plus one end-to-end kernel grid on both backends.

    python benchmarks/bench_series.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from mharmonic import get_backend


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


CASES = [
    (
        "f21_series a=2.2 b=1.7 c=3.1 z=0.95 (x200)",
        lambda be: [be.f21_series(2.2, 1.7, 3.1, 0.95, 1e-13, 100000) for _ in range(200)],
    ),
    (
        "f21_pos_grid a=24 b=20 c=46, 1024 nodes",
        lambda be: be.f21_pos_grid(
            24.0, 20.0, 46.0, np.linspace(0.0, 0.9999, 1024), 0.01, 0.0, 0.0, 0.0, 1e-14, 100000
        ),
    ),
    (
        "f1_shells |x|,|y|=0.8",
        lambda be: be.f1_shells(1.3, 0.8, 1.1, 2.0, 0.8, -0.78 + 0.1j, 1e-11, 400),
    ),
    (
        "f3_shells |x|,|y|=0.8",
        lambda be: be.f3_shells(2.0, 2.0, 2.0, 2.0, 2.0, 0.64, 0.6, 1e-11, 400),
    ),
    (
        "fd1_shells szego args at radius 0.8",
        lambda be: be.fd1_shells(
            2.0, 2.0, 2.0, 2.0, 2.0, 0.64, 0.6 + 0.2j, 0.6 - 0.2j, 0.64, 1e-10, 400
        ),
    ),
    (
        "fd1_shells general complex args 0.45",
        lambda be: be.fd1_shells(
            1.5, 0.8, 1.2, 0.9, 2.0, 0.45, 0.3 + 0.3j, 0.3 - 0.3j, 0.41, 1e-11, 400
        ),
    ),
]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = {}
    backends["python"] = get_backend("python")
    try:
        backends["cython"] = get_backend("cython")
    except ImportError:
        print("compiled backend not available; timing the fallback only")

    print(f"{'case':52s}" + "".join(f"{name:>12s}" for name in backends) + f"{'speedup':>10s}")
    for label, runner in CASES:
        times = {}
        for name, be in backends.items():
            times[name] = timeit(lambda: runner(be), args.repeat)
        row = f"{label:52s}" + "".join(f"{times[n]*1e3:10.2f}ms" for n in backends)
        if len(times) == 2:
            row += f"{times['python'] / times['cython']:9.1f}x"
        print(row)

        values = [runner(be) for be in backends.values()]
        if len(values) == 2:
            def scalarize(v):
                if isinstance(v, list):
                    v = v[0]
                return v[0] if isinstance(v, tuple) else v

            va, vb = scalarize(values[0]), scalarize(values[1])
            if isinstance(va, np.ndarray):
                agree = np.allclose(va, vb, rtol=1e-10)
            else:
                agree = abs(va - vb) <= 1e-10 * max(1.0, abs(va))
            if not agree:
                raise SystemExit(f"backend disagreement in case {label!r}")


if __name__ == "__main__":
    main()
