"""Time the compiled and the pure Python integration kernels on one run.

Both backends advance the same combined profile and frame state with the
same fixed-step rule, so their outputs must agree bit for bit; this script
checks that agreement and reports the speed ratio.  Usage:

    python benchmarks/bench_backends.py [--steps N] [--repeat R]
"""

from __future__ import annotations

import argparse
import importlib
import time

import numpy as np

from cmcforms import _kernels_py


def load_compiled():
    try:
        return importlib.import_module("cmcforms._kernels")
    except ImportError:
        return None


def run_once(kernel, steps: int):
    # A periodic hyperbolic-case well with the frame coefficients riding along.
    nexp, ad, bd, H = 4.0, -1.0, 1.0, -0.9
    g0, p0 = 1.2, 0.5877717842137243
    c0 = np.array([1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0])
    return kernel.run_combined(nexp, ad, bd, H, g0, p0, c0, 1.0e-3, steps, 1.0e6)


def best_time(kernel, steps: int, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        run_once(kernel, steps)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=200000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    compiled = load_compiled()
    t_py = best_time(_kernels_py, args.steps, args.repeat)
    print(f"python  backend: {t_py * 1e3:9.2f} ms for {args.steps} steps")
    if compiled is None:
        print("compiled backend not available; skipping comparison")
        return 0
    t_cy = best_time(compiled, args.steps, args.repeat)
    print(f"cython  backend: {t_cy * 1e3:9.2f} ms for {args.steps} steps")
    print(f"speedup: {t_py / t_cy:.1f}x")

    g_a, p_a, c_a, code_a = run_once(_kernels_py, args.steps)
    g_b, p_b, c_b, code_b = run_once(compiled, args.steps)
    same = (
        code_a == code_b
        and np.array_equal(g_a, g_b)
        and np.array_equal(p_a, p_b)
        and np.array_equal(c_a, c_b)
    )
    print("outputs bitwise identical:", same)
    return 0 if same else 1


if __name__ == "__main__":
    raise SystemExit(main())
