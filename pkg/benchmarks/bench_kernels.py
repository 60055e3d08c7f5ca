"""Benchmark the numba kernels against their pure-numpy twins.

Runs each kernel on a few workload sizes, reports per-call time for both
backends plus the speedup, and checks that the two paths agree to
floating-point noise. The numba path is warmed once per shape before
timing so JIT compilation does not count against it.

Usage:
    python benchmarks/bench_kernels.py [--repeats N] [--seed S]
"""

import argparse
import statistics
import time

import numpy as np

from chartsearch import kernels

# (rows, label) pairs roughly spanning a chart's palette, a store's worth
# of colors, and a dense scatter field.
SIZES = (64, 4096, 262144)


def timed(fn, args, repeats: int) -> float:
    """Median seconds per call."""
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def workloads(rng: np.random.Generator, n: int) -> dict:
    rgb = rng.integers(0, 256, size=(n, 3)).astype(np.float64)
    lab_a = kernels.srgb_to_lab(rgb)
    lab_b = lab_a[::-1].copy()
    x = rng.normal(size=n)
    y = 0.7 * x + rng.normal(scale=0.5, size=n)
    matrix = rng.normal(size=(n, 16))
    matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
    vec = matrix[0].copy()
    return {
        "srgb_to_lab": (rgb,),
        "delta_e": (lab_a, lab_b),
        "pearson": (x, y),
        "cosine_to": (matrix, vec),
    }


def max_abs_diff(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=25, help="timing samples per cell")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if "numba" not in kernels._BACKENDS:
        print("numba is not installed; nothing to compare")
        return 1

    rng = np.random.default_rng(args.seed)
    original = kernels.backend()
    header = f"{'kernel':<14}{'rows':>9}{'numpy':>12}{'numba':>12}{'speedup':>9}{'max |diff|':>12}"
    print(header)
    print("-" * len(header))
    try:
        for n in SIZES:
            loads = workloads(rng, n)
            for name, call_args in loads.items():
                fn = getattr(kernels, name)
                kernels.configure("numpy")
                np_result = fn(*call_args)
                np_time = timed(fn, call_args, args.repeats)
                kernels.configure("numba")
                fn(*call_args)  # warm the JIT for this shape
                nb_result = fn(*call_args)
                nb_time = timed(fn, call_args, args.repeats)
                diff = max_abs_diff(np_result, nb_result)
                speed = np_time / nb_time if nb_time > 0 else float("inf")
                print(
                    f"{name:<14}{n:>9}{np_time * 1e6:>10.1f}us{nb_time * 1e6:>10.1f}us"
                    f"{speed:>8.2f}x{diff:>12.2e}"
                )
                if diff > 1e-9:
                    print(f"  WARNING: backends disagree on {name} at n={n}")
                    return 1
    finally:
        kernels.configure(original)
    print(f"\nbackend restored to {kernels.backend()!r}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
