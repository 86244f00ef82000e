"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--size 16384]

Each kernel runs on identical inputs under both backends; the table shows
the best-of-``repeat`` wall time and the speedup. Backends must agree to
1e-12 or the script exits non-zero.
"""
import argparse
import sys
import timeit

import numpy as np

from interp_qsp import kernels


def workloads(size, rng):
    theta = 2 * np.pi * np.arange(size) / size
    z = np.exp(1j * theta)
    x = np.cos(theta)
    cheb = rng.standard_normal(96) + 1j * rng.standard_normal(96)
    laurent = rng.standard_normal(191) + 1j * rng.standard_normal(191)
    samples = np.abs(np.cos(np.arange(0, 2 * np.pi + 0.1, 1e-4))) ** 0.5 + 0j
    return {
        "clenshaw (deg 95)": ("clenshaw", (cheb, x)),
        "laurent_horner (deg 95)": ("laurent_horner", (laurent, z)),
        "max_lagged_difference (lag 64)": ("max_lagged_difference", (samples, 64)),
        "max_lagged_difference (lag 1000)": ("max_lagged_difference", (samples, 1000)),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--size", type=int, default=2**14)
    args = parser.parse_args(argv)

    if "compiled" not in kernels.BACKENDS:
        print("compiled extension not built; only the numpy backend is available")
        return 1
    py, cy = kernels.BACKENDS["python"], kernels.BACKENDS["compiled"]
    rng = np.random.default_rng(0)

    print(f"{'kernel':<34}{'numpy [ms]':>12}{'compiled [ms]':>15}{'speedup':>10}")
    for label, (name, call_args) in workloads(args.size, rng).items():
        a = np.asarray(getattr(py, name)(*call_args))
        b = np.asarray(getattr(cy, name)(*call_args))
        if np.max(np.abs(a - b)) > 1e-12 * max(1.0, float(np.max(np.abs(a)))):
            print(f"backends disagree on {label}")
            return 2
        times = []
        for mod in (py, cy):
            fn = getattr(mod, name)
            times.append(min(timeit.repeat(lambda: fn(*call_args), number=1, repeat=args.repeat)))
        print(f"{label:<34}{times[0] * 1e3:>12.2f}{times[1] * 1e3:>15.2f}{times[0] / times[1]:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
