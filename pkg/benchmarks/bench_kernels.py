"""Compare the compiled and pure-Python stepping kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints the best wall time per kernel for each backend and the speed-up.
"""

import argparse
import math
import timeit

import numpy as np

from laap_lab import _pykernels

try:
    from laap_lab import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _cases():
    chi = _pykernels.chi_euler(4.0, 1.0, 0.5, 4e-5, 10**6)
    t = np.arange(chi.size, dtype=float) * 4e-5
    nlam = np.zeros_like(chi)
    return {
        "integrate_switching (one revolution, dt=1e-3)": lambda k: k.integrate_switching(
            2.0, 2.0, 0.0, 1e-3, 2 * math.pi, 2.0, 1e-6, 1e-3
        ),
        "chi_euler (1e5 steps)": lambda k: k.chi_euler(4.0, 1.0, 0.5, 4e-5, 10**5),
        f"chi_first_violation ({chi.size} samples)": lambda k: k.chi_first_violation(
            chi, t, 1.0, 0.5, nlam, 1e-10
        ),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels not available; rebuild with `pip install -e . --no-build-isolation`")
        return
    print(f"{'kernel':50s} {'python [s]':>11s} {'cython [s]':>11s} {'speed-up':>9s}")
    for name, fn in _cases().items():
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        print(f"{name:50s} {py:11.4f} {cy:11.5f} {py / cy:8.1f}x")


if __name__ == "__main__":
    main()
